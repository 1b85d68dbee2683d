import numpy as np
import pytest

from genk import torus as tl
from genk.errors import DegreeError, InstantonGateError, InvalidMetric, ScenarioError
from genk.exterior import Form, LaForm, su2, u1
from genk.gk import flat_kahler

from oracles import betti_torus

H123 = Form.basis(4, 1, 2, 3)


def commuting_su2():
    g = su2()
    A = LaForm.tensor(Form.basis(4, 1), g, [0, 0, 0.3]) + LaForm.tensor(Form.basis(4, 2), g, [0, 0, 0.7])
    return g, A


def nonflat_su2():
    g = su2()
    return g, LaForm.tensor(Form.basis(4, 1), g, [1, 0, 0]) + LaForm.tensor(Form.basis(4, 2), g, [0, 1, 0])


def test_symbol_examples():
    S = tl.FourierScenario()
    assert np.abs(S.symbol((0, 0, 0, 0))).max() == 0
    S = tl.FourierScenario(H=H123)
    out = S.symbol((0, 0, 0, 0)) @ Form.scalar(4).coeffs
    assert np.allclose(out, H123.coeffs)
    g = su2()
    A = LaForm.tensor(Form.basis(4, 1), g, [0, 0, 1])
    S = tl.FourierScenario(algebra=g, A=A, radius=0)
    gamma = LaForm.tensor(Form.scalar(4), g, [1, 0, 0])
    expected = LaForm.tensor(Form.basis(4, 1), g, g.bracket([0, 0, 1], [1, 0, 0]))
    assert np.allclose(S.symbol((0, 0, 0, 0)) @ gamma.vector(), expected.vector())


def test_symbol_at_k_is_wedge_by_2pi_i_k():
    S = tl.FourierScenario()
    k = (1, -2, 0, 3)
    a = Form.basis(4, 2)
    out = Form(4, S.symbol(k) @ a.coeffs)
    kf = Form.covector(np.array(k) * 2j * np.pi)
    assert out.allclose(kf ^ a)


@pytest.mark.parametrize("make", ["u1", "u1_H", "su2"])
def test_reality_and_truncation_independence(make):
    if make == "su2":
        g, A = commuting_su2()
        S = tl.FourierScenario(algebra=g, A=A, radius=1)
    else:
        S = tl.FourierScenario(H=H123 if make == "u1_H" else None, radius=1)
    for k in [(0, 1, 0, 0), (1, -1, 2, 0)]:
        mk = tuple(-x for x in k)
        assert np.allclose(S.symbol(mk), S.symbol(k).conj())
        assert np.array_equal(S.symbol(k), S.with_radius(3).symbol(k))


def test_validation_errors():
    with pytest.raises(DegreeError):
        tl.FourierScenario(H=Form.basis(4, 1, 2))
    with pytest.raises(ScenarioError):
        tl.FourierScenario(gk=flat_kahler(), H=H123)
    with pytest.raises(InvalidMetric):
        tl.FourierScenario(metric=-np.eye(4))
    g = su2()
    with pytest.raises(DegreeError):
        tl.FourierScenario(algebra=g, A=LaForm.tensor(Form.basis(4, 1, 2), g, [1, 0, 0]))


def test_weight_matrix_and_star():
    S = tl.FourierScenario(algebra=su2())
    W = S.W
    assert np.allclose(W, W.conj().T) and np.linalg.eigvalsh(W).min() > 0
    assert np.allclose(S.adjoint(S.star), S.star)
    assert np.allclose(S.star @ S.star, np.eye(S.N))


@pytest.mark.parametrize("radius", [1, 2, 3])
def test_harmonic_dims_match_betti_numbers(radius):
    S = tl.FourierScenario(radius=radius)
    hs = tl.harmonic_spaces(S)
    assert hs["h_odd"] == betti_torus(1) + betti_torus(3) == 8
    # constants in ev+: 1 from degree 0 + 4 and the three self-dual 2-forms
    assert hs["h0"] == hs["h2"] == 1 + betti_torus(2) // 2
    assert hs["support"] == ["(0, 0, 0, 0)"]
    assert hs["hodge_mismatch"] == 0


def test_twisted_cohomology_at_zero_mode():
    S = tl.FourierScenario(H=H123, radius=1)
    hs = tl.harmonic_spaces(S)
    # H ^ kills 1 - vol but no self-dual 2-form, and the constant self-dual
    # 2-forms are not exact: three classes survive in each end
    assert hs["h0"] == 3 and hs["h2"] == 3 and hs["h_odd"] == 6
    assert hs["hodge_mismatch"] == 0


def test_twisted_les():
    S = tl.FourierScenario(H=H123, radius=1)
    res = tl.les_check(S)
    zero = res["(0, 0, 0, 0)"]
    assert zero["h"] == {"C'": [3, 4, 1], "C": [3, 6, 3], "C''": [1, 4, 3]}
    for key, r in res.items():
        assert r["rank_ok"]
        assert max(r["exactness_residual"], r["chain_residual"], r["ses_residual"]) < 1e-10
        if key != "(0, 0, 0, 0)":
            assert r["three_term"] is True


def test_untwisted_les_has_constants():
    S = tl.FourierScenario(radius=1)
    zero = tl.les_mode(S, (0, 0, 0, 0))
    assert zero["h"]["C''"][0] == 1 and zero["three_term"] is None and zero["rank_ok"]


@pytest.mark.parametrize("which", ["u1", "u1_H", "su2_flat", "su2_nonflat_H"])
def test_integration_by_parts(which):
    if which.startswith("su2"):
        g, A = commuting_su2() if which == "su2_flat" else nonflat_su2()
        S = tl.FourierScenario(algebra=g, A=A, H=H123 if which.endswith("H") else None, radius=1)
    else:
        S = tl.FourierScenario(H=H123 if which == "u1_H" else None, radius=1)
    assert max(tl.integration_by_parts_residual(S, k) for k in S.mode_list) < 1e-12


def test_moment_gate():
    g, A = nonflat_su2()
    S = tl.FourierScenario(algebra=g, A=A, radius=1)
    assert S.moment_norm > 0.5 and not S.is_instanton
    with pytest.raises(InstantonGateError, match="moment map nonzero"):
        tl.complex_assemble(S)
    g, A = commuting_su2()
    assert tl.FourierScenario(algebra=g, A=A).moment_norm == 0


def test_composition_and_isotropy(rng):
    g, A = commuting_su2()
    for S in (tl.FourierScenario(H=H123, radius=1), tl.FourierScenario(algebra=g, A=A, radius=1)):
        assert max(op.composition_residual() / op.scale for op in tl.complex_assemble(S)) < 1e-12
        assert tl.lifted_isotropy(S, rng, samples=3) < 1e-10


@pytest.fixture(scope="module")
def gk_scenarios():
    g, A = commuting_su2()
    return [tl.FourierScenario(gk=flat_kahler(), radius=1), tl.FourierScenario(algebra=g, A=A, gk=flat_kahler(), radius=1)]


def test_delta_and_adjoints(gk_scenarios):
    for S in gk_scenarios:
        for k in S.mode_list:
            assert max(tl.delta_mode(S, k).values()) < 1e-12
            assert max(tl.adjoint_mode(S, k).values()) < 1e-10


def test_delta_arrows_respect_lattice(gk_scenarios):
    S = gk_scenarios[0]
    parts = tl.delta_decompose(S, (1, 0, 0, 0))
    for name, (dp, dq) in tl.ARROWS.items():
        T = parts[name]
        for (p, q), P in S.upq.items():
            tgt = S.upq.get((p + dp, q + dq))
            leak = T @ P if tgt is None else T @ P - tgt @ T @ P
            assert np.abs(leak).max() < 1e-12


def test_laplacian_identities_as_computed(gk_scenarios):
    """Even slot: Delta^H = 2 Delta_{delta+-}.  Odd slot: the factor is one."""
    for S in gk_scenarios:
        for k in S.mode_list:
            r = tl.laplacian_mode(S, k)
            for key in ("ev_plus_H_eq_2plus", "ev_plus_H_eq_2minus", "mixed_minus_zero", "diag_plus_zero", "pq_preserved"):
                assert r[key] < 1e-9, key
            assert r["mixed_H_eq_plus"] < 1e-9 and r["diag_H_eq_minus"] < 1e-9


def test_odd_slot_factor_two_misses_by_the_whole_laplacian(gk_scenarios):
    S = gk_scenarios[0]
    k = (1, 0, 0, 0)
    D = S.symbol(k)
    LH0, LH1 = tl._sequence_laplacians(S, D)
    parts = tl.delta_decompose(S, k, D)
    _, Lp1 = tl._sequence_laplacians(S, parts["delta_plus"] + parts["delta_plus_bar"])
    mixed = S.upq[(-1, 1)] + S.upq[(1, -1)]
    miss = np.abs((LH1 - 2 * Lp1) @ mixed).max() / np.abs(LH1 @ mixed).max()
    assert miss == pytest.approx(1.0)


def test_inheritance(gk_scenarios):
    for S in gk_scenarios:
        for op in tl.complex_assemble(S):
            coh = tl.mode_cohomology(S, op)
            r = tl.inheritance_mode(S, coh)
            if coh.h_odd:
                assert r["invariance"] < 1e-10 and r["tau_plus"] < 1e-10 and r["gram_min_eig"] > 0
                assert tl.harmonic_pq_residual(S, coh.k, coh.harmonic) < 1e-10


def test_fourier_bracket(rng):
    e = np.eye(4)
    z = np.zeros(4)
    v = tl.FourierSection({(0, 0, 0, 0): (e[0], z)})
    w = tl.FourierSection({(0, 0, 0, 0): (e[1], z)})
    out = tl.courant_bracket_fourier(v, w, H123)
    assert np.allclose(out.modes[(0, 0, 0, 0)][1], -e[2])
    assert np.allclose(out.modes[(0, 0, 0, 0)][0], 0)
    c = tl.FourierSection({(0, 0, 0, 0): (rng.standard_normal(4), rng.standard_normal(4))})
    assert np.allclose(tl.courant_bracket_fourier(c, c).modes[(0, 0, 0, 0)][0], 0)
    p, q = (1, 0, 0, 0), (0, 1, -1, 0)
    out = tl.courant_bracket_fourier(tl.random_section(rng, [p]), tl.random_section(rng, [q]), {(0, 0, 1, 0): H123})
    assert out.support() <= {(1, 1, -1, 0), (1, 1, 0, 0)}
    for _ in range(5):
        B = {(0, 1, 0, 0): Form.random(4, rng, degree=2)}
        r = tl.b_transform_bracket_residual(
            tl.random_section(rng, [p]), tl.random_section(rng, [q]), {(0, 0, 0, 0): H123}, B
        )
        assert r < 1e-10


def test_thread_count_does_not_change_results(monkeypatch):
    S = tl.FourierScenario(H=H123, radius=1)
    monkeypatch.setenv("GENK_NUM_THREADS", "1")
    a = tl.les_check(S)
    monkeypatch.setenv("GENK_NUM_THREADS", "4")
    b = tl.les_check(S)
    assert list(a) == list(b)
    assert all(a[k]["h"] == b[k]["h"] and a[k]["exactness_residual"] == b[k]["exactness_residual"] for k in a)


def test_u1_default_algebra():
    assert tl.FourierScenario().algebra.name == u1().name
    assert len(tl.modes(2)) == 5**4
    assert tl.mode_key((0, -1, 2, 0)) == "(0, -1, 2, 0)"
