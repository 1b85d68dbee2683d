"""Catalog of verification checks.

Each entry turns a :class:`~genk.scenario.Scenario` into a
:class:`~genk.report.CheckResult`.  Entries are grouped in tiers; a scenario
runs the entries of the tiers it declares.  Randomized entries draw from
``scenario.rng(name)`` so a run is reproducible for a fixed seed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import torus as tl
from .clifford import GenVector, courant_bracket_const, hodge_star_matrix
from .errors import GenkError
from .exterior import Form, degrees, indices_of, wedge_matrices
from .gk import integrability_check_const, random_generalized_metric, verify_star_identity
from .reduction import (
    b_theta,
    b_theta_residual,
    gk_reduce_fiber,
    random_isotropic,
    reduced_metric,
    ReductionProblem,
)
from .report import CheckResult

# regroupings of the self-dual / anti-self-dual parity pieces (m = 4)
SD_REGROUPING = {
    ("od", 1): [(1, 1), (-1, -1)],
    ("od", -1): [(1, -1), (-1, 1)],
    ("ev", 1): [(2, 0), (0, 2), (-2, 0), (0, -2)],
    ("ev", -1): [(0, 0)],
}


@dataclass(frozen=True)
class CheckSpec:
    name: str
    tier: str
    anchor: str
    summary: str
    threshold: float
    fn: Callable


CATALOG: dict[str, CheckSpec] = {}


def _register(name, tier, anchor, summary, threshold):
    def deco(fn):
        CATALOG[name] = CheckSpec(name, tier, anchor, summary, threshold, fn)
        return fn

    return deco


def _skip(spec: CheckSpec, note: str) -> CheckResult:
    return CheckResult(spec.name, spec.anchor, 0.0, spec.threshold, skipped=True, note=note)


def classical_star_matrix(m: int = 4) -> np.ndarray:
    """Euclidean Hodge star e^I -> s e^{I^c} with e^I ^ e^{I^c} = s vol."""
    W = wedge_matrices(m)
    top = (1 << m) - 1
    out = np.zeros((1 << m, 1 << m))
    for mask in range(1 << m):
        comp = top ^ mask
        # e^I ^ e^{I^c}, built by wedging the factors of e^I onto e^{I^c} from the left
        e = np.zeros(1 << m)
        e[comp] = 1.0
        op = np.eye(1 << m)
        for i in reversed(indices_of(mask)):
            op = W[i - 1] @ op
        s = (op @ e)[top]
        out[comp, mask] = s
    return out


# fiber tier -------------------------------------------------------------------


def star_law_residuals(metrics, orientation: int = 1) -> dict[str, float]:
    """star^2 = Id over the given metrics, and the Euclidean comparison."""
    sq = 0.0
    for G in metrics:
        S = hodge_star_matrix(G, orientation)
        sq = max(sq, float(np.abs(S @ S - np.eye(S.shape[0])).max()))
    from .clifford import GenMetric

    S = hodge_star_matrix(GenMetric.euclidean(4), 1)
    C = classical_star_matrix(4)
    deg = degrees(4)
    out = {"star_squared": sq}
    for j, sign in ((0, -1), (2, 1), (4, -1)):
        cols = deg == j
        out[f"euclidean_degree_{j}"] = float(np.abs(S[:, cols] - sign * C[:, cols]).max())
    return out


@_register(
    "star_law",
    "fiber",
    "minus the classic Hodge star",
    "star^2 = Id; Euclidean star is the classical one on 2-forms and its negative in degrees 0, 4",
    1e-10,
)
def check_star_law(sc, samples: int = 100) -> CheckResult:
    spec = CATALOG["star_law"]
    rng = sc.rng(spec.name)
    metrics = [sc.genmetric] + [random_generalized_metric(rng) for _ in range(samples)]
    per = star_law_residuals(metrics, sc.fiber_orientation)
    return CheckResult(
        spec.name,
        spec.anchor,
        max(per.values()),
        sc.threshold(spec.name, spec.threshold),
        details={"metrics": len(metrics)},
        per_mode=per,
    )


@_register(
    "star_identity",
    "fiber",
    "In a generalized Hermitian manifold",
    "star = -Jexp1 Jexp2 on the spinor fiber and star = -i^(p+q) on U^{p,q}",
    1e-10,
)
def check_star_identity(sc) -> CheckResult:
    spec = CATALOG["star_identity"]
    if sc.gk is None:
        return _skip(spec, "no generalized Kahler pair")
    res = verify_star_identity(sc.gk, sc.threshold(spec.name, spec.threshold))
    res.anchor = spec.anchor
    return res


def sd_regrouping_residuals(K, forms=None) -> dict[str, float]:
    """Projector identities for the self-dual regroupings, plus their action on forms."""
    from .clifford import sd_projector

    Pp = sd_projector(K.metric, K.orientation)
    deg = degrees(4)
    par = {"ev": np.diag((deg % 2 == 0).astype(float)), "od": np.diag((deg % 2 == 1).astype(float))}
    out = {}
    for (parity, sign), blocks in SD_REGROUPING.items():
        lhs = par[parity] @ (Pp if sign > 0 else np.eye(16) - Pp)
        rhs = sum(K.projector(p, q) for p, q in blocks)
        key = f"{parity}{'+' if sign > 0 else '-'}"
        r = float(np.abs(lhs - rhs).max())
        if forms is not None:
            r = max(r, float(np.abs((lhs - rhs) @ forms).max()))
        out[key] = r
    return out


@_register(
    "sd_asd",
    "fiber",
    "+1-eigenspace of the generalized Hodge star",
    "self-dual and anti-self-dual parity pieces regroup the U^{p,q}",
    1e-10,
)
def check_sd_asd(sc, samples: int = 500) -> CheckResult:
    spec = CATALOG["sd_asd"]
    if sc.gk is None:
        return _skip(spec, "no generalized Kahler pair")
    rng = sc.rng(spec.name)
    forms = rng.standard_normal((16, samples)) + 1j * rng.standard_normal((16, samples))
    forms /= np.linalg.norm(forms, axis=0)
    per = sd_regrouping_residuals(sc.gk, forms)
    return CheckResult(
        spec.name,
        spec.anchor,
        max(per.values()),
        sc.threshold(spec.name, spec.threshold),
        details={"random_forms": samples},
        per_mode=per,
    )


@_register(
    "gk_validate",
    "fiber",
    "is a generalized metric",
    "J1, J2 commute, square to -1 and -J1 J2 is a positive generalized metric",
    1e-10,
)
def check_gk_validate(sc) -> CheckResult:
    spec = CATALOG["gk_validate"]
    K = sc.gk
    if K is None:
        return _skip(spec, "no generalized Kahler pair")
    J1, J2 = K.J1.J, K.J2.J
    n = J1.shape[0]
    I = np.eye(n)
    G = -J1 @ J2
    from .clifford import pairing_matrix

    Pm = pairing_matrix(n // 2)
    quad = Pm @ G
    per = {
        "commute": float(np.abs(J1 @ J2 - J2 @ J1).max()),
        "J1_square": float(np.abs(J1 @ J1 + I).max()),
        "J2_square": float(np.abs(J2 @ J2 + I).max()),
        "metric_involution": float(np.abs(G @ G - I).max()),
        "metric_self_adjoint": float(np.abs(quad - quad.T).max()),
    }
    margin = float(np.linalg.eigvalsh((quad + quad.T) / 2).min())
    return CheckResult(
        spec.name,
        spec.anchor,
        max(per.values()),
        sc.threshold(spec.name, spec.threshold),
        details={"positivity_margin": margin, "types": [K.J1.type, K.J2.type]},
        per_mode=per,
        ok=margin > 0,
    )


@_register(
    "integrability",
    "fiber",
    "+i-eigenspace, L, is involutive",
    "constant-section Courant involutivity of both structures with the scenario H",
    1e-10,
)
def check_integrability(sc) -> CheckResult:
    spec = CATALOG["integrability"]
    if sc.gk is None:
        return _skip(spec, "no generalized Kahler pair")
    tol = sc.threshold(spec.name, spec.threshold)
    r1 = integrability_check_const(sc.gk.J1, sc.H, tol)
    r2 = integrability_check_const(sc.gk.J2, sc.H, tol)
    return CheckResult(
        spec.name,
        spec.anchor,
        max(r1.residual, r2.residual),
        tol,
        per_mode={"J1": r1.residual, "J2": r2.residual},
    )


# metric lab --------------------------------------------------------------------


def _worst(rows: list[dict], keys=None) -> tuple[float, dict[str, float]]:
    """Max over modes of the named residuals, and the per-mode maxima."""
    per = {}
    for r in rows:
        vals = [v for k, v in r["values"].items() if keys is None or k in keys]
        per[r["mode"]] = max(vals, default=0.0)
    return max(per.values(), default=0.0), per


def _per_key(rows: list[dict]) -> dict[str, float]:
    out: dict[str, float] = {}
    for r in rows:
        for k, v in r["values"].items():
            out[k] = max(out.get(k, 0.0), float(v))
    return out


def _gated(spec: CheckSpec, sc) -> CheckResult | None:
    if not sc.torus.is_instanton:
        return _skip(spec, f"not an instanton: |F+| = {sc.torus.moment_norm:.3e}")
    return None


@_register(
    "integration_by_parts",
    "metric-lab",
    "Integration by parts",
    "<d_A^H a, b> = <a, d_A^H b> under the global Chevalley pairing",
    1e-12,
)
def check_integration_by_parts(sc, pairs: int = 100) -> CheckResult:
    spec = CATALOG["integration_by_parts"]
    S = sc.torus
    ks = S.mode_list
    per = dict(zip(map(tl.mode_key, ks), tl.map_modes(lambda k: tl.integration_by_parts_residual(S, k), ks)))
    # random pairs of truncated fields, paired mode k with -k
    rng = sc.rng(spec.name)
    basis = np.eye(S.N)
    worst_pair = 0.0
    small = min(S.radius, 1)
    kss = tl.modes(small)
    for _ in range(pairs):
        a = tl.random_real_field(S, rng, basis, small)
        b = tl.random_real_field(S, rng, basis, small)
        Da = {k: S.symbol(k) @ a[k] for k in kss}
        Db = {k: S.symbol(k) @ b[k] for k in kss}
        lhs = tl.global_pairing(S, Da, b)
        rhs = tl.global_pairing(S, a, Db)
        scale = max(1.0, abs(lhs), abs(rhs))
        worst_pair = max(worst_pair, abs(lhs - rhs) / scale)
    return CheckResult(
        spec.name,
        spec.anchor,
        max(max(per.values()), worst_pair),
        sc.threshold(spec.name, spec.threshold),
        details={"random_pairs": pairs, "random_pair_residual": worst_pair, "instanton": S.is_instanton},
        per_mode=per,
    )


@_register(
    "lifted_action_isotropy",
    "metric-lab",
    "is isotropic in",
    "<d_A^H a, d_A^H b> = 0 for random real a, b in the truncated ev+",
    1e-10,
)
def check_lifted_isotropy(sc, samples: int = 5) -> CheckResult:
    spec = CATALOG["lifted_action_isotropy"]
    skip = _gated(spec, sc)
    if skip:
        return skip
    r = tl.lifted_isotropy(sc.torus, sc.rng(spec.name), samples)
    return CheckResult(spec.name, spec.anchor, r, sc.threshold(spec.name, spec.threshold), details={"samples": samples})


@_register(
    "complex_composition",
    "metric-lab",
    "a short exact sequence of differential complexes",
    "d^H_{A+} o d_A^H = 0 per mode (the elliptic complex is a complex)",
    1e-12,
)
def check_complex_composition(sc) -> CheckResult:
    spec = CATALOG["complex_composition"]
    skip = _gated(spec, sc)
    if skip:
        return skip
    ops = tl.complex_assemble(sc.torus)
    per = {tl.mode_key(op.k): op.composition_residual() / op.scale for op in ops}
    S = sc.torus
    return CheckResult(
        spec.name,
        spec.anchor,
        max(per.values()),
        sc.threshold(spec.name, spec.threshold),
        details={"dims": [S.E0.shape[1], S.E1.shape[1], S.E0.shape[1]], "modes": len(ops)},
        per_mode=per,
    )


@_register(
    "harmonic_spaces",
    "metric-lab",
    "the d_A^H-harmonic odd forms",
    "harmonic odd dimension equals dim ker d_{A+} - rank d_A per mode",
    0.0,
)
def check_harmonic_spaces(sc) -> CheckResult:
    spec = CATALOG["harmonic_spaces"]
    skip = _gated(spec, sc)
    if skip:
        return skip
    hs = tl.harmonic_spaces(sc.torus)
    per = {k: float(abs(c.h_odd - c.kernel_minus_image)) for k, c in hs["per_mode"].items()}
    return CheckResult(
        spec.name,
        spec.anchor,
        float(hs["hodge_mismatch"]),
        sc.threshold(spec.name, spec.threshold),
        details={
            "h0": hs["h0"],
            "h_odd": hs["h_odd"],
            "h2": hs["h2"],
            "support": hs["support"],
            "per_mode_h_odd": {k: c.h_odd for k, c in hs["per_mode"].items() if c.h_odd},
        },
        per_mode=per,
    )


@_register(
    "les_exactness",
    "metric-lab",
    "the following sequence is exact",
    "long exact cohomology sequence of the column complexes, exact at every node",
    1e-10,
)
def check_les(sc) -> CheckResult:
    spec = CATALOG["les_exactness"]
    skip = _gated(spec, sc)
    if skip:
        return skip
    res = tl.les_check(sc.torus)
    per = {k: max(r["exactness_residual"], r["chain_residual"], r["ses_residual"]) for k, r in res.items()}
    rank_ok = all(r["rank_ok"] for r in res.values())
    three = [r["three_term"] for r in res.values() if r["three_term"] is not None]
    zero = res[tl.mode_key((0, 0, 0, 0))]
    return CheckResult(
        spec.name,
        spec.anchor,
        max(per.values()),
        sc.threshold(spec.name, spec.threshold),
        details={
            "rank_bookkeeping": rank_ok,
            "three_term_modes": len(three),
            "three_term_ok": all(three),
            "h_zero_mode": zero["h"],
        },
        per_mode=per,
        ok=rank_ok and all(three),
    )


# generalized Kahler lab ----------------------------------------------------------


def _per_mode_rows(S, fn) -> list[dict]:
    ks = S.mode_list
    vals = tl.map_modes(lambda k: fn(S, k), ks)
    return [{"mode": tl.mode_key(k), "values": v} for k, v in zip(ks, vals)]


@_register(
    "delta_decomposition",
    "gk-lab",
    "defines four operators",
    "d_A^H = delta_+ + delta_- + conj(delta_+) + conj(delta_-) along the lattice arrows",
    1e-12,
)
def check_delta(sc) -> CheckResult:
    spec = CATALOG["delta_decomposition"]
    rows = _per_mode_rows(sc.torus, tl.delta_mode)
    worst, per = _worst(rows)
    return CheckResult(
        spec.name, spec.anchor, worst, sc.threshold(spec.name, spec.threshold), details=_per_key(rows), per_mode=per
    )


@_register(
    "adjoints",
    "gk-lab",
    "the adjoints of the operators",
    "delta_+^* = -conj(delta_+), delta_-^* = conj(delta_-) under <a, star conj(b)>",
    1e-10,
)
def check_adjoints(sc) -> CheckResult:
    spec = CATALOG["adjoints"]
    rows = _per_mode_rows(sc.torus, tl.adjoint_mode)
    worst, per = _worst(rows)
    return CheckResult(
        spec.name, spec.anchor, worst, sc.threshold(spec.name, spec.threshold), details=_per_key(rows), per_mode=per
    )


@_register(
    "laplacians",
    "gk-lab",
    "all the Laplacians preserve the",
    "Delta^H = 2 Delta_{delta+-} on ev+; 2 Delta_+ with Delta_- = 0 on U^{-1,1}+U^{1,-1}; 2 Delta_- with Delta_+ = 0 on U^{1,1}+U^{-1,-1}",
    1e-9,
)
def check_laplacians(sc) -> CheckResult:
    spec = CATALOG["laplacians"]
    skip = _gated(spec, sc)
    if skip:
        return skip
    rows = _per_mode_rows(sc.torus, tl.laplacian_mode)
    worst, per = _worst(rows, tl.LAPLACIAN_ASSERTED)
    by_key = _per_key(rows)
    asserted = {k: v for k, v in by_key.items() if k in tl.LAPLACIAN_ASSERTED}
    diag = {k: v for k, v in by_key.items() if k in tl.LAPLACIAN_DIAGNOSTIC}
    return CheckResult(
        spec.name,
        spec.anchor,
        worst,
        sc.threshold(spec.name, spec.threshold),
        details={"identities": asserted, "odd_slot_factor_one": diag},
        per_mode=per,
    )


@_register(
    "gk_inheritance",
    "gk-lab",
    "by the reduction procedure",
    "harmonic space invariant under both structures; positive reduced metric; tau+ conditions",
    1e-10,
)
def check_inheritance(sc) -> CheckResult:
    spec = CATALOG["gk_inheritance"]
    skip = _gated(spec, sc)
    if skip:
        return skip
    S = sc.torus
    ops = tl.complex_assemble(S)
    cohs = tl.map_modes(lambda op: tl.mode_cohomology(S, op), ops)
    rows = tl.map_modes(lambda c: tl.inheritance_mode(S, c), cohs)
    per, gmin, pq = {}, np.inf, 0.0
    for c, r in zip(cohs, rows):
        if c.h_odd:
            key = tl.mode_key(c.k)
            per[key] = max(r["invariance"], r["tau_plus"])
            gmin = min(gmin, r["gram_min_eig"])
            pq = max(pq, tl.harmonic_pq_residual(S, c.k, c.harmonic))
    worst = max([pq] + list(per.values()))
    return CheckResult(
        spec.name,
        spec.anchor,
        worst,
        sc.threshold(spec.name, spec.threshold),
        details={
            "harmonic_dim": sum(c.h_odd for c in cohs),
            "gram_min_eig": gmin,
            "pq_components_harmonic": pq,
        },
        per_mode=per,
        ok=bool(gmin > 0) if per else True,
    )


# reduction ---------------------------------------------------------------------------


def reduction_suite(rng: np.random.Generator, samples: int, m: int = 4) -> dict[str, float]:
    """Random isotropic K of ranks 1..3 with random generalized metrics."""
    worst = {"kg_dimension": 0.0, "signature": 0.0, "conditioning_deficit": 0.0}
    min_cond = np.inf
    for i in range(samples):
        k = 1 + i % 3
        K = random_isotropic(rng, m, k)
        G = random_generalized_metric(rng, m)
        try:
            red = reduced_metric(ReductionProblem(K, metric=G))
        except GenkError:
            worst["conditioning_deficit"] = 1.0
            continue
        worst["kg_dimension"] = max(worst["kg_dimension"], abs(red.kg.shape[1] - (2 * m - 2 * k)))
        if red.signature != (m - k, m - k):
            worst["signature"] = 1.0
        min_cond = min(min_cond, red.conditioning)
    worst["min_conditioning"] = min_cond
    return worst


@_register(
    "reduction_linear_algebra",
    "reduction",
    "letting K^⊥ be the orthogonal complement",
    "dim K^G = 2m - 2 dim K, K^G -> K^perp/K well conditioned, split quotient signature",
    0.0,
)
def check_reduction(sc, samples: int = 200) -> CheckResult:
    spec = CATALOG["reduction_linear_algebra"]
    P = sc.reduction_problem
    red = reduced_metric(P)
    m, k = P.dim, P.rank
    own = {
        "kg_dimension": float(abs(red.kg.shape[1] - (2 * m - 2 * k))),
        "signature": float(red.signature != (m - k, m - k)),
    }
    suite = reduction_suite(sc.rng(spec.name), samples)
    min_cond = min(red.conditioning, suite.pop("min_conditioning"))
    per = {**own, **{f"random_{key}": v for key, v in suite.items()}}
    return CheckResult(
        spec.name,
        spec.anchor,
        max(per.values()),
        sc.threshold(spec.name, spec.threshold),
        details={"rank": k, "conditioning": red.conditioning, "min_conditioning": min_cond, "samples": samples},
        per_mode=per,
        ok=min_cond >= 1e-9,
    )


def default_theta(X: np.ndarray, exact: bool = False):
    """A connection form with theta(X_b) = delta: the pseudo-inverse of X."""
    if exact:
        from sympy import Matrix

        Xs = Matrix([[Fraction(v).limit_denominator(10**12) for v in row] for row in X.tolist()])
        th = (Xs.T * Xs).inv() * Xs.T
        return [[Fraction(int(v.p), int(v.q)) for v in th.row(i)] for i in range(th.rows)]
    return np.linalg.pinv(X)


@_register(
    "b_theta",
    "reduction",
    "the invariant 2-form",
    "i_{X_a} B_theta = xi_a (exactly zero in rational mode)",
    1e-12,
)
def check_b_theta(sc) -> CheckResult:
    spec = CATALOG["b_theta"]
    P = sc.reduction_problem
    X, xi = P.X, P.xi
    if np.linalg.matrix_rank(X, tol=1e-9) < P.rank:
        return _skip(spec, "orbit directions X_a are dependent: no connection form")
    data = sc.reduction or {}
    exact = sc.exact
    if exact:
        conv = np.vectorize(lambda v: Fraction(v).limit_denominator(10**12), otypes=[object])
        Xe, xie = conv(X), conv(xi)
        theta = data.get("theta") or default_theta(X, exact=True)
        theta = [[Fraction(v).limit_denominator(10**12) for v in row] for row in theta]
        B = b_theta(theta, Xe, xie, exact=True)
        r = b_theta_residual(B, Xe, xie)
    else:
        theta = np.array(data["theta"], dtype=float) if "theta" in data else default_theta(X)
        B = b_theta(theta, X, xi)
        r = b_theta_residual(B, X, xi)
    return CheckResult(
        spec.name,
        spec.anchor,
        r,
        0.0 if exact else sc.threshold(spec.name, spec.threshold),
        details={"arithmetic": "rational" if exact else "float", "B_theta": B.to_json()},
    )


@_register(
    "gk_reduction",
    "reduction",
    "reduces to a",
    "J1 K^G = K^G, then the transported pair is generalized Kahler on the quotient",
    1e-10,
)
def check_gk_reduction(sc) -> CheckResult:
    spec = CATALOG["gk_reduction"]
    P = sc.reduction_problem
    if P.gk is None:
        return _skip(spec, "no generalized Kahler pair")
    red = gk_reduce_fiber(P)
    res = red.as_check(sc.threshold(spec.name, spec.threshold))
    res.per_mode = dict(red.axiom_residuals)
    return res


@_register(
    "courant_bracket_b_transform",
    "reduction",
    "relate to the Courant bracket as follows",
    "[e^B v1, e^B v2]_{H-dB} = e^B [v1, v2]_H for Fourier sections; constant case agrees",
    1e-10,
)
def check_courant(sc, trials: int = 5) -> CheckResult:
    spec = CATALOG["courant_bracket_b_transform"]
    rng = sc.rng(spec.name)
    H = {(0, 0, 0, 0): sc.H}
    worst = 0.0
    support = [k for k in tl.modes(1) if sum(map(abs, k)) <= 1]
    for _ in range(trials):
        picks = rng.choice(len(support), 3, replace=False)
        v1 = tl.random_section(rng, [support[picks[0]]])
        v2 = tl.random_section(rng, [support[picks[1]]])
        k = support[picks[2]]
        B = {k: Form.random(4, rng, degree=2)}
        worst = max(worst, tl.b_transform_bracket_residual(v1, v2, H, B))
    # constant sections reduce to -i_Y i_X H
    const = 0.0
    for i, j in itertools.combinations(range(4), 2):
        v, w = GenVector.tangent(4, i), GenVector.tangent(4, j)
        f = tl.courant_bracket_fourier(
            tl.FourierSection({(0, 0, 0, 0): (v.X, v.xi)}), tl.FourierSection({(0, 0, 0, 0): (w.X, w.xi)}), sc.H
        )
        X, xi = f.modes[(0, 0, 0, 0)]
        ref = courant_bracket_const(v, w, sc.H)
        const = max(const, float(np.abs(X - ref.X).max()), float(np.abs(xi - ref.xi).max()))
    return CheckResult(
        spec.name,
        spec.anchor,
        max(worst, const),
        sc.threshold(spec.name, spec.threshold),
        per_mode={"b_transform": worst, "constant_sections": const},
    )


# orchestration ---------------------------------------------------------------------


def checks_for(tiers) -> list[CheckSpec]:
    return [c for c in CATALOG.values() if c.tier in tiers]


def run_checks(sc, names=None) -> list[CheckResult]:
    """Run the scenario's checks, concurrently if GENK_NUM_THREADS > 1, in catalog order."""
    specs = checks_for(sc.tiers) if names is None else [CATALOG[n] for n in names]
    return tl.map_modes(lambda spec: spec.fn(sc), specs)


def catalog_lines() -> list[str]:
    width = max(len(n) for n in CATALOG)
    return [f"{c.name:<{width}}  [{c.tier}]  anchor: \"{c.anchor}\"  {c.summary}" for c in CATALOG.values()]


__all__ = [
    "CATALOG",
    "CheckSpec",
    "catalog_lines",
    "checks_for",
    "classical_star_matrix",
    "run_checks",
]
