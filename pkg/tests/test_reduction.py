
import numpy as np
import pytest

from genk.checks import default_theta, reduction_suite
from genk.clifford import GenMetric, pairing_matrix
from genk.errors import ConnectionAxiomError, DegenerateReduction, DimensionMismatch, NonIsotropicError
from genk.exterior import Form
from genk.gk import complex_structure_matrix, flat_kahler, kahler_pair, standard_complex_structure
from genk.reduction import (
    ReductionProblem,
    b_theta,
    b_theta_residual,
    gk_reduce_fiber,
    k_perp,
    kg_space,
    quotient_fiber,
    reduced_metric,
    random_isotropic,
    tau_plus,
    v_plus_kg_residual,
)

from oracles import exact_isotropic


def unit(i, n=8):
    e = np.zeros(n)
    e[i] = 1.0
    return e


def test_k_e1_quotient():
    P = ReductionProblem(unit(0)[:, None], metric=GenMetric.euclidean(4))
    assert k_perp(P).shape == (8, 7)
    red = quotient_fiber(P)
    # canonical representatives e2..e4, dx2..dx4 with pairing P(3)
    assert np.allclose(red.basis, np.eye(8)[:, [1, 2, 3, 5, 6, 7]])
    assert np.allclose(red.pairing, pairing_matrix(3))
    assert red.signature == (3, 3)
    tau, gt = tau_plus(P)
    assert np.allclose(tau, np.eye(4)[:, 1:])
    assert np.allclose(gt, np.eye(3))


def test_kg_dimension_and_vplus():
    P = ReductionProblem(unit(0)[:, None], metric=GenMetric.euclidean(4))
    assert kg_space(P).shape[1] == 6
    red = reduced_metric(P)
    assert red.conditioning > 0.1
    G = red.metric
    assert np.allclose(G @ G, np.eye(6))
    assert v_plus_kg_residual(P, red) < 1e-12


def test_flat_kahler_reduces_to_flat_kahler_on_r2():
    P = ReductionProblem(np.stack([unit(0), unit(1)], axis=1), gk=flat_kahler())
    res = gk_reduce_fiber(P)
    assert res.accepted and res.invariance_residual < 1e-12
    assert max(res.axiom_residuals.values()) < 1e-12
    # quotient basis e3, e4, dx3, dx4: the reduced pair is the flat pair of R^2
    K2 = kahler_pair(np.eye(2), standard_complex_structure(2))
    assert np.allclose(res.reduced.J1, K2.J1.J)
    assert np.allclose(res.reduced.J2, K2.J2.J)


def test_non_invariant_k_rejected():
    P = ReductionProblem(np.stack([unit(0), unit(2)], axis=1), gk=flat_kahler())
    res = gk_reduce_fiber(P)
    assert not res.accepted
    assert res.invariance_residual == pytest.approx(np.pi / 2)
    assert not res.as_check().passed


def test_input_errors():
    with pytest.raises(NonIsotropicError):
        ReductionProblem((unit(0) + unit(4))[:, None])
    with pytest.raises(DegenerateReduction):
        ReductionProblem(np.stack([unit(0), unit(0)], axis=1))
    with pytest.raises(DimensionMismatch):
        ReductionProblem(np.ones((7, 1)))
    with pytest.raises(DegenerateReduction):
        kg_space(ReductionProblem(unit(0)[:, None]))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_random_isotropic_reductions(rng, k):
    for _ in range(20):
        K = random_isotropic(rng, 4, k)
        assert np.abs(K.T @ pairing_matrix(4) @ K).max() < 1e-10
        from genk.gk import random_generalized_metric

        red = reduced_metric(ReductionProblem(K, metric=random_generalized_metric(rng)))
        assert red.kg.shape[1] == 8 - 2 * k
        assert red.signature == (4 - k, 4 - k)
        assert red.conditioning >= 1e-9
        # reduced metric is again a generalized metric on the quotient
        Gm = red.metric
        assert np.allclose(Gm @ Gm, np.eye(8 - 2 * k), atol=1e-8)
        q = red.pairing @ Gm
        assert np.allclose(q, q.T, atol=1e-8) and np.linalg.eigvalsh((q + q.T) / 2).min() > 0


def test_reduction_suite_summary(rng):
    out = reduction_suite(rng, 30)
    assert out["kg_dimension"] == 0 and out["signature"] == 0 and out["conditioning_deficit"] == 0
    assert out["min_conditioning"] >= 1e-9


@pytest.mark.parametrize("k", [1, 2, 3])
def test_b_theta_exact(rng, k):
    for _ in range(5):
        X, xi = exact_isotropic(rng, k)
        theta = default_theta(X.astype(float), exact=True)
        B = b_theta(theta, X, xi, exact=True)
        assert B.exact
        assert b_theta_residual(B, X, xi) == 0


def test_b_theta_float_and_errors(rng):
    X = np.eye(4)[:, :2]
    Bm = np.array([[0, 1, 2, 0], [-1, 0, 0, 3], [-2, 0, 0, 1], [0, -3, -1, 0]], dtype=float)
    xi = -(Bm @ X)
    B = b_theta(np.linalg.pinv(X), X, xi)
    assert b_theta_residual(B, X, xi) < 1e-14
    with pytest.raises(ConnectionAxiomError):
        b_theta(2 * np.linalg.pinv(X), X, xi)
    with pytest.raises(NonIsotropicError):
        b_theta(np.linalg.pinv(X), X, np.eye(4)[:, :2])
    with pytest.raises(DimensionMismatch):
        b_theta(np.eye(4)[:1], X, xi)


def test_complex_structure_round_trip():
    J = complex_structure_matrix(standard_complex_structure(4))
    assert np.allclose(J @ J, -np.eye(8))
