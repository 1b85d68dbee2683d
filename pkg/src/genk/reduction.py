"""Fiberwise linear algebra of Courant reduction.

Everything here happens at a single point: an isotropic subspace K of
V + V*, its pairing-orthogonal K^perp, the quotient K^perp / K with its induced
pairing, and the transport of a generalized metric (and a generalized Kahler
pair) through the metric complement K^G = K^perp & G(K^perp).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import null_space, subspace_angles

from .clifford import GenMetric, metric_split, pairing_matrix, two_form_matrix
from .errors import (
    ConnectionAxiomError,
    DegenerateReduction,
    DimensionMismatch,
    NonIsotropicError,
)
from .exterior import Form, wedge
from .gk import GKFiber
from .report import CheckResult

ISO_COND = 1e-9
ANGLE_TOL = 1e-8


def rref_basis(V: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Canonical basis of span(V): columns of the reduced row echelon form of V^T."""
    R = np.array(V.T, dtype=float)
    rows, cols = R.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = r + int(np.argmax(np.abs(R[r:, c])))
        if abs(R[piv, c]) < tol:
            continue
        R[[r, piv]] = R[[piv, r]]
        R[r] /= R[r, c]
        for i in range(rows):
            if i != r:
                R[i] -= R[i, c] * R[r]
        r += 1
    out = R[:r].T
    out[np.abs(out) < tol] = 0.0
    return out


def signature(M: np.ndarray, tol: float = 1e-10) -> tuple[int, int]:
    ev = np.linalg.eigvalsh((M + M.T) / 2)
    scale = max(1.0, np.abs(ev).max())
    return int(np.sum(ev > tol * scale)), int(np.sum(ev < -tol * scale))


@dataclass(frozen=True, eq=False)
class ReductionProblem:
    """Isotropic K (columns of ``K``) in R^m + R^m*, with optional metric or GK pair."""

    K: np.ndarray = field(repr=False)
    metric: GenMetric | None = None
    gk: GKFiber | None = None
    tol: float = 1e-10

    def __post_init__(self):
        K = np.array(self.K, dtype=float)
        if K.ndim == 1:
            K = K[:, None]
        if K.shape[0] % 2:
            raise DimensionMismatch(f"generators must have even length, got {K.shape[0]}")
        m = K.shape[0] // 2
        if K.shape[1] and np.linalg.matrix_rank(K, tol=1e-9) < K.shape[1]:
            raise DegenerateReduction("generators of K are linearly dependent")
        gram = K.T @ pairing_matrix(m) @ K
        if K.shape[1] and np.abs(gram).max() > self.tol * max(1.0, np.abs(K).max() ** 2):
            raise NonIsotropicError(f"K is not isotropic (max pairing {np.abs(gram).max():.2e})")
        K.setflags(write=False)
        object.__setattr__(self, "K", K)
        if self.gk is not None and self.metric is None:
            object.__setattr__(self, "metric", self.gk.metric)
        for obj in (self.metric,):
            if obj is not None and obj.dim != m:
                raise DimensionMismatch("metric and K live in different dimensions")

    @property
    def dim(self) -> int:
        return self.K.shape[0] // 2

    @property
    def rank(self) -> int:
        return self.K.shape[1]

    @property
    def X(self) -> np.ndarray:
        """Tangent parts of the generators, one column each."""
        return self.K[: self.dim]

    @property
    def xi(self) -> np.ndarray:
        return self.K[self.dim :]

    @classmethod
    def from_generators(cls, gens, **kw) -> ReductionProblem:
        gens = [np.asarray(getattr(g, "array", g), dtype=float) for g in gens]
        if not gens:
            raise DegenerateReduction("use an explicit (2m, 0) array for K = 0")
        return cls(np.stack(gens, axis=1), **kw)


@dataclass
class ReducedFiber:
    """K^perp / K with its induced structures, expressed in a quotient basis.

    ``basis`` holds representatives in V + V* (the canonical complement of K
    inside K^perp), ``pairing`` is their Gram matrix, and ``metric``, ``J1``,
    ``J2`` are matrices acting on quotient coordinates.
    """

    basis: np.ndarray
    pairing: np.ndarray
    signature: tuple[int, int]
    kg: np.ndarray | None = None
    phi: np.ndarray | None = None
    conditioning: float | None = None
    metric: np.ndarray | None = None
    tau_plus: np.ndarray | None = None
    tangent_metric: np.ndarray | None = None
    J1: np.ndarray | None = None
    J2: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def metric_gram(self) -> np.ndarray | None:
        if self.metric is None:
            return None
        return self.pairing @ self.metric


def k_perp(P: ReductionProblem) -> np.ndarray:
    m = P.dim
    if P.rank == 0:
        return np.eye(2 * m)
    return rref_basis(null_space(P.K.T @ pairing_matrix(m)))


def _complement(K: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Canonical complement of span(K) inside span(W), K inside W."""
    n = W.shape[0]
    if K.shape[1] == 0:
        return rref_basis(W)
    Qk, _ = np.linalg.qr(K)
    proj = (np.eye(n) - Qk @ Qk.T) @ W
    U, s, _ = np.linalg.svd(proj, full_matrices=False)
    r = int(np.sum(s > 1e-10 * max(1.0, s.max(initial=0))))
    return rref_basis(U[:, :r])


def quotient_coords(P: ReductionProblem, Q: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Coordinates of the classes of the columns of V (in K^perp) in the basis Q."""
    M = np.hstack([Q, P.K])
    c, *_ = np.linalg.lstsq(M, V, rcond=None)
    return c[: Q.shape[1]]


def quotient_fiber(P: ReductionProblem) -> ReducedFiber:
    m, k = P.dim, P.rank
    Kp = k_perp(P)
    if Kp.shape[1] != 2 * m - k:
        raise DegenerateReduction(f"dim K^perp = {Kp.shape[1]}, expected {2 * m - k}")
    Q = _complement(P.K, Kp)
    gram = Q.T @ pairing_matrix(m) @ Q
    sig = signature(gram)
    if sig != (m - k, m - k):
        raise DegenerateReduction(f"quotient pairing has signature {sig}")
    return ReducedFiber(basis=Q, pairing=gram, signature=sig)


def kg_space(P: ReductionProblem) -> np.ndarray:
    """K^G = K^perp & G(K^perp), as the null space of the stacked constraints."""
    if P.metric is None:
        raise DegenerateReduction("K^G needs a generalized metric")
    m = P.dim
    if P.rank == 0:
        return np.eye(2 * m)
    Pm = pairing_matrix(m)
    # G is an involution, so v is in G(K^perp) iff G v is in K^perp
    A = np.vstack([P.K.T @ Pm, P.K.T @ Pm @ P.metric.matrix])
    return rref_basis(null_space(A))


def reduced_metric(P: ReductionProblem) -> ReducedFiber:
    """Quotient with the transported metric, tau_+ and the metric it induces."""
    if P.metric is None:
        raise DegenerateReduction("reduced_metric needs a generalized metric")
    m, k = P.dim, P.rank
    red = quotient_fiber(P)
    KG = kg_space(P)
    if KG.shape[1] != 2 * m - 2 * k:
        raise DegenerateReduction(f"dim K^G = {KG.shape[1]}, expected {2 * m - 2 * k}")
    Phi = quotient_coords(P, red.basis, KG)
    s = np.linalg.svd(Phi, compute_uv=False)
    cond = float(s.min() / s.max()) if s.size else 1.0
    if cond < ISO_COND:
        raise DegenerateReduction(f"K^G -> K^perp/K is not an isomorphism (ratio {cond:.2e})")
    G = P.metric.matrix
    # G restricted to K^G in K^G coordinates
    GK, *_ = np.linalg.lstsq(KG, G @ KG, rcond=None)
    Gred = Phi @ GK @ np.linalg.inv(Phi) if Phi.size else Phi
    red.kg = KG
    red.phi = Phi
    red.conditioning = cond
    red.metric = Gred
    tau, gt = tau_plus(P)
    red.tau_plus = tau
    red.tangent_metric = gt
    return red


def tau_plus(P: ReductionProblem) -> tuple[np.ndarray, np.ndarray]:
    """tau_+ = {Y : (g X_a + xi_a)(Y) = 0}, in the metric splitting, and g on it."""
    m, k = P.dim, P.rank
    g, B = metric_split(P.metric)
    Bm = two_form_matrix(B).real
    X = P.X
    # move the generators to the frame where G is block diagonal: xi -> xi + i_X B
    xi = P.xi - Bm @ X
    rows = (g @ X + xi).T
    tau = np.eye(m) if k == 0 else null_space(rows)
    if tau.shape[1] != m - k:
        raise DegenerateReduction(f"tau_+ has dimension {tau.shape[1]}, expected {m - k}")
    if k and np.linalg.matrix_rank(X, tol=1e-9) == k:
        joint = np.hstack([tau, X])
        if np.linalg.svd(joint, compute_uv=False).min() < 1e-9:
            raise DegenerateReduction("tau_+ is not transversal to the orbit directions")
    tau = rref_basis(tau)
    return tau, tau.T @ g @ tau


def v_plus_kg_residual(P: ReductionProblem, red: ReducedFiber) -> float:
    """Distance between V+ & K^G and {Y + N Y : Y in tau_+}."""
    g, B = metric_split(P.metric)
    N = g + two_form_matrix(B).real
    lifted = np.vstack([red.tau_plus, N @ red.tau_plus])
    Vp = P.metric.v_plus()
    from .gk import _intersection

    inter = _intersection(Vp.astype(complex), red.kg.astype(complex))
    if inter.shape[1] != lifted.shape[1]:
        return float("inf")
    if inter.shape[1] == 0:
        return 0.0
    return float(np.max(subspace_angles(lifted, inter.real)))


def b_theta(theta, X, xi, exact: bool = False) -> Form:
    """B_theta = sum_a theta^a ^ xi_a + 1/2 sum_ab xi_b(X_a) theta^a ^ theta^b.

    ``theta`` has one covector per row; ``X`` and ``xi`` one generator per column.
    """
    conv = (lambda v: Fraction(v)) if exact else float
    theta = np.array([[conv(v) for v in row] for row in np.atleast_2d(theta)], dtype=object)
    X = np.array([[conv(v) for v in row] for row in np.atleast_2d(X)], dtype=object)
    xi = np.array([[conv(v) for v in row] for row in np.atleast_2d(xi)], dtype=object)
    k, m = theta.shape
    if X.shape != (m, k) or xi.shape != (m, k):
        raise DimensionMismatch(f"theta {theta.shape}, X {X.shape}, xi {xi.shape}")
    pair = theta.dot(X)
    eye = np.array([[int(a == b) for b in range(k)] for a in range(k)], dtype=object)
    tol = 0 if exact else 1e-12
    if np.max(np.abs((pair - eye).astype(float)), initial=0) > tol:
        raise ConnectionAxiomError("theta(X_b) != delta_b")
    xiX = xi.T.dot(X)  # xiX[b, a] = xi_b(X_a)
    if np.max(np.abs((xiX + xiX.T).astype(float)), initial=0) > (0 if exact else 1e-12):
        raise NonIsotropicError("generators are not isotropic: xi_a(X_b) + xi_b(X_a) != 0")

    def cov(v):
        out = Form.covector(list(v))
        return Form(m, out.coeffs if exact else out.coeffs.astype(complex))

    th = [cov(theta[a]) for a in range(k)]
    B = Form.zero(m, exact=exact)
    half = Fraction(1, 2) if exact else 0.5
    for a in range(k):
        B = B + wedge(th[a], cov(xi[:, a]))
        for b in range(k):
            if xiX[b, a] != 0:
                B = B + wedge(th[a], th[b]) * (half * xiX[b, a])
    return B


def b_theta_residual(B: Form, X, xi) -> float:
    """max_a |i_{X_a} B - xi_a| (exactly zero in rational mode)."""
    from .exterior import contract

    X = np.atleast_2d(np.asarray(X, dtype=object))
    xi = np.atleast_2d(np.asarray(xi, dtype=object))
    m = B.dim
    worst = 0.0
    for a in range(X.shape[1]):
        xa = X[:, a] if B.exact else X[:, a].astype(complex)
        c = contract(xa, B)
        target = Form.covector(list(xi[:, a]))
        if not B.exact:
            target = Form(m, target.coeffs.astype(complex))
        diff = c - target
        worst = max(worst, float(np.max(np.abs(diff.coeffs.astype(complex)))))
    return worst


@dataclass
class GKReduction:
    accepted: bool
    invariance_residual: float
    reduced: ReducedFiber
    axiom_residuals: dict[str, float] = field(default_factory=dict)

    def as_check(self, tol: float = 1e-10) -> CheckResult:
        return CheckResult(
            name="gk_reduction",
            anchor="reduces to a",
            residual=max(self.axiom_residuals.values(), default=0.0),
            threshold=tol,
            details={"accepted": self.accepted, "invariance_residual": self.invariance_residual},
            ok=self.accepted,
        )


def _invariance(J: np.ndarray, V: np.ndarray) -> float:
    if V.shape[1] == 0:
        return 0.0
    return float(np.max(subspace_angles(V, J @ V)))


def gk_reduce_fiber(P: ReductionProblem) -> GKReduction:
    """Reduce a GK pair when J1 K^G = K^G (then J2 K^G = K^G as well)."""
    if P.gk is None:
        raise DegenerateReduction("gk_reduce_fiber needs a generalized Kahler pair")
    red = reduced_metric(P)
    KG = red.kg
    J1, J2 = P.gk.J1.J, P.gk.J2.J
    inv = max(_invariance(J1, KG), _invariance(J2, KG))
    if inv > ANGLE_TOL:
        return GKReduction(False, inv, red)
    Phi = red.phi
    Phinv = np.linalg.inv(Phi)

    def transport(J):
        JK, *_ = np.linalg.lstsq(KG, J @ KG, rcond=None)
        return Phi @ JK @ Phinv

    R1, R2 = transport(J1), transport(J2)
    red.J1, red.J2 = R1, R2
    n = R1.shape[0]
    I = np.eye(n)
    Gr = -R1 @ R2
    quad = red.pairing @ Gr
    res = {
        "commute": float(np.abs(R1 @ R2 - R2 @ R1).max(initial=0)),
        "J1_square": float(np.abs(R1 @ R1 + I).max(initial=0)),
        "J2_square": float(np.abs(R2 @ R2 + I).max(initial=0)),
        "metric_match": float(np.abs(Gr - red.metric).max(initial=0)),
        "quadratic_symmetry": float(np.abs(quad - quad.T).max(initial=0)),
    }
    pos = float(np.linalg.eigvalsh((quad + quad.T) / 2).min()) if n else 1.0
    accepted = pos > 0
    res["positivity_margin"] = 0.0 if accepted else abs(pos)
    return GKReduction(accepted, inv, red, res)


def random_isotropic(rng: np.random.Generator, m: int, k: int) -> np.ndarray:
    """Random k-dimensional isotropic subspace: a tangent k-plane moved by
    a random B-field and a random element of GL(m)."""
    from .clifford import b_field_matrix
    from .gk import diffeo_matrix

    K0 = np.zeros((2 * m, k))
    K0[:k, :k] = np.eye(k)
    B = Form.random(m, rng, degree=2, real=True)
    A = rng.standard_normal((m, m)) + 2 * np.eye(m)
    # occasionally swap a tangent direction for a cotangent one (still isotropic)
    if k < m and rng.random() < 0.5:
        K0[:, -1] = 0
        K0[m + m - 1, -1] = 1.0
    T = diffeo_matrix(A) @ b_field_matrix(B).real
    return T @ K0
