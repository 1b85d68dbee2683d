"""Linear generalized complex structures, generalized Kahler pairs and the
induced decompositions of forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.linalg import null_space

from .clifford import (
    GenMetric,
    b_field_matrix,
    bracket_covector,
    chevalley,
    hodge_star_matrix,
    pairing_matrix,
    rho,
    spin_matrix,
    two_form_matrix,
)
from .errors import (
    CommutationError,
    DimensionMismatch,
    InvalidMetric,
    InvalidStructure,
    LatticeError,
    PositivityError,
)
from .exterior import Form, degrees, require_degree
from .report import CheckResult


def _lagrange_projectors(S: np.ndarray, eigs: list[complex]) -> list[np.ndarray]:
    """Spectral projectors of a diagonalizable S with known spectrum."""
    n = S.shape[0]
    eye = np.eye(n)
    out = []
    for lam in eigs:
        P = eye.astype(complex)
        for mu in eigs:
            if mu != lam:
                P = P @ (S - mu * eye) / (lam - mu)
        out.append(P)
    return out


@dataclass(frozen=True, eq=False)
class GCSFiber:
    """A linear generalized complex structure on R^m, m = 2n."""

    J: np.ndarray = field(repr=False)
    tol: float = 1e-10

    def __post_init__(self):
        J = np.array(self.J, dtype=float)
        if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] % 4:
            raise InvalidStructure(f"need a 2m x 2m matrix with m even, got {J.shape}")
        m = J.shape[0] // 2
        scale = max(1.0, np.abs(J).max()) ** 2
        if np.abs(J @ J + np.eye(2 * m)).max() > self.tol * scale:
            raise InvalidStructure("J^2 != -Id")
        P = pairing_matrix(m)
        if np.abs(J.T @ P @ J - P).max() > self.tol * scale:
            raise InvalidStructure("J is not orthogonal for the natural pairing")
        J.setflags(write=False)
        object.__setattr__(self, "J", J)

    @property
    def dim(self) -> int:
        return self.J.shape[0] // 2

    @property
    def n(self) -> int:
        return self.dim // 2

    @cached_property
    def spin(self) -> np.ndarray:
        """Action of J on forms through the spin representation."""
        return spin_matrix(self.J)

    @cached_property
    def projectors(self) -> dict[int, np.ndarray]:
        ks = list(range(-self.n, self.n + 1))
        Ps = _lagrange_projectors(self.spin, [1j * k for k in ks])
        for P in Ps:
            P.setflags(write=False)
        return dict(zip(ks, Ps))

    def projector(self, k: int) -> np.ndarray:
        if abs(k) > self.n:
            raise LatticeError(f"k = {k} outside -{self.n}..{self.n}")
        return self.projectors[k]

    @cached_property
    def jexp(self) -> np.ndarray:
        """exp(pi J / 2) on forms: multiplication by i^k on U^k."""
        return sum((1j**k) * P for k, P in self.projectors.items())

    @cached_property
    def L(self) -> np.ndarray:
        """Columns spanning the +i eigenspace of J."""
        return null_space(self.J - 1j * np.eye(2 * self.dim))

    @property
    def type(self) -> int:
        m = self.dim
        block = self.J[:m, m:]
        tol = 1e-9 * max(np.linalg.norm(self.J), 1.0)
        rank = int(np.sum(np.linalg.svd(block, compute_uv=False) > tol))
        return (m - rank) // 2

    @cached_property
    def canonical(self) -> Form:
        """A generator of the pure line U^n."""
        P = self.projectors[self.n]
        j = int(np.argmax(np.linalg.norm(P, axis=0)))
        v = P[:, j]
        # normalize the lowest-degree coefficient of largest size to 1
        deg = degrees(self.dim)
        mags = np.abs(v)
        low = min(deg[mags > 1e-9 * mags.max()])
        idx = np.where(deg == low, mags, 0).argmax()
        return Form(self.dim, v / v[idx])

    @property
    def parity(self) -> str:
        return "even" if self.type % 2 == 0 else "odd"

    def canonical_rank(self) -> int:
        return int(round(np.trace(self.projectors[self.n]).real))


def complex_structure_matrix(J_tm) -> np.ndarray:
    """Generalized complex structure (-J 0; 0 J^T) of a linear complex structure."""
    J_tm = np.asarray(J_tm, dtype=float)
    m = J_tm.shape[0]
    if J_tm.shape != (m, m) or np.abs(J_tm @ J_tm + np.eye(m)).max() > 1e-10:
        raise InvalidStructure("input is not a complex structure")
    Z = np.zeros((m, m))
    return np.block([[-J_tm, Z], [Z, J_tm.T]])


def symplectic_structure_matrix(omega: Form) -> np.ndarray:
    """Generalized complex structure (0 -W^-1; W 0) with W X = i_X omega."""
    require_degree(omega, 2, "symplectic form")
    Om = two_form_matrix(omega)
    if np.iscomplexobj(Om):
        if np.abs(Om.imag).max() > 0:
            raise InvalidStructure("symplectic form must be real")
        Om = Om.real
    m = Om.shape[0]
    if np.linalg.svd(Om, compute_uv=False).min() < 1e-10:
        raise InvalidStructure("omega is degenerate")
    W = Om.T
    Z = np.zeros((m, m))
    return np.block([[Z, -np.linalg.inv(W)], [W, Z]])


def gcs_from_complex(J_tm) -> GCSFiber:
    return GCSFiber(complex_structure_matrix(J_tm))


def gcs_from_symplectic(omega: Form) -> GCSFiber:
    return GCSFiber(symplectic_structure_matrix(omega))


def uk_project(S: GCSFiber, k: int, a: Form) -> Form:
    if a.dim != S.dim:
        raise DimensionMismatch("dimension mismatch")
    return Form(a.dim, S.projector(k) @ a.coeffs)


def jexp_action(S: GCSFiber, a: Form) -> Form:
    return Form(a.dim, S.jexp @ a.coeffs)


def orientation_of(S: GCSFiber) -> int:
    """Sign of the real volume form (-1)^(deg rho + 1) i^(-n) (rho, conj rho)_Ch."""
    rho_ = S.canonical
    deg = min(rho_.present_degrees())
    val = (-1) ** (deg + 1) * (1j ** (-S.n)) * chevalley(rho_, rho_.conj())
    if abs(val) < 1e-10 * max(1.0, rho_.norm() ** 2):
        raise InvalidStructure("canonical line is degenerate")
    return 1 if val.real > 0 else -1


def integrability_check_const(S: GCSFiber, H: Form, tol: float = 1e-10) -> CheckResult:
    """Is [L, L]_H inside L for constant sections?"""
    require_degree(H, 3, "H")
    m = S.dim
    L = S.L
    PL = (np.eye(2 * m) - 1j * S.J) / 2
    worst = 0.0
    for a in range(L.shape[1]):
        for b in range(a + 1, L.shape[1]):
            xi = bracket_covector(L[:m, a], L[:m, b], H)
            br = np.concatenate([np.zeros(m), xi])
            worst = max(worst, float(np.linalg.norm(br - PL @ br)))
    return CheckResult(
        name="integrability",
        anchor="+i-eigenspace, L, is involutive",
        residual=worst,
        threshold=tol,
        details={"type": S.type},
    )


# generalized Kahler pairs ----------------------------------------------------


def _intersection(A: np.ndarray, B: np.ndarray, tol=1e-9) -> np.ndarray:
    """Columns spanning span(A) & span(B)."""
    if A.shape[1] == 0 or B.shape[1] == 0:
        return np.zeros((A.shape[0], 0), dtype=complex)
    N = null_space(np.hstack([A, -B]), rcond=tol)
    V = A @ N[: A.shape[1]]
    if V.shape[1] == 0:
        return V
    Q, _ = np.linalg.qr(V)
    return Q


@dataclass(frozen=True, eq=False)
class GKFiber:
    """A commuting pair (J1, J2) with -J1 J2 a generalized metric."""

    J1: GCSFiber
    J2: GCSFiber
    metric: GenMetric
    orientation: int

    @property
    def dim(self) -> int:
        return self.J1.dim

    @cached_property
    def star(self) -> np.ndarray:
        return hodge_star_matrix(self.metric, self.orientation)

    @cached_property
    def upq(self) -> dict[tuple[int, int], np.ndarray]:
        """Nonzero projectors onto U^{p,q}."""
        out = {}
        for p, P1 in self.J1.projectors.items():
            for q, P2 in self.J2.projectors.items():
                P = P1 @ P2
                if np.abs(P).max() > 1e-8:
                    P.setflags(write=False)
                    out[(p, q)] = P
        return out

    @property
    def lattice(self) -> list[tuple[int, int]]:
        return sorted(self.upq)

    def projector(self, p: int, q: int) -> np.ndarray:
        try:
            return self.upq[(p, q)]
        except KeyError:
            raise LatticeError(f"(p, q) = ({p}, {q}) is not in the lattice") from None

    def v_subspace(self, sign: int, holo: bool) -> np.ndarray:
        """Columns spanning V_sign^{1,0} (holo) or V_sign^{0,1}."""
        L1 = self.J1.L if holo else self.J1.L.conj()
        L2 = self.J2.L if holo == (sign > 0) else self.J2.L.conj()
        return _intersection(L1, L2)

    def arrow(self, sign: int, holo: bool) -> tuple[int, int]:
        """Bidegree shift of Clifford multiplication by V_sign^{1,0 or 0,1}."""
        dp = 1 if holo else -1
        dq = dp if sign > 0 else -dp
        return dp, dq


# Lattice occupied by a generalized Kahler structure in real dimension four.
LATTICE_M4 = sorted(
    [(0, 2), (0, -2), (2, 0), (-2, 0), (1, 1), (1, -1), (-1, 1), (-1, -1), (0, 0)]
)


def gk_validate(J1, J2, tol: float = 1e-10) -> GKFiber:
    J1 = J1 if isinstance(J1, GCSFiber) else GCSFiber(J1)
    J2 = J2 if isinstance(J2, GCSFiber) else GCSFiber(J2)
    if J1.dim != J2.dim:
        raise DimensionMismatch("structures of different dimension")
    scale = max(1.0, np.abs(J1.J).max() * np.abs(J2.J).max())
    if np.abs(J1.J @ J2.J - J2.J @ J1.J).max() > tol * scale:
        raise CommutationError("J1 and J2 do not commute")
    try:
        G = GenMetric(-J1.J @ J2.J, tol=tol)
    except InvalidMetric as exc:
        raise PositivityError(f"-J1 J2 is not a generalized metric: {exc}") from None
    return GKFiber(J1, J2, G, orientation_of(J1))


def upq_project(K: GKFiber, p: int, q: int, a: Form) -> Form:
    return Form(a.dim, K.projector(p, q) @ a.coeffs)


def verify_star_identity(K: GKFiber, tol: float = 1e-10) -> CheckResult:
    """Residual of star = -Jexp1 Jexp2, and of star = -i^(p+q) on each U^{p,q}."""
    star = K.star
    op = float(np.abs(star + K.J1.jexp @ K.J2.jexp).max())
    per = {}
    for (p, q), P in K.upq.items():
        per[f"({p}, {q})"] = float(np.abs(star @ P + (1j ** (p + q)) * P).max())
    return CheckResult(
        name="star_identity",
        anchor="In a generalized Hermitian manifold",
        residual=max([op] + list(per.values())),
        threshold=tol,
        details={"operator_residual": op},
        per_mode=per,
    )


def chevalley_bigrading_residual(K: GKFiber) -> float:
    """Largest Chevalley pairing between U^{p,q} and U^{p',q'} with (p',q') != (-p,-q)."""
    from .clifford import chevalley_matrix

    C = chevalley_matrix(K.dim)
    worst = 0.0
    for a, Pa in K.upq.items():
        for b, Pb in K.upq.items():
            if b != (-a[0], -a[1]):
                worst = max(worst, float(np.abs(Pa.T @ C @ Pb).max()))
    return worst


# recipes ------------------------------------------------------------------------


def standard_complex_structure(m: int = 4) -> np.ndarray:
    """J e_{2i-1} = -e_{2i}, J e_{2i} = e_{2i-1}."""
    J = np.zeros((m, m))
    for i in range(0, m, 2):
        J[i + 1, i] = -1.0
        J[i, i + 1] = 1.0
    return J


def kahler_form(g, J_tm) -> Form:
    """omega(X, Y) = g(X, J Y)."""
    return Form.two_form(np.asarray(g) @ np.asarray(J_tm))


def diffeo_matrix(A) -> np.ndarray:
    """Action of A in GL(m) on V + V*: X -> A X, xi -> A^-T xi."""
    A = np.asarray(A, dtype=float)
    m = A.shape[0]
    Z = np.zeros((m, m))
    return np.block([[A, Z], [Z, np.linalg.inv(A).T]])


def kahler_pair(
    g=None, J_tm=None, B: Form | None = None, A=None, tol: float = 1e-10
) -> GKFiber:
    """Generalized Kahler pair of a linear Kahler structure, then transformed
    by the B-field B and the linear map A (applied in that order)."""
    m = 4 if g is None and J_tm is None else np.asarray(g if g is not None else J_tm).shape[0]
    g = np.eye(m) if g is None else np.asarray(g, dtype=float)
    J_tm = standard_complex_structure(m) if J_tm is None else np.asarray(J_tm, dtype=float)
    if np.abs(J_tm.T @ g @ J_tm - g).max() > 1e-10:
        raise InvalidStructure("J is not g-orthogonal")
    J1 = complex_structure_matrix(J_tm)
    J2 = symplectic_structure_matrix(kahler_form(g, J_tm))
    T = np.eye(2 * m)
    if B is not None:
        T = b_field_matrix(B).real @ T
    if A is not None:
        T = diffeo_matrix(A) @ T
    Tinv = np.linalg.inv(T)
    return gk_validate(T @ J1 @ Tinv, T @ J2 @ Tinv, tol=tol)


def flat_kahler(m: int = 4) -> GKFiber:
    return kahler_pair(np.eye(m), standard_complex_structure(m))


def random_gk_fiber(rng: np.random.Generator, m: int = 4, scale: float = 0.5) -> GKFiber:
    """Flat Kahler pair moved by a random B-field and a random linear map."""
    B = Form.random(m, rng, degree=2, real=True) * scale
    # well-conditioned A = Q1 diag(e^s) Q2, with either orientation
    Q1, _ = np.linalg.qr(rng.standard_normal((m, m)))
    Q2, _ = np.linalg.qr(rng.standard_normal((m, m)))
    A = Q1 @ np.diag(np.exp(scale * rng.uniform(-1, 1, m))) @ Q2
    return kahler_pair(B=B, A=A)


def random_generalized_metric(rng: np.random.Generator, m: int = 4) -> GenMetric:
    g = rng.standard_normal((m, m))
    g = g @ g.T + 0.5 * np.eye(m)
    B = Form.random(m, rng, degree=2, real=True)
    return GenMetric.from_metric(g, B)


def clifford_arrow_residual(K: GKFiber, rng: np.random.Generator, samples: int = 3) -> float:
    """How far Clifford multiplication by V_+-^{1,0 / 0,1} strays from the lattice arrow targets."""
    worst = 0.0
    for sign in (1, -1):
        for holo in (True, False):
            V = K.v_subspace(sign, holo)
            dp, dq = K.arrow(sign, holo)
            for (p, q), P in K.upq.items():
                target = K.upq.get((p + dp, q + dq))
                for _ in range(samples):
                    v = V @ (rng.standard_normal(V.shape[1]) + 1j * rng.standard_normal(V.shape[1]))
                    a = P @ (rng.standard_normal(P.shape[0]) + 1j * rng.standard_normal(P.shape[0]))
                    out = rho(v) @ a
                    stray = out if target is None else out - target @ out
                    worst = max(worst, float(np.abs(stray).max()))
    return worst


__all__ = [
    "GCSFiber",
    "GKFiber",
    "LATTICE_M4",
    "chevalley_bigrading_residual",
    "clifford_arrow_residual",
    "complex_structure_matrix",
    "diffeo_matrix",
    "flat_kahler",
    "gcs_from_complex",
    "gcs_from_symplectic",
    "gk_validate",
    "integrability_check_const",
    "jexp_action",
    "kahler_form",
    "kahler_pair",
    "orientation_of",
    "random_generalized_metric",
    "random_gk_fiber",
    "standard_complex_structure",
    "symplectic_structure_matrix",
    "upq_project",
    "uk_project",
    "verify_star_identity",
]
