"""The split quadratic space V + V*, its spin representation on forms, and
the objects built from it: Chevalley pairing, B-fields, generalized metrics
and the generalized Hodge star.

Vectors of V + V* are stored as length-2m arrays ``(X, xi)``.  Linear maps on
V + V* are 2m x 2m matrices acting on such columns.  Linear maps on forms are
2^m x 2^m matrices acting on coefficient vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, InvalidMetric
from .exterior import (
    Form,
    contraction_matrices,
    degrees,
    exp_wedge,
    require_degree,
    reversal_signs,
    wedge,
    wedge_matrices,
    wedge_operator,
)


@dataclass(frozen=True, eq=False)
class GenVector:
    """X + xi with X tangent and xi cotangent."""

    X: np.ndarray
    xi: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X)
        xi = np.asarray(self.xi)
        if X.dtype != object:
            X = X.astype(complex)
        if xi.dtype != object:
            xi = xi.astype(complex)
        if X.shape != xi.shape or X.ndim != 1:
            raise DimensionMismatch(f"tangent {X.shape} vs cotangent {xi.shape}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "xi", xi)

    @property
    def dim(self) -> int:
        return self.X.shape[0]

    @classmethod
    def tangent(cls, m: int, i: int) -> GenVector:
        """e_i (1-based)."""
        X = np.zeros(m)
        X[i - 1] = 1.0
        return cls(X, np.zeros(m))

    @classmethod
    def cotangent(cls, m: int, i: int) -> GenVector:
        """dx^i (1-based)."""
        xi = np.zeros(m)
        xi[i - 1] = 1.0
        return cls(np.zeros(m), xi)

    @classmethod
    def from_array(cls, arr) -> GenVector:
        arr = np.asarray(arr)
        m = arr.shape[0] // 2
        if arr.shape != (2 * m,):
            raise DimensionMismatch(f"expected an even-length vector, got {arr.shape}")
        return cls(arr[:m], arr[m:])

    @property
    def array(self) -> np.ndarray:
        return np.concatenate([self.X, self.xi])

    def __add__(self, other: GenVector) -> GenVector:
        return GenVector(self.X + other.X, self.xi + other.xi)

    def __sub__(self, other: GenVector) -> GenVector:
        return GenVector(self.X - other.X, self.xi - other.xi)

    def __mul__(self, s) -> GenVector:
        return GenVector(self.X * s, self.xi * s)

    __rmul__ = __mul__

    def allclose(self, other: GenVector, atol=1e-12) -> bool:
        return bool(np.allclose(self.array, other.array, atol=atol, rtol=0))


@lru_cache(maxsize=None)
def pairing_matrix(m: int) -> np.ndarray:
    """Gram matrix of <X+xi, Y+eta> = (eta(X) + xi(Y)) / 2."""
    eye = np.eye(m)
    zero = np.zeros((m, m))
    P = 0.5 * np.block([[zero, eye], [eye, zero]])
    P.setflags(write=False)
    return P


def natural_pairing(v: GenVector, w: GenVector):
    if v.dim != w.dim:
        raise DimensionMismatch(f"dimension mismatch: {v.dim} vs {w.dim}")
    return (np.dot(w.xi, v.X) + np.dot(v.xi, w.X)) / 2


def clifford_act(v: GenVector, a: Form) -> Form:
    """(X + xi) . a = i_X a + xi ^ a."""
    if v.dim != a.dim:
        raise DimensionMismatch(f"dimension mismatch: {v.dim} vs {a.dim}")
    return Form(a.dim, rho(v.array) @ a.coeffs)


def rho(u) -> np.ndarray:
    """Spin representation matrix of a vector u = (X, xi) of V + V*."""
    u = np.asarray(u)
    m = u.shape[0] // 2
    C = contraction_matrices(m)
    W = wedge_matrices(m)
    out = np.zeros((1 << m, 1 << m), dtype=complex if np.iscomplexobj(u) else float)
    for i in range(m):
        if u[i] != 0:
            out = out + u[i] * C[i]
        if u[m + i] != 0:
            out = out + u[m + i] * W[i]
    return out


@lru_cache(maxsize=None)
def rho_basis(m: int) -> tuple[np.ndarray, ...]:
    """rho(e_1), ..., rho(e_m), rho(dx^1), ..., rho(dx^m)."""
    return tuple(contraction_matrices(m)) + tuple(wedge_matrices(m))


def spin_matrix(T) -> np.ndarray:
    """Derived spin representation of T in so(V + V*).

    It is the unique traceless operator S with [S, rho(v)] = rho(T v).
    """
    T = np.asarray(T)
    m = T.shape[0] // 2
    R = rho_basis(m)
    M = T @ np.linalg.inv(pairing_matrix(m))
    out = np.zeros((1 << m, 1 << m), dtype=np.result_type(T, float))
    for a in range(2 * m):
        for b in range(2 * m):
            if M[a, b] != 0:
                out = out + M[a, b] * (R[a] @ R[b])
    return out / 4


@lru_cache(maxsize=None)
def chevalley_matrix(m: int) -> np.ndarray:
    """C with (a, b)_Ch = a^T C b, where (a, b)_Ch = -(a ^ b^t)_top."""
    n = 1 << m
    C = np.zeros((n, n))
    top = n - 1
    rev = reversal_signs(m)
    from .kernels import wedge_sign

    for i in range(n):
        j = top ^ i
        C[i, j] = -wedge_sign(i, j) * rev[j]
    C.setflags(write=False)
    return C


def chevalley(a: Form, b: Form):
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.exact or b.exact:
        from .exterior import clifford_transpose

        return -wedge(a, clifford_transpose(b)).top()
    return a.coeffs @ chevalley_matrix(a.dim) @ b.coeffs


def chevalley_symmetry(m: int) -> dict[tuple[int, int], str]:
    """Observed symmetry of the pairing between degrees j and m - j."""
    C = chevalley_matrix(m)
    deg = degrees(m)
    out = {}
    for j in range(m + 1):
        rows = deg == j
        cols = deg == m - j
        block = C[np.ix_(rows, cols)]
        back = C[np.ix_(cols, rows)].T
        if np.array_equal(block, back):
            out[(j, m - j)] = "symmetric"
        elif np.array_equal(block, -back):
            out[(j, m - j)] = "antisymmetric"
        else:
            out[(j, m - j)] = "mixed"
    return out


# B-fields -----------------------------------------------------------------


def two_form_matrix(B: Form) -> np.ndarray:
    """Bm[i, k] = B(e_i, e_k)."""
    require_degree(B, 2, "B-field")
    m = B.dim
    Bm = np.zeros((m, m), dtype=B.coeffs.dtype if B.exact else complex)
    if B.exact:
        Bm[:] = 0
    for i in range(m):
        for k in range(i + 1, m):
            c = B.coeffs[(1 << i) | (1 << k)]
            Bm[i, k] = c
            Bm[k, i] = -c
    if not B.exact and np.all(Bm.imag == 0):
        Bm = Bm.real
    return Bm


def b_field_matrix(B: Form) -> np.ndarray:
    """e^B on V + V*: X + xi -> X + xi - i_X B."""
    Bm = two_form_matrix(B)
    m = B.dim
    out = np.eye(2 * m, dtype=Bm.dtype)
    if Bm.dtype == object:
        out = np.array([[int(i == j) for j in range(2 * m)] for i in range(2 * m)], dtype=object)
    out[m:, :m] = Bm
    return out


def b_transform(B: Form, v: GenVector) -> GenVector:
    return GenVector.from_array(b_field_matrix(B) @ v.array)


def b_spinor_matrix(B: Form) -> np.ndarray:
    """Spin lift of e^B: wedge with exp(B)."""
    require_degree(B, 2, "B-field")
    return wedge_operator(exp_wedge(B))


def b_transform_spinor(B: Form, a: Form) -> Form:
    require_degree(B, 2, "B-field")
    return wedge(exp_wedge(B), a)


# generalized metrics --------------------------------------------------------


def _is_spd(M, tol=1e-12) -> bool:
    if not np.allclose(M, M.T, atol=tol * max(1.0, np.abs(M).max())):
        return False
    return bool(np.linalg.eigvalsh((M + M.T) / 2).min() > tol)


@dataclass(frozen=True, eq=False)
class GenMetric:
    """Orthogonal, self-adjoint involution G of V + V* with <Gv, v> > 0."""

    matrix: np.ndarray = field(repr=False)
    tol: float = 1e-10

    def __post_init__(self):
        G = np.array(self.matrix, dtype=float)
        if G.ndim != 2 or G.shape[0] != G.shape[1] or G.shape[0] % 2:
            raise InvalidMetric(f"bad generalized metric shape {G.shape}")
        G.setflags(write=False)
        object.__setattr__(self, "matrix", G)
        self.validate()

    @property
    def dim(self) -> int:
        return self.matrix.shape[0] // 2

    def validate(self):
        G, tol, m = self.matrix, self.tol, self.dim
        P = pairing_matrix(m)
        scale = max(1.0, np.abs(G).max())
        if np.abs(G @ G - np.eye(2 * m)).max() > tol * scale**2:
            raise InvalidMetric("G^2 != Id")
        if np.abs(G.T @ P @ G - P).max() > tol * scale**2:
            raise InvalidMetric("G is not orthogonal for the natural pairing")
        PG = P @ G
        if np.abs(PG - PG.T).max() > tol * scale:
            raise InvalidMetric("G is not self-adjoint for the natural pairing")
        if np.linalg.eigvalsh((PG + PG.T) / 2).min() <= 0:
            raise InvalidMetric("<Gv, v> is not positive definite")

    @classmethod
    def from_metric(cls, g, B: Form | None = None) -> GenMetric:
        """e^B (0 g^-1; g 0) e^-B."""
        g = np.asarray(g, dtype=float)
        m = g.shape[0]
        if not _is_spd(g):
            raise InvalidMetric("g must be symmetric positive definite")
        block = np.block([[np.zeros((m, m)), np.linalg.inv(g)], [g, np.zeros((m, m))]])
        if B is None:
            return cls(block)
        E = b_field_matrix(B).real
        Einv = b_field_matrix(-1 * B).real
        return cls(E @ block @ Einv)

    @classmethod
    def euclidean(cls, m: int = 4) -> GenMetric:
        return cls.from_metric(np.eye(m))

    def v_plus(self) -> np.ndarray:
        """Columns spanning the +1 eigenspace."""
        return _eigenspace(self.matrix, 1.0, self.dim)

    def v_minus(self) -> np.ndarray:
        return _eigenspace(self.matrix, -1.0, self.dim)

    def split(self):
        return metric_split(self)

    def quadratic_form(self) -> np.ndarray:
        """Gram matrix of <G v, w>."""
        return pairing_matrix(self.dim) @ self.matrix

    def to_json(self) -> dict:
        return {"matrix": self.matrix.tolist()}


def _eigenspace(G, lam, m) -> np.ndarray:
    # G is an involution, so (I + lam G)/2 projects onto the lam-eigenspace
    Pr = (np.eye(2 * m) + lam * G) / 2
    U, s, _ = np.linalg.svd(Pr)
    return U[:, :m]


def metric_split(G: GenMetric):
    """Return (g, B) with G = e^B (0 g^-1; g 0) e^-B."""
    m = G.dim
    Vp = G.v_plus()
    T, C = Vp[:m], Vp[m:]
    if np.linalg.svd(T, compute_uv=False).min() < 1e-10:
        raise InvalidMetric("V+ meets the cotangent subspace")
    N = C @ np.linalg.inv(T)
    g = (N + N.T) / 2
    Bm = (N - N.T) / 2
    if not _is_spd(g):
        raise InvalidMetric("split metric is not positive definite")
    return g, Form.two_form(Bm)


def split_matrix(G: GenMetric) -> np.ndarray:
    """N = g + Bm with V+ = {(X, N X)}."""
    g, B = metric_split(G)
    return g + two_form_matrix(B).real


def oriented_v_plus_frame(G: GenMetric, orientation: int = 1) -> np.ndarray:
    """Columns e_i = (X_i, N X_i), X_i g-orthonormal and positively oriented."""
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    g, B = metric_split(G)
    N = g + two_form_matrix(B).real
    # Cholesky-based Gram-Schmidt of the standard frame
    L = np.linalg.cholesky(g)
    X = np.linalg.inv(L).T
    if np.sign(np.linalg.det(X)) != orientation:
        X[:, 0] = -X[:, 0]
    return np.vstack([X, N @ X])


def hodge_star_matrix(G: GenMetric, orientation: int = 1) -> np.ndarray:
    """Matrix of -e_m ... e_2 e_1 for an oriented orthonormal frame of V+."""
    E = oriented_v_plus_frame(G, orientation)
    m = G.dim
    out = np.eye(1 << m)
    for i in range(m):
        out = rho(E[:, i]) @ out
    return -out


def hodge_star(G: GenMetric, orientation: int, a: Form) -> Form:
    if a.dim != G.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {G.dim}")
    return Form(a.dim, hodge_star_matrix(G, orientation) @ a.coeffs)


def sd_projector(G: GenMetric, orientation: int = 1) -> np.ndarray:
    if G.dim != 4:
        raise DimensionMismatch("self-duality needs m = 4")
    return (np.eye(16) + hodge_star_matrix(G, orientation)) / 2


def sd_asd_project(G: GenMetric, orientation: int, a: Form) -> tuple[Form, Form]:
    Pp = sd_projector(G, orientation)
    plus = Form(4, Pp @ a.coeffs)
    return plus, a - plus


def courant_bracket_const(v: GenVector, w: GenVector, H: Form) -> GenVector:
    """Twisted bracket of constant sections: (0, -i_Y i_X H)."""
    require_degree(H, 3, "H")
    if not (v.dim == w.dim == H.dim):
        raise DimensionMismatch("dimension mismatch")
    from .exterior import contract

    xi = -contract(w.X, contract(v.X, H))
    m = H.dim
    return GenVector(np.zeros(m), xi.coeffs[[1 << i for i in range(m)]])


def bracket_covector(X, Y, H: Form) -> np.ndarray:
    """-i_Y i_X H as a length-m covector, for complex X, Y."""
    from .exterior import contract

    m = H.dim
    out = -contract(Y, contract(X, H))
    return out.coeffs[[1 << i for i in range(m)]]


def classical_volume_sign(m: int, j: int) -> int:
    """Sign relating the generalized star to the classical one on j-forms."""
    k = m - j
    return -1 if (k * (k - 1) // 2 + 1) % 2 else 1
