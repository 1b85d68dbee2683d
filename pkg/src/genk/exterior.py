"""Graded exterior algebra over R^m with complex or Lie-algebra coefficients.

A :class:`Form` stores its 2^m coefficients in a flat array indexed by basis
bitmask: bit ``i - 1`` set means ``dx^i`` is present.  Inside a basis element
the generators are in increasing order, so every sign comes from counting
transpositions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .errors import (
    AlgebraMismatch,
    DegreeError,
    DimensionMismatch,
    LieAlgebraError,
)

MAX_DIM = 6


def mask_of(indices: Iterable[int]) -> int:
    """Bitmask for a set of 1-based generator indices."""
    mask = 0
    for i in indices:
        mask |= 1 << (int(i) - 1)
    return mask


def indices_of(mask: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(mask.bit_length()) if (mask >> i) & 1)


@lru_cache(maxsize=None)
def degrees(m: int) -> np.ndarray:
    out = np.array([kernels.popcount(i) for i in range(1 << m)])
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def reversal_signs(m: int) -> np.ndarray:
    """(-1)^{k(k-1)/2} for each basis element of degree k."""
    k = degrees(m)
    out = np.where((k * (k - 1) // 2) % 2 == 0, 1, -1)
    out.setflags(write=False)
    return out


def _as_coeffs(values, exact: bool) -> np.ndarray:
    if exact:
        arr = np.empty(len(values), dtype=object)
        arr[:] = [Fraction(v) for v in values]
        return arr
    return np.asarray(values, dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class Form:
    """Element of the complexified exterior algebra of (R^m)*."""

    dim: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 0 <= self.dim <= MAX_DIM:
            raise DimensionMismatch(f"dimension {self.dim} outside 0..{MAX_DIM}")
        c = np.asarray(self.coeffs)
        if c.dtype != object:
            c = c.astype(np.complex128)
        else:
            c = c.copy()
        if c.shape != (1 << self.dim,):
            raise DimensionMismatch(
                f"expected {1 << self.dim} coefficients, got shape {c.shape}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # construction -----------------------------------------------------

    @classmethod
    def zero(cls, dim: int, exact: bool = False) -> Form:
        return cls(dim, _as_coeffs([0] * (1 << dim), exact))

    @classmethod
    def scalar(cls, dim: int, value=1, exact: bool = False) -> Form:
        vals = [0] * (1 << dim)
        vals[0] = value
        return cls(dim, _as_coeffs(vals, exact))

    @classmethod
    def basis(cls, dim: int, *indices: int, exact: bool = False) -> Form:
        """``dx^{i1} ^ dx^{i2} ^ ...`` for 1-based indices in any order."""
        if len(set(indices)) != len(indices):
            return cls.zero(dim, exact)
        if any(not 1 <= i <= dim for i in indices):
            raise DimensionMismatch(f"index out of range for dim {dim}: {indices}")
        sign = 1
        order = list(indices)
        for i in range(len(order)):
            for j in range(len(order) - 1 - i):
                if order[j] > order[j + 1]:
                    order[j], order[j + 1] = order[j + 1], order[j]
                    sign = -sign
        vals = [0] * (1 << dim)
        vals[mask_of(indices)] = sign
        return cls(dim, _as_coeffs(vals, exact))

    @classmethod
    def from_terms(
        cls, dim: int, terms: Mapping[Sequence[int], complex], exact: bool = False
    ) -> Form:
        out = cls.zero(dim, exact)
        for idx, val in terms.items():
            out = out + cls.basis(dim, *idx, exact=exact) * val
        return out

    @classmethod
    def covector(cls, values: Sequence) -> Form:
        """One-form sum_i values[i] dx^{i+1}."""
        dim = len(values)
        exact = any(isinstance(v, Fraction) for v in values)
        vals = [0] * (1 << dim)
        for i, v in enumerate(values):
            vals[1 << i] = v
        return cls(dim, _as_coeffs(vals, exact))

    @classmethod
    def two_form(cls, matrix) -> Form:
        """Two-form with B(e_i, e_j) = matrix[i, j] (antisymmetric part used)."""
        mat = np.asarray(matrix)
        dim = mat.shape[0]
        vals = np.zeros(1 << dim, dtype=mat.dtype if mat.dtype == object else complex)
        if vals.dtype == object:
            vals[:] = 0
        for i in range(dim):
            for j in range(i + 1, dim):
                vals[(1 << i) | (1 << j)] = (mat[i, j] - mat[j, i]) / 2
        return cls(dim, vals)

    @classmethod
    def random(
        cls,
        dim: int,
        rng: np.random.Generator,
        degree: int | None = None,
        real: bool = False,
    ) -> Form:
        n = 1 << dim
        vals = rng.standard_normal(n) + (0 if real else 1j * rng.standard_normal(n))
        if degree is not None:
            vals = np.where(degrees(dim) == degree, vals, 0)
        return cls(dim, vals)

    # queries ----------------------------------------------------------

    @property
    def exact(self) -> bool:
        return self.coeffs.dtype == object

    def __getitem__(self, indices) -> complex:
        if isinstance(indices, int):
            indices = (indices,)
        return self.coeffs[mask_of(indices)]

    def part(self, degree: int) -> Form:
        keep = degrees(self.dim) == degree
        vals = self.coeffs.copy()
        vals[~keep] = 0
        return Form(self.dim, vals)

    def even(self) -> Form:
        vals = self.coeffs.copy()
        vals[degrees(self.dim) % 2 == 1] = 0
        return Form(self.dim, vals)

    def odd(self) -> Form:
        vals = self.coeffs.copy()
        vals[degrees(self.dim) % 2 == 0] = 0
        return Form(self.dim, vals)

    def present_degrees(self) -> set[int]:
        nz = [i for i, c in enumerate(self.coeffs) if c != 0]
        return {int(degrees(self.dim)[i]) for i in nz}

    def homogeneous_degree(self) -> int | None:
        """Degree if the form is homogeneous (zero counts as degree 0)."""
        present = self.present_degrees()
        if not present:
            return 0
        if len(present) == 1:
            return present.pop()
        return None

    def top(self):
        return self.coeffs[-1]

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs.astype(complex)))

    def conj(self) -> Form:
        if self.exact:
            return self
        return Form(self.dim, self.coeffs.conj())

    def allclose(self, other: Form, atol: float = 1e-12) -> bool:
        _check_dim(self, other)
        if self.exact and other.exact:
            return bool(np.all(self.coeffs == other.coeffs))
        diff = self.coeffs.astype(complex) - other.coeffs.astype(complex)
        return bool(np.max(np.abs(diff), initial=0.0) <= atol)

    def terms(self) -> dict[tuple[int, ...], complex]:
        return {indices_of(i): c for i, c in enumerate(self.coeffs) if c != 0}

    # arithmetic -------------------------------------------------------

    def __add__(self, other: Form) -> Form:
        _check_dim(self, other)
        return Form(self.dim, self.coeffs + other.coeffs)

    def __sub__(self, other: Form) -> Form:
        _check_dim(self, other)
        return Form(self.dim, self.coeffs - other.coeffs)

    def __neg__(self) -> Form:
        return Form(self.dim, -self.coeffs)

    def __mul__(self, scalar) -> Form:
        if isinstance(scalar, Form):
            return NotImplemented
        return Form(self.dim, self.coeffs * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> Form:
        return Form(self.dim, self.coeffs / scalar)

    def __xor__(self, other: Form) -> Form:
        return wedge(self, other)

    def __repr__(self):
        terms = ", ".join(
            f"{''.join(map(str, k)) or '1'}: {v}" for k, v in self.terms().items()
        )
        return f"Form(dim={self.dim}, {{{terms}}})"

    # serialization ----------------------------------------------------

    def to_json(self) -> dict:
        terms = []
        for idx, val in self.terms().items():
            if isinstance(val, Fraction):
                terms.append({"indices": list(idx), "re": str(val), "im": 0.0})
            else:
                terms.append(
                    {"indices": list(idx), "re": float(val.real), "im": float(val.imag)}
                )
        return {"dim": self.dim, "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> Form:
        dim = int(data["dim"])
        exact = any(isinstance(t.get("re"), str) for t in data.get("terms", []))
        out = cls.zero(dim, exact)
        for t in data.get("terms", []):
            if exact:
                val = Fraction(t["re"])
            else:
                val = complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
            out = out + cls.basis(dim, *t["indices"], exact=exact) * val
        return out


def _check_dim(a: Form, b: Form):
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}")


def wedge(a: Form, b: Form) -> Form:
    _check_dim(a, b)
    return Form(a.dim, kernels.wedge(a.coeffs, b.coeffs, a.dim))


def contract(X, a: Form) -> Form:
    """Interior product i_X a for a tangent vector X (length-m sequence)."""
    x = np.asarray(X)
    if x.dtype != object:
        x = x.astype(np.complex128)
    if x.shape != (a.dim,):
        raise DimensionMismatch(f"vector of length {x.shape} for dim {a.dim}")
    return Form(a.dim, kernels.contract(x, a.coeffs, a.dim))


def clifford_transpose(a: Form) -> Form:
    """Reverse the order of generators: degree k picks up (-1)^{k(k-1)/2}."""
    return Form(a.dim, a.coeffs * reversal_signs(a.dim))


def exp_wedge(a: Form) -> Form:
    """Exponential of an even form in the exterior algebra (a finite series)."""
    out = Form.scalar(a.dim, 1, exact=a.exact)
    term = out
    for k in range(1, a.dim // 2 + 1):
        term = wedge(term, a) * (Fraction(1, k) if a.exact else 1.0 / k)
        out = out + term
    return out


@lru_cache(maxsize=None)
def wedge_matrices(m: int) -> tuple[np.ndarray, ...]:
    """Left multiplication by dx^1, ..., dx^m as 2^m x 2^m real matrices."""
    mats = []
    for i in range(m):
        e = np.zeros(1 << m)
        e[1 << i] = 1.0
        mat = kernels.wedge_matrix(e.astype(complex), m).real.copy()
        mat.setflags(write=False)
        mats.append(mat)
    return tuple(mats)


@lru_cache(maxsize=None)
def contraction_matrices(m: int) -> tuple[np.ndarray, ...]:
    mats = []
    for i in range(m):
        mat = np.asarray(kernels.contraction_matrix(i, m), dtype=float)
        mat.setflags(write=False)
        mats.append(mat)
    return tuple(mats)


def wedge_operator(a: Form) -> np.ndarray:
    """Matrix of b -> a ^ b on coefficient vectors."""
    return np.asarray(kernels.wedge_matrix(a.coeffs, a.dim))


# Lie algebra coefficients ------------------------------------------------


@dataclass(frozen=True, eq=False)
class LieAlgebraData:
    """Structure constants with ``[e_i, e_j] = sum_k constants[i, j, k] e_k``."""

    name: str
    constants: np.ndarray = field(repr=False)
    kappa: np.ndarray = field(repr=False)
    tol: float = 1e-12

    def __post_init__(self):
        c = np.array(self.constants, dtype=float)
        k = np.array(self.kappa, dtype=float)
        d = c.shape[0]
        if c.shape != (d, d, d) or k.shape != (d, d):
            raise LieAlgebraError(f"inconsistent shapes {c.shape}, {k.shape}")
        c.setflags(write=False)
        k.setflags(write=False)
        object.__setattr__(self, "constants", c)
        object.__setattr__(self, "kappa", k)
        self.validate()

    @property
    def dim(self) -> int:
        return self.constants.shape[0]

    def validate(self):
        c, k, tol = self.constants, self.kappa, self.tol
        if np.abs(c + c.transpose(1, 0, 2)).max(initial=0) > tol:
            raise LieAlgebraError("structure constants are not antisymmetric")
        # [e_i,[e_j,e_l]] + [e_j,[e_l,e_i]] + [e_l,[e_i,e_j]]
        inner = np.einsum("jlp,ipq->ijlq", c, c)
        jac = inner + inner.transpose(1, 2, 0, 3) + inner.transpose(2, 0, 1, 3)
        if np.abs(jac).max(initial=0) > tol:
            raise LieAlgebraError("Jacobi identity fails")
        if np.abs(k - k.T).max(initial=0) > tol:
            raise LieAlgebraError("kappa is not symmetric")
        if np.linalg.eigvalsh(k).min() <= 0:
            raise LieAlgebraError("kappa is not positive definite")
        # kappa([a,b],c) + kappa(b,[a,c])
        inv = np.einsum("abp,pc->abc", c, k) + np.einsum("acp,bp->abc", c, k)
        if np.abs(inv).max(initial=0) > tol:
            raise LieAlgebraError("kappa is not ad-invariant")

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.constants)

    def ad(self, x) -> np.ndarray:
        """Matrix of y -> [x, y]."""
        return np.einsum("i,ijk->kj", np.asarray(x), self.constants)


def u1() -> LieAlgebraData:
    return LieAlgebraData("u(1)", np.zeros((1, 1, 1)), np.ones((1, 1)))


def su2() -> LieAlgebraData:
    """Basis with [e_i, e_j] = eps_ijk e_k, kappa normalised to the identity."""
    eps = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i, j, k] = 1.0
        eps[j, i, k] = -1.0
    return LieAlgebraData("su(2)", eps, np.eye(3))


ALGEBRAS = {"u1": u1, "u(1)": u1, "su2": su2, "su(2)": su2}


def algebra_by_name(name: str) -> LieAlgebraData:
    try:
        return ALGEBRAS[name.lower()]()
    except KeyError:
        raise LieAlgebraError(f"unknown Lie algebra {name!r}") from None


@dataclass(frozen=True, eq=False)
class LaForm:
    """Form with values in a Lie algebra; ``coeffs[mask, a]`` is the e_a part."""

    dim: int
    algebra: LieAlgebraData
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128)
        if c.shape != (1 << self.dim, self.algebra.dim):
            raise DimensionMismatch(f"LaForm coefficient shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, dim: int, algebra: LieAlgebraData) -> LaForm:
        return cls(dim, algebra, np.zeros((1 << dim, algebra.dim)))

    @classmethod
    def from_components(cls, algebra: LieAlgebraData, forms: Sequence[Form]) -> LaForm:
        if len(forms) != algebra.dim:
            raise AlgebraMismatch("need one form per Lie algebra basis element")
        dim = forms[0].dim
        return cls(dim, algebra, np.stack([f.coeffs for f in forms], axis=1))

    @classmethod
    def tensor(cls, form: Form, algebra: LieAlgebraData, vector) -> LaForm:
        """form (x) vector."""
        return cls(form.dim, algebra, np.outer(form.coeffs, np.asarray(vector)))

    @classmethod
    def random(cls, dim, algebra, rng, degree=None, real=False) -> LaForm:
        return cls.from_components(
            algebra,
            [Form.random(dim, rng, degree, real) for _ in range(algebra.dim)],
        )

    def component(self, a: int) -> Form:
        return Form(self.dim, self.coeffs[:, a])

    def components(self) -> list[Form]:
        return [self.component(a) for a in range(self.algebra.dim)]

    def part(self, degree: int) -> LaForm:
        keep = degrees(self.dim) == degree
        return LaForm(self.dim, self.algebra, self.coeffs * keep[:, None])

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __add__(self, other: LaForm) -> LaForm:
        _check_algebra(self, other)
        return LaForm(self.dim, self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other: LaForm) -> LaForm:
        _check_algebra(self, other)
        return LaForm(self.dim, self.algebra, self.coeffs - other.coeffs)

    def __mul__(self, scalar) -> LaForm:
        return LaForm(self.dim, self.algebra, self.coeffs * scalar)

    __rmul__ = __mul__

    def vector(self) -> np.ndarray:
        """Flattened coefficients, form index major."""
        return self.coeffs.reshape(-1)

    def to_json(self) -> dict:
        terms = []
        for mask in range(1 << self.dim):
            row = self.coeffs[mask]
            if np.any(row != 0):
                term = {"indices": list(indices_of(mask)), "coeff": row.real.tolist()}
                if np.any(row.imag != 0):
                    term["coeff_im"] = row.imag.tolist()
                terms.append(term)
        return {"dim": self.dim, "algebra": self.algebra.name, "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping, algebra: LieAlgebraData | None = None) -> LaForm:
        algebra = algebra or algebra_by_name(data["algebra"])
        dim = int(data["dim"])
        out = np.zeros((1 << dim, algebra.dim), dtype=complex)
        for t in data.get("terms", []):
            basis = Form.basis(dim, *t["indices"])
            vec = np.asarray(t["coeff"], dtype=float)
            if "coeff_im" in t:
                vec = vec + 1j * np.asarray(t["coeff_im"], dtype=float)
            if vec.shape != (algebra.dim,):
                raise AlgebraMismatch(f"coefficient of length {vec.shape} for {algebra.name}")
            out += np.outer(basis.coeffs, vec)
        return cls(dim, algebra, out)


def _check_algebra(a: LaForm, b: LaForm):
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.algebra is not b.algebra and (
        a.algebra.dim != b.algebra.dim
        or not np.array_equal(a.algebra.constants, b.algebra.constants)
        or not np.array_equal(a.algebra.kappa, b.algebra.kappa)
    ):
        raise AlgebraMismatch(f"{a.algebra.name} vs {b.algebra.name}")


def kappa_pair(a: LaForm, b: LaForm) -> Form:
    """sum_ij kappa_ij a^i ^ b^j."""
    _check_algebra(a, b)
    k = a.algebra.kappa
    out = Form.zero(a.dim)
    for i in range(a.algebra.dim):
        for j in range(a.algebra.dim):
            if k[i, j] != 0:
                out = out + wedge(a.component(i), b.component(j)) * k[i, j]
    return out


def bracket_wedge(a: LaForm, b: LaForm) -> LaForm:
    """[a ^ b] = sum_ij a^i ^ b^j [e_i, e_j]."""
    _check_algebra(a, b)
    c = a.algebra.constants
    d = a.algebra.dim
    out = np.zeros((1 << a.dim, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            if np.any(c[i, j] != 0):
                w = wedge(a.component(i), b.component(j)).coeffs
                out += np.outer(w, c[i, j])
    return LaForm(a.dim, a.algebra, out)


def require_degree(a: Form, degree: int, what: str = "form"):
    deg = a.homogeneous_degree()
    if a.norm() != 0 and deg != degree:
        raise DegreeError(f"{what} must have degree {degree}, got {sorted(a.present_degrees())}")
