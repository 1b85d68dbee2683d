from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genk.errors import AlgebraMismatch, DegreeError, DimensionMismatch, LieAlgebraError
from genk.exterior import (
    Form,
    LaForm,
    LieAlgebraData,
    bracket_wedge,
    clifford_transpose,
    contract,
    exp_wedge,
    kappa_pair,
    require_degree,
    su2,
    u1,
    wedge,
)

from oracles import contract_terms, wedge_terms

coef = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


@st.composite
def forms(draw, m=4):
    vals = draw(st.lists(coef, min_size=1 << m, max_size=1 << m))
    return Form(m, np.array(vals, dtype=complex))


def terms_close(a: dict, b: dict, atol=1e-10):
    keys = set(a) | set(b)
    return all(abs(a.get(k, 0) - b.get(k, 0)) < atol for k in keys)


@settings(max_examples=40, deadline=None)
@given(forms(), forms())
def test_wedge_matches_tensor_oracle(a, b):
    assert terms_close(wedge(a, b).terms(), wedge_terms(a.terms(), b.terms(), 4))


@settings(max_examples=40, deadline=None)
@given(forms(), st.lists(coef, min_size=4, max_size=4))
def test_contract_matches_tensor_oracle(a, X):
    assert terms_close(contract(X, a).terms(), contract_terms(X, a.terms(), 4))


@settings(max_examples=30, deadline=None)
@given(forms(), forms(), forms())
def test_wedge_associative(a, b, c):
    assert wedge(wedge(a, b), c).allclose(wedge(a, wedge(b, c)), atol=1e-9)


@pytest.mark.parametrize("k,l", [(1, 1), (1, 2), (2, 2), (1, 3)])
def test_graded_commutativity(rng, k, l):
    a = Form.random(4, rng, degree=k)
    b = Form.random(4, rng, degree=l)
    assert wedge(a, b).allclose(wedge(b, a) * (-1) ** (k * l))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_contraction_is_antiderivation(rng, k):
    a = Form.random(4, rng, degree=k)
    b = Form.random(4, rng)
    X = rng.standard_normal(4)
    lhs = contract(X, wedge(a, b))
    rhs = wedge(contract(X, a), b) + wedge(a, contract(X, b)) * (-1) ** k
    assert lhs.allclose(rhs)


def test_wedge_examples():
    assert wedge(Form.basis(4, 1), Form.basis(4, 2)).allclose(Form.basis(4, 1, 2))
    assert wedge(Form.basis(4, 2), Form.basis(4, 1)).allclose(-Form.basis(4, 1, 2))
    assert wedge(Form.basis(4, 1), Form.basis(4, 1)).norm() == 0
    assert contract([1, 0, 0, 0], Form.basis(4, 1, 2)).allclose(Form.basis(4, 2))
    assert contract([0, 1, 0, 0], Form.basis(4, 1, 2)).allclose(-Form.basis(4, 1))


def test_clifford_transpose_signs():
    # (-1)^{k(k-1)/2}: + + - - +
    signs = [clifford_transpose(Form.basis(4, *range(1, k + 1)))[tuple(range(1, k + 1))] for k in range(5)]
    assert signs == [1, 1, -1, -1, 1]


def test_exact_mode_is_rational():
    a = Form.basis(4, 1, exact=True) * Fraction(1, 3)
    b = Form.basis(4, 2, exact=True) * Fraction(3, 7)
    w = wedge(a, b)
    assert w.exact and w[(1, 2)] == Fraction(1, 7)
    B = Form.basis(4, 1, 2, exact=True) + Form.basis(4, 3, 4, exact=True)
    e = exp_wedge(B)
    assert e[(1, 2, 3, 4)] == 1 and e[()] == 1


def test_form_json_round_trip(rng):
    a = Form.random(4, rng)
    assert Form.from_json(a.to_json()).allclose(a)
    q = Form.basis(4, 1, 3, exact=True) * Fraction(-5, 9)
    assert Form.from_json(q.to_json())[(1, 3)] == Fraction(-5, 9)


def test_dimension_and_degree_errors():
    with pytest.raises(DimensionMismatch):
        wedge(Form.basis(4, 1), Form.basis(3, 1))
    with pytest.raises(DimensionMismatch):
        contract([1, 0], Form.basis(4, 1))
    with pytest.raises(DegreeError):
        require_degree(Form.basis(4, 1, 2), 3, "H")


def test_su2_structure():
    g = su2()
    g.validate()
    assert np.allclose(g.bracket([1, 0, 0], [0, 1, 0]), [0, 0, 1])
    assert np.allclose(g.ad([0, 0, 1]) @ [1, 0, 0], [0, 1, 0])


def test_lie_algebra_validation_rejects_bad_constants():
    c = np.zeros((2, 2, 2))
    c[0, 1, 0] = 1.0  # not antisymmetric
    with pytest.raises(LieAlgebraError):
        LieAlgebraData("bad", c, np.eye(2)).validate()
    eps = su2().constants
    with pytest.raises(LieAlgebraError):
        LieAlgebraData("noninvariant", eps, np.diag([1.0, 2.0, 3.0])).validate()


def test_bracket_wedge_commuting_and_not():
    g = su2()
    A = LaForm.tensor(Form.basis(4, 1), g, [0, 0, 0.3]) + LaForm.tensor(Form.basis(4, 2), g, [0, 0, 0.7])
    assert bracket_wedge(A, A).norm() < 1e-14
    A = LaForm.tensor(Form.basis(4, 1), g, [1, 0, 0]) + LaForm.tensor(Form.basis(4, 2), g, [0, 1, 0])
    F = bracket_wedge(A, A)
    # [A ^ A] = 2 [e1, e2] dx12
    assert np.allclose(F.component(2).coeffs[0b0011], 2.0)


def test_kappa_pair_and_mismatch(rng):
    g = su2()
    a = LaForm.tensor(Form.basis(4, 1), g, [1, 2, 3])
    b = LaForm.tensor(Form.basis(4, 2), g, [1, 0, -1])
    assert kappa_pair(a, b).allclose(Form.basis(4, 1, 2) * -2)
    with pytest.raises(AlgebraMismatch):
        kappa_pair(a, LaForm.zero(4, u1()))


def test_laform_json_round_trip(rng):
    a = LaForm.random(4, su2(), rng)
    b = LaForm.from_json(a.to_json())
    assert np.allclose(a.coeffs, b.coeffs)
