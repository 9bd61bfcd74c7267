import pytest
from hypothesis import given, settings, strategies as st

from reesreg.arith import (DEFAULT_PRIME, FieldScalar, MonomialOrder, ParseError, PolyRing, Polynomial,
                           RingDescriptor, RingMismatch, format_poly, is_bihomogeneous, poly_arith,
                           weighted_degree)

R = PolyRing(("x", "y"), (1, 1), (0, 0))
RY = PolyRing(("x", "y", "y1"), (1, 1, 0), (0, 0, 1))


def test_difference_of_squares():
    x, y = R.gens()
    assert (x + y) * (x - y) == x ** 2 - y ** 2
    assert poly_arith(x + y, x - y, "mul") == R.parse("x^2 - y^2")


def test_additive_identity():
    f = R.parse("3*x^2*y - 7*y + 2")
    assert f + R.zero() == f
    assert poly_arith(f, R.zero(), "add") == f


def test_square_in_characteristic_two():
    R2 = PolyRing(("x", "y"), (1, 1), (0, 0), 2)
    x, y = R2.gens()
    assert (x + y) ** 2 == x ** 2 + y ** 2


def test_subtraction_prunes_zero_terms():
    f = R.parse("x^2 + x*y")
    assert (f - f).is_zero()
    assert (f - R.parse("x*y")).terms == {(2, 0): 1}


def test_ring_mismatch():
    S = PolyRing(("x", "z"), (1, 1), (0, 0))
    with pytest.raises(RingMismatch):
        R.gen("x") + S.gen("x")


def test_weighted_degree_bigraded():
    f = RY.parse("x^2*y1")
    assert weighted_degree(f, "x-weight") == 2
    assert weighted_degree(f, "t-degree") == 1


def test_weighted_degree_semigroup_relation():
    S = PolyRing(("a", "b", "c"), (3, 4, 5), (0, 0, 0))
    assert weighted_degree(S.parse("b^2 - a*c")) == 8


def test_weighted_degree_mixed():
    assert weighted_degree(RY.parse("x + y1"), "t-degree") == "non-homogeneous"
    assert not is_bihomogeneous(RY.parse("x + y1"))


def test_weighted_degree_of_zero():
    with pytest.raises(ValueError):
        weighted_degree(R.zero())


@pytest.mark.parametrize("text,col", [("x + * y", 5), ("x + z", 5), ("x^", 3), ("(x+y", 5)])
def test_parse_errors_carry_column(text, col):
    with pytest.raises(ParseError) as info:
        R.parse(text)
    assert info.value.pos + 1 == col
    assert f"column {col}" in str(info.value)


def test_parse_and_format_roundtrip():
    f = R.parse("3*x^2*y - 2")
    assert format_poly(f) == "3*x^2*y - 2"
    assert R.parse(str(f)) == f


def test_negative_coefficients_are_residues():
    f = R.parse("-1*x")
    assert f.terms[(1, 0)] == DEFAULT_PRIME - 1


def test_field_inverse():
    assert FieldScalar(3, 7).inverse() == 5
    with pytest.raises(ZeroDivisionError):
        FieldScalar(0).inverse()


def test_ring_descriptor_rejects_inhomogeneous_quotient():
    with pytest.raises(ValueError):
        RingDescriptor(("a", "b"), (1, 2), quotient_gens=("a^2 - b^2",))


def test_ring_descriptor_units():
    A = RingDescriptor(("x", "y"), (1, 1))
    assert A.is_unit(A.parse("1 + x"))
    assert not A.is_unit(A.parse("x"))


def test_lex_leading_monomial():
    f = R.parse("y^3 + x")
    assert f.leading_monomial(MonomialOrder.lex(R)) == (1, 0)
    assert f.leading_monomial(MonomialOrder.degrevlex(R)) == (0, 3)


# ---------------------------------------------------------------- properties

residues = st.integers(0, DEFAULT_PRIME - 1)


@settings(max_examples=300)
@given(residues, residues, residues)
def test_field_axioms(a, b, c):
    A, B, C = FieldScalar(a), FieldScalar(b), FieldScalar(c)
    assert (A + B) + C == A + (B + C)
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
    if a:
        assert A * A.inverse() == 1


def polys(max_terms=8, max_exp=3):
    term = st.tuples(st.tuples(st.integers(0, max_exp), st.integers(0, max_exp)), residues)
    return st.lists(term, max_size=max_terms).map(lambda ts: Polynomial(R, dict(ts)))


@settings(max_examples=100, deadline=None)
@given(polys(), polys(), polys())
def test_polynomial_ring_axioms(f, g, h):
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert (f - g) + g == f


@given(polys())
def test_canonical_form_idempotent(f):
    assert Polynomial(R, f.terms) == f
    assert Polynomial(R, f.terms).terms == f.terms
    assert all(c != 0 for c in f.terms.values())
