import pytest
from hypothesis import given, settings, strategies as st

from monomial_oracle import RING, disagreements, handle
from reesreg.arith import MonomialOrder, PolyRing, RingDescriptor
from reesreg.groebner import (IdealHandle, buchberger, eliminate, height, ideal_equal, ideal_intersection,
                              ideal_ops, ideal_power, ideal_product, ideal_quotient, ideal_saturation,
                              ideal_sum, in_radical, krull_dim, maximal_ideal, min_generators, syzygies)

A = RING
P = PolyRing(("x", "y"), (1, 1), (0, 0))
SEMI = RingDescriptor(("a", "b", "c"), (3, 4, 5), quotient_gens=("b^2-a*c", "a^3-b*c", "c^2-a^2*b"))


def I(*gens, ring=A):
    return IdealHandle(ring, list(gens))


def test_buchberger_already_reduced():
    x, y = P.gens()
    assert set(buchberger([x, y]).gens) == {x, y}


def test_buchberger_lex_elimination():
    x, y = P.gens()
    gb = buchberger([x ** 2 - y, x * y - 1], MonomialOrder.lex(P))
    assert {g for g in gb.gens} == {x - y ** 2, y ** 3 - 1}


def test_buchberger_principal():
    x = P.gen("x")
    assert [str(g) for g in buchberger([x]).gens] == ["x"]


def test_buchberger_is_deterministic():
    x, y = P.gens()
    gens = [x ** 3 - y ** 2 * x, x * y - y ** 2, y ** 3]
    assert [g.terms for g in buchberger(gens).gens] == [g.terms for g in buchberger(gens).gens]


def test_colon():
    assert ideal_equal(ideal_quotient(I("x^2", "x*y"), I("x")), I("x", "y"))


def test_colon_by_unit():
    J = I("x^2", "x*y")
    assert ideal_equal(ideal_quotient(J, I("1")), J)


def test_colon_by_zero():
    with pytest.raises(ValueError, match="colon by zero ideal"):
        ideal_quotient(I("x"), I())


def test_products_and_powers():
    assert ideal_equal(ideal_product(maximal_ideal(A), maximal_ideal(A)), I("x^2", "x*y", "y^2"))
    assert ideal_power(maximal_ideal(A), 0).is_unit()
    sq = ideal_power(I("x^2", "y^2"), 2)
    assert set(map(str, sq.gens)) == {"x^4", "x^2*y^2", "y^4"}


def test_semigroup_square_weights():
    m2 = ideal_power(maximal_ideal(SEMI), 2)
    assert sorted(m2.degrees()) == [6, 7, 8]
    assert min_generators(m2) == 3


def test_ideal_equal():
    assert ideal_equal(I("x", "y"), I("y", "x"))
    assert ideal_equal(I("x"), I("x", "x^2"))
    assert not ideal_equal(I("x^2", "x*y", "y^2"), I("x^2", "y^2"))


def test_krull_dim():
    assert krull_dim(I()) == 2
    assert krull_dim(I("x*y")) == 1
    assert krull_dim(I("x^2", "x*y", "y^2")) == 0
    assert krull_dim(I("1")) == float("-inf")


def test_height_and_radical():
    assert height(I("x*y")) == 1
    assert in_radical(A.parse("x*y"), I("x^2", "y^3"))
    assert not in_radical(A.parse("x"), I("y"))


def test_saturation():
    assert ideal_equal(ideal_saturation(I("x^2*y", "x*y^2"), maximal_ideal(A)), I("x*y"))
    assert ideal_equal(ideal_ops(I("x^2*y", "x*y^2"), maximal_ideal(A), "saturation"), I("x*y"))


def test_min_generators():
    assert min_generators(I("x", "x^2", "y")) == 2
    for n in range(1, 5):
        assert min_generators(ideal_power(maximal_ideal(A), n)) == n + 1


def _apply(cols, syz):
    """sum_i syz_i * col_i as a polynomial (rank-one target)."""
    total = P.zero()
    for (i, e), c in syz.items():
        total = total + P.monomial(e, c) * cols[i]
    return total


def test_syzygy_koszul():
    x, y = P.gens()
    S = syzygies([x, y])
    assert len(S.columns) == 1
    assert _apply([x, y], S.columns[0]).is_zero()
    assert len(S.columns[0]) == 2


def test_syzygy_regular_element():
    assert syzygies([P.gen("x")]).columns == []


def test_syzygy_veronese():
    x, y = P.gens()
    cols = [x * x, x * y, y * y]
    S = syzygies(cols)
    assert len(S.columns) == 2
    assert all(_apply(cols, s).is_zero() for s in S.columns)
    assert sorted(S.gen_t_degrees) == [0, 0, 0]


def test_eliminate_single_generator():
    D = RingDescriptor(("x", "y1", "t"), (1, 1, 1))
    assert eliminate(["t"], IdealHandle(D, ["y1 - x*t"])).gens == ()


def test_eliminate_empty_block():
    J = I("x^2", "y")
    assert ideal_equal(eliminate([], J), J)


def test_eliminate_rees_ideal_of_square():
    D = RingDescriptor(("t", "x", "y", "y1", "y2", "y3"), (1, 1, 1, 3, 3, 3))
    K = IdealHandle(D, ["y1 - x^2*t", "y2 - x*y*t", "y3 - y^2*t"])
    rees = eliminate(["t"], K)
    assert rees.contains(rees.ring.parse("y2^2 - y1*y3"))
    assert rees.contains(rees.ring.parse("x*y2 - y*y1"))
    fiber = eliminate(["t", "x", "y"], K)
    assert ideal_equal(fiber, IdealHandle(fiber.ring, ["y2^2 - y1*y3"]))


# ---------------------------------------------------------------- properties

mono_gens = st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)).filter(lambda m: sum(m) <= 4),
                     min_size=1, max_size=3)


@settings(max_examples=40, deadline=None)
@given(mono_gens, mono_gens)
def test_ideal_ops_match_division_oracle(a, b):
    ha, hb = handle(a), handle(b)
    assert disagreements("sum", a, b, ideal_sum(ha, hb)) == []
    assert disagreements("product", a, b, ideal_product(ha, hb)) == []
    assert disagreements("intersection", a, b, ideal_intersection(ha, hb)) == []
    assert disagreements("quotient", a, b, ideal_quotient(ha, hb)) == []


@settings(max_examples=30, deadline=None)
@given(mono_gens, mono_gens)
def test_colon_and_intersection_containments(a, b):
    ha, hb = handle(a), handle(b)
    assert ha.contains_ideal(ideal_product(ideal_quotient(ha, hb), hb))
    meet = ideal_intersection(ha, hb)
    assert ha.contains_ideal(meet) and hb.contains_ideal(meet)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(1, 9)), min_size=1, max_size=4))
def test_normal_form_zero_on_ideal_elements(terms):
    x, y = P.gens()
    gb = buchberger([x ** 2 - y ** 2, x * y])
    g = P.monomial((terms[0][0], terms[0][1]), terms[0][2])
    f = g * (x ** 2 - y ** 2) + P.monomial((terms[-1][0], terms[-1][1])) * x * y
    assert gb.contains(f)
    assert gb.normal_form(f + x).terms == gb.normal_form(x).terms
