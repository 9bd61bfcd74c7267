import pytest

from reesreg.arith import RingDescriptor
from reesreg.groebner import IdealHandle, ideal_equal, ideal_power, ideal_product, maximal_ideal, min_generators
from reesreg.filtrations import (BudgetError, FiltrationError, analytic_spread, check_m_condition,
                                 derive_m_filtration, is_reduction, make_adic, make_explicit,
                                 make_integral_closure_monomial, make_ratliff_rush, minimal_reduction,
                                 reduction_number, sampled_reduction_number, verify_filtration)

A = RingDescriptor(("x", "y"), (1, 1))
SEMI = RingDescriptor(("a", "b", "c"), (3, 4, 5), quotient_gens=("b^2-a*c", "a^3-b*c", "c^2-a^2*b"))
M = maximal_ideal(A)


def I(*gens, ring=A):
    return IdealHandle(ring, list(gens))


def test_adic_maximal():
    F = make_adic(M)
    assert F.n0 == 1 and F.ideal(0).is_unit()
    for n in range(1, 5):
        assert ideal_equal(F.ideal(n), ideal_power(M, n))


def test_adic_square():
    F = make_adic(I("x^2", "y^2"))
    assert ideal_equal(F.ideal(2), I("x^4", "x^2*y^2", "y^4"))


def test_adic_semigroup():
    F = make_adic(maximal_ideal(SEMI))
    assert sorted(F.ideal(2).degrees()) == [6, 7, 8]


def test_adic_rejects_unit_and_zero():
    with pytest.raises(FiltrationError):
        make_adic(I("1"))
    with pytest.raises(FiltrationError):
        make_adic(I())


def test_ratliff_rush_of_maximal_ideal():
    F = make_ratliff_rush(M)
    for n in range(1, 4):
        assert ideal_equal(F.ideal(n), ideal_power(M, n))


def test_ratliff_rush_adds_x2y2():
    base = I("x^4", "x^3*y", "x*y^3", "y^4")
    F = make_ratliff_rush(base)
    assert ideal_equal(F.ideal(1), I("x^4", "x^3*y", "x^2*y^2", "x*y^3", "y^4"))
    assert min_generators(F.ideal(1)) == 5


def test_ratliff_rush_principal():
    F = make_ratliff_rush(I("x^2"))
    for n in range(1, 4):
        assert ideal_equal(F.ideal(n), I(f"x^{2 * n}"))


def test_ratliff_rush_budget():
    with pytest.raises(BudgetError, match="RR budget exceeded"):
        make_ratliff_rush(I("x^4", "x^3*y", "x*y^3", "y^4"), k_max=1)


def test_ratliff_rush_undefined_with_annihilator():
    S = RingDescriptor(("x", "y"), (1, 1), quotient_gens=("x*y",))
    with pytest.raises(FiltrationError, match="Ratliff-Rush undefined"):
        make_ratliff_rush(IdealHandle(S, ["x"]))


def test_ratliff_rush_idempotent():
    F = make_ratliff_rush(I("x^4", "x^3*y", "x*y^3", "y^4"))
    G = make_ratliff_rush(F.ideal(1))
    for n in range(1, 5):
        assert ideal_equal(F.ideal(n), G.ideal(n))


def test_integral_closure_examples():
    F = make_integral_closure_monomial(I("x^3", "y^3"))
    assert ideal_equal(F.ideal(1), I("x^3", "x^2*y", "x*y^2", "y^3"))
    G = make_integral_closure_monomial(I("x^2", "y^3"))
    assert G.ideal(1).contains("x*y^2")
    H = make_integral_closure_monomial(M)
    for n in range(1, 4):
        assert ideal_equal(H.ideal(n), ideal_power(M, n))


def test_explicit_tables():
    F = make_explicit([M, ideal_power(M, 2)])
    for n in range(1, 5):
        assert ideal_equal(F.ideal(n), make_adic(M).ideal(n))
    with pytest.raises(FiltrationError, match="chain violation"):
        make_explicit([I("x"), I("y^2")])


def test_explicit_copy_of_ratliff_rush():
    F = make_ratliff_rush(I("x^4", "x^3*y", "x*y^3", "y^4"))
    G = make_explicit(F.table[1:])
    for n in range(1, 6):
        assert ideal_equal(F.ideal(n), G.ideal(n))


def test_m_filtration():
    Fm = derive_m_filtration(make_adic(M))
    assert ideal_equal(Fm.ideal(3), ideal_power(M, 3))
    Fm = derive_m_filtration(make_adic(I("x^2", "y^2")))
    assert ideal_equal(Fm.ideal(2), ideal_product(M, I("x^2", "y^2")))
    check_m_condition(make_adic(I("x")))


def test_is_reduction():
    F = make_adic(I("x^2", "x*y", "y^2"))
    ok, n = is_reduction(I("x^2", "y^2"), F)
    assert ok and n == 1
    assert not is_reduction(I("x^2"), F)[0]
    ok, n = is_reduction(M, make_adic(M))
    assert ok and n == 1


def test_reduction_numbers():
    assert reduction_number(make_adic(M), M) == 0
    assert reduction_number(make_adic(I("x^2", "x*y", "y^2")), I("x^2", "y^2")) == 1
    Fs = make_adic(maximal_ideal(SEMI))
    assert reduction_number(Fs, I("a", ring=SEMI)) == 1


def test_minimal_reductions():
    c = minimal_reduction(make_adic(M), seed=0)
    assert len(c.generators) == 2 and c.r_J == 0
    c = minimal_reduction(make_adic(I("x^2", "x*y", "y^2")), seed=0)
    assert len(c.generators) == 2 and c.r_J == 1
    c = minimal_reduction(make_adic(maximal_ideal(SEMI)), seed=0)
    assert len(c.generators) == 1 and c.r_J == 1
    assert c.weights == (3,)


def test_analytic_spread_examples():
    assert analytic_spread(make_adic(M)) == 2
    assert analytic_spread(make_adic(I("x^2", "x*y", "y^2"))) == 2
    assert analytic_spread(make_adic(maximal_ideal(SEMI))) == 1
    assert analytic_spread(make_adic(I("x"))) == 1


def test_corpus_filtrations_are_valid(filtrations):
    for F in filtrations.values():
        verify_filtration(F)
        for i in range(1, F.n0 + 2):
            for j in range(1, F.n0 + 2 - i):
                assert F.ideal(i + j).contains_ideal(ideal_product(F.ideal(i), F.ideal(j)))


def test_analytic_spread_depends_on_first_ideal(filtrations):
    for F in filtrations.values():
        assert analytic_spread(F) == analytic_spread(make_adic(F.I1))


def test_reduction_replay(filtrations):
    for F in filtrations.values():
        a = minimal_reduction(F, seed=7)
        b = minimal_reduction(F, seed=7)
        assert [g.terms for g in a.generators] == [g.terms for g in b.generators]
        assert (a.r_J, a.witness_n, a.attempt) == (b.r_J, b.witness_n, b.attempt)


def test_certificate_window(filtrations):
    for F in filtrations.values():
        c = minimal_reduction(F, seed=0)
        assert F.I1.contains_ideal(c.J)
        for n in range(c.witness_n + 1, c.witness_n + F.n0 + 2):
            assert ideal_equal(ideal_product(c.J, F.ideal(n - 1)), F.ideal(n))
        if c.witness_n >= 1:
            assert not ideal_equal(ideal_product(c.J, F.ideal(c.witness_n - 1)), F.ideal(c.witness_n))


def test_sampled_minimum(filtrations):
    for F in filtrations.values():
        r, vals = sampled_reduction_number(F, range(5))
        assert len(vals) == 5 and all(r <= v for v in vals)
