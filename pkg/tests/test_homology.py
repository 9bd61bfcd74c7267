from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from reesreg.arith import RingDescriptor
from reesreg.groebner import IdealHandle, krull_dim, maximal_ideal, ring_dim
from reesreg.filtrations import make_adic
from reesreg.blowup import Blowups
from reesreg.modules import BigradedModule, Structure
from reesreg.homology import (NEG_INF, a_invariants, a_invariants_duality, depth_dim, ext_module,
                              find_filter_regular_sequence, grade_on, hilbert_series_fiber, is_filter_regular,
                              minimal_resolution, pid_decompose, rational_form, regularity, shift_module,
                              t_hilbert)

A = RingDescriptor(("x", "y"), (1, 1))
SEMI = RingDescriptor(("a", "b", "c"), (3, 4, 5), quotient_gens=("b^2-a*c", "a^3-b*c", "c^2-a^2*b"))


def structure(nx, s):
    """k[x1..x_nx][y1..y_s] with every y mapped to 1 (pure bigraded polynomial ring)."""
    xs = tuple(f"x{i + 1}" for i in range(nx))
    D = RingDescriptor(xs, (1,) * nx)
    return Structure(D, tuple([D.base.one()] * s))


def vec(poly, k=0):
    return {(k, e): c for e, c in poly.terms.items()}


def cyclic(S, *rels):
    return BigradedModule(S, [(0, 0)], [vec(r) for r in rels])


def family(F, name):
    return Blowups(F).module(name)


# ---------------------------------------------------------------- resolutions

def test_koszul_resolution_of_residue_field():
    S = structure(1, 1)
    x, y = S.ring.gen("x1"), S.ring.gen("y1")
    k = cyclic(S, x, y)
    res = minimal_resolution(k)
    assert [len(d) for d in res.degrees] == [1, 2, 1]
    assert res.composition_zero() and res.minimal()
    assert depth_dim(k) == (0, 0)


def test_hypersurface_resolution():
    S = structure(0, 2)
    y1, y2 = S.ring.gen("y1"), S.ring.gen("y2")
    res = minimal_resolution(cyclic(S, y1 * y2))
    assert res.length == 1 and res.degrees == [[(0, 0)], [(0, 2)]]


def test_depth_dim_free_and_zero():
    S = structure(1, 2)
    assert depth_dim(cyclic(S)) == (3, 3)
    one = S.ring.one()
    zero = cyclic(S, one)
    assert depth_dim(zero)[1] == NEG_INF


def test_depth_dim_of_conic_fiber():
    M = family(make_adic(IdealHandle(A, ["x^2", "x*y", "y^2"])), "F")
    assert depth_dim(M) == (2, 2)


# ---------------------------------------------------------------- Ext

def test_ext_examples():
    S = structure(0, 2)
    y1 = S.ring.gen("y1")
    E0 = ext_module(cyclic(S), 0)
    assert E0.gen_degrees == [(0, 0)] and E0.relations == []
    E1 = ext_module(cyclic(S, y1), 1)
    assert E1.gen_degrees == [(0, -1)]
    assert E1.dim() == 1


def test_ext_of_residue_field():
    S = structure(1, 1)
    k = cyclic(S, S.ring.gen("x1"), S.ring.gen("y1"))
    assert ext_module(k, 0).rank == 0 or ext_module(k, 0).dim() == NEG_INF
    assert ext_module(k, 1).rank == 0 or ext_module(k, 1).dim() == NEG_INF
    E2 = ext_module(k, 2)
    assert E2.dim() == 0 and len(E2.gen_degrees) == 1


# ---------------------------------------------------------------- a-invariants and regularity

@pytest.mark.parametrize("s", [1, 2, 3])
def test_calibration(s):
    M = cyclic(structure(0, s))
    for av in (a_invariants(M), a_invariants_duality(M)):
        assert av.a[s] == -s
        assert all(v == NEG_INF for v in av.a[:s])


def test_assoc_graded_of_maximal_ideal():
    av = a_invariants(family(make_adic(maximal_ideal(A)), "G"))
    assert av.as_json() == [None, None, -2]
    assert av.reg() == 0


def test_zero_module_a_invariants():
    S = structure(0, 2)
    av = a_invariants(cyclic(S, S.ring.one()))
    assert all(v == NEG_INF for v in av.a)


def test_regularity_examples():
    assert regularity(family(make_adic(maximal_ideal(A)), "F"))["a"] == 0
    r = regularity(family(make_adic(IdealHandle(A, ["x^2", "x*y", "y^2"])), "F"))
    assert r["a"] == r["betti"] == r["duality"] == 1
    assert regularity(family(make_adic(IdealHandle(A, ["x^2", "y^2"])), "G"))["a"] == 0


def test_routes_agree_on_corpus_fibers(analyses, corpus):
    for eid in corpus:
        E = analyses(eid)
        routes = E.fiber_routes
        vals = {v for v in routes.values() if v is not None}
        assert len(vals) == 1, (eid, routes)


# ---------------------------------------------------------------- fiber series

def test_fiber_series_examples():
    fs = hilbert_series_fiber(make_adic(maximal_ideal(A)), 8)
    assert fs.ell == 2 and fs.numerator == [1]
    fs = hilbert_series_fiber(make_adic(maximal_ideal(SEMI)), 8)
    assert fs.ell == 1 and fs.mu[:4] == [1, 3, 3, 3] and fs.numerator == [1, 2]
    fs = hilbert_series_fiber(make_adic(IdealHandle(A, ["x"])), 8)
    assert fs.numerator == [1]


def test_rational_form_rejects_unsettled_window():
    with pytest.raises(ValueError):
        rational_form([1, 2, 4, 8], 1)


# ---------------------------------------------------------------- grade and filter-regular

def test_grade_examples():
    S = Structure(A, ())
    X, Y = S.ring.gen("x"), S.ring.gen("y")
    R = cyclic(S)
    assert grade_on([X], R) == 1
    assert grade_on([X, Y], R) == 2
    assert grade_on([X, Y], cyclic(S, X * Y)) == 1


def test_grade_bounded_by_height(analyses, filtrations):
    for eid, F in filtrations.items():
        E = analyses(eid)
        assert E.grade_I1 <= ring_dim(F.ring) - krull_dim(F.I1), eid


def test_filter_regular_examples():
    S = structure(0, 2)
    y1 = S.ring.gen("y1")
    assert is_filter_regular(y1, cyclic(S), 8)
    assert not is_filter_regular(y1, cyclic(S, y1), 8)


def test_filter_regular_sequences():
    S = structure(0, 2)
    assert len(find_filter_regular_sequence([cyclic(S)], 2, 0, 8)) == 2
    assert find_filter_regular_sequence([cyclic(S)], 0, 0, 8) == []
    F = make_adic(maximal_ideal(A))
    G = Blowups(F).module("G")
    assert len(find_filter_regular_sequence([G], 2, 0, 8)) == 2
    G2 = Blowups(make_adic(IdealHandle(A, ["x^2", "x*y", "y^2"]))).module("G")
    assert len(find_filter_regular_sequence([G2], 1, 3, 8)) == 1


# ---------------------------------------------------------------- PID decomposition

def test_pid_examples():
    S = structure(0, 1)
    u = S.ring.gen("y1")
    d = pid_decompose(cyclic(S))
    assert d.free_shifts == [0] and d.torsion_pairs == [] and d.reg() == 0
    M = BigradedModule(S, [(0, 0), (0, 2)], [vec(u, 1)])
    d = pid_decompose(M)
    assert d.free_shifts == [0] and d.torsion_pairs == [(1, 2)]
    assert d.reg() == 2 and d.r_J() == 2


def test_pid_semigroup_fiber(analyses):
    E = analyses("semigroup-345-adic-m")
    d = pid_decompose(E.module("F"))
    assert sorted(d.free_shifts) == [0, 1, 1] and d.torsion_pairs == []
    assert d.reg() == 1 and d.r_J() == 1


# ---------------------------------------------------------------- properties

def poly_dim(s, n):
    return comb(n + s - 1, s - 1) if n >= 0 else 0


monos = st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda m: 0 < sum(m))


def _monomial_module(rels):
    S = structure(0, 2)
    ring = S.ring
    return cyclic(S, *[ring.monomial(m) for m in rels])


@settings(max_examples=25, deadline=None)
@given(st.lists(monos, max_size=3))
def test_shift_raises_regularity(rels):
    M = _monomial_module(rels)
    r = regularity(M)["a"]
    if r == NEG_INF:
        return
    assert regularity(shift_module(M, 1))["a"] == r + 1


@settings(max_examples=25, deadline=None)
@given(st.lists(monos, max_size=3))
def test_regularity_routes_agree(rels):
    M = _monomial_module(rels)
    r = regularity(M)
    vals = {v for k, v in r.items() if k != "a_vector" and v is not None}
    assert len(vals) == 1, r
    if r["a"] != NEG_INF:
        assert a_invariants(M).as_json() == a_invariants_duality(M).as_json()


@settings(max_examples=25, deadline=None)
@given(st.lists(monos, max_size=3))
def test_resolution_euler_characteristic(rels):
    M = _monomial_module(rels)
    res = minimal_resolution(M)
    assert res.composition_zero()
    hf = t_hilbert(M, 8)
    for n in range(9):
        chi = sum((-1) ** j * poly_dim(2, n - d[1]) for j, ds in enumerate(res.degrees) for d in ds)
        assert chi == hf[n]


pid_rel = st.tuples(st.integers(0, 2), st.integers(0, 3), st.integers(1, 5))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=3), st.lists(pid_rel, max_size=3))
def test_pid_reconstructs_hilbert_function(shifts, rels):
    S = structure(0, 1)
    ring = S.ring
    degs = [(0, b) for b in shifts]
    relations = []
    for k, extra, c in rels:
        k = k % len(degs)
        # u^extra e_k + c u^(extra + b_k - b_j) e_j for another generator j of lower shift
        v = {(k, (extra,)): 1}
        for j, (_, bj) in enumerate(degs):
            gap = extra + degs[k][1] - bj
            if j != k and gap >= 0:
                v[(j, (gap,))] = c
                break
        relations.append(v)
    M = BigradedModule(S, degs, relations)
    d = pid_decompose(M)
    assert d.series(10) == t_hilbert(M, 10)
