import itertools

from hypothesis import given, settings, strategies as st

from reesreg.hilbert import (HilbertNumerator, expand_rational, hilbert_function_box, numerator_of,
                             series_window, univariate_series)


def brute_count(gens, weights, top):
    """dim_k (k[x]/I)_d for d <= top by listing monomials."""
    n = len(weights)
    out = [0] * (top + 1)
    bound = [top // w for w in weights]
    for m in itertools.product(*(range(b + 1) for b in bound)):
        d = sum(a * w for a, w in zip(m, weights))
        if d > top:
            continue
        if any(all(a >= g for a, g in zip(m, gen)) for gen in gens):
            continue
        out[d] += 1
    return out


def test_polynomial_ring_series():
    assert univariate_series({(0,): 1}, [1, 1], 5) == [1, 2, 3, 4, 5, 6]


def test_complete_intersection_numerator():
    num = HilbertNumerator([(1,), (1,)]).numerator([(2, 0), (0, 2)])
    assert num == {(0,): 1, (2,): -2, (4,): 1}
    assert univariate_series(num, [1, 1], 4) == [1, 2, 1, 0, 0]


def test_weighted_series():
    # k[a,b] with weights 3, 4
    assert univariate_series({(0,): 1}, [3, 4], 8) == [1, 0, 0, 1, 1, 0, 1, 1, 1]


def test_rational_round_trip():
    s = expand_rational([1, 2], 1, 10)
    assert s == [1] + [3] * 10
    assert numerator_of(s, 1) == [1, 2] + [0] * 9


def test_bigraded_box():
    # k[x, y1] with deg x = (1,0), deg y1 = (1,1), modulo x*y1
    hn = HilbertNumerator([(1, 0), (1, 1)])
    arr = series_window([((0, 0), hn.numerator([(1, 1)]))], [(1, 0), (1, 1)], [3, 2])
    # surviving monomials: x^a or y1^b
    expected = [[1, 0, 0], [1, 1, 0], [1, 0, 1], [1, 0, 0]]
    assert arr.tolist() == expected


def test_module_box_offsets():
    arr, off = hilbert_function_box({0: [], 1: [(1,)]}, {0: (0,), 1: (-1,)}, [(1,)], [2])
    assert off == [-1]
    assert arr.tolist() == [1, 1, 1, 1]


gens2 = st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=4)


@settings(max_examples=60, deadline=None)
@given(gens2, st.sampled_from([(1, 1), (1, 2), (2, 3)]))
def test_numerator_matches_monomial_count(gens, weights):
    num = HilbertNumerator([(w,) for w in weights]).numerator(gens)
    assert univariate_series(num, list(weights), 12) == brute_count(gens, weights, 12)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)), max_size=4))
def test_numerator_three_variables(gens):
    num = HilbertNumerator([(1,)] * 3).numerator(gens)
    assert univariate_series(num, [1, 1, 1], 9) == brute_count(gens, (1, 1, 1), 9)
