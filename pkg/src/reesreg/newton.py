"""Newton polyhedron membership for integral closures of monomial ideals.

A monomial x^v lies in the integral closure of I^n exactly when
v ∈ n·conv(E) + R_{≥0}^d, E the exponent vectors of the generators of I.
Equivalently  max{ Σλ : Σ λ_i e_i ≤ v, λ ≥ 0 } ≥ n.  The LP is tiny, so it
is solved exactly over the rationals by enumerating basic solutions.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence


def _solve(mat: list, rhs: list):
    """Solve a square rational system; None if singular."""
    n = len(mat)
    a = [row[:] + [r] for row, r in zip(mat, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def newton_lp_value(exps: Sequence[tuple], v: Sequence[int]) -> Fraction:
    """max Σλ subject to Σ λ_i exps[i] ≤ v (componentwise), λ ≥ 0, exactly."""
    exps = [tuple(e) for e in exps]
    d = len(v)
    m = len(exps)
    if any(not any(e) for e in exps):
        raise ValueError("generator 1: the ideal is not proper")
    best = Fraction(0)
    v = [Fraction(x) for x in v]
    for k in range(1, min(m, d) + 1):
        for S in itertools.combinations(range(m), k):
            for T in itertools.combinations(range(d), k):
                mat = [[Fraction(exps[i][t]) for i in S] for t in T]
                sol = _solve(mat, [v[t] for t in T])
                if sol is None or any(x < 0 for x in sol):
                    continue
                ok = True
                for t in range(d):
                    if sum(sol[j] * exps[i][t] for j, i in enumerate(S)) > v[t]:
                        ok = False
                        break
                if ok:
                    best = max(best, sum(sol))
    return best


def in_closure_power(exps: Sequence[tuple], v: Sequence[int], n: int) -> bool:
    """x^v ∈ integral closure of I^n for the monomial ideal with generator exponents exps."""
    if n <= 0:
        return True
    return newton_lp_value(exps, v) >= n


def closure_power_generators(exps: Sequence[tuple], n: int) -> list:
    """Minimal monomial generators (exponent tuples) of the integral closure of I^n.

    Minimal generators lie in the box [0, n·max_i] in each coordinate:
    lowering a coordinate above n·max_i keeps a point of n·NP(I) inside it.
    """
    d = len(exps[0])
    tops = [n * max(e[i] for e in exps) for i in range(d)]
    pts = sorted(itertools.product(*[range(t + 1) for t in tops]), key=lambda p: (sum(p), p))
    found: list = []
    for p in pts:
        if any(all(a <= b for a, b in zip(g, p)) for g in found):
            continue
        if in_closure_power(exps, p, n):
            found.append(p)
    return sorted(found)
