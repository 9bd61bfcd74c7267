"""Multigraded Hilbert series of monomial quotients.

The numerator K(S/I) of a monomial ideal is computed with the pivot
recursion  K(I) = K(I + (p)) + T^deg(p) K(I : p)  and the base case of
ideals generated by pairwise coprime monomials.  Degrees are tuples (one
entry per grading), so the same code serves x-weight and (x-weight,
t-degree) gradings.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np


def _minimal(gens) -> tuple:
    gens = sorted(set(gens), key=lambda m: (sum(m), m))
    out = []
    for m in gens:
        if not any(all(a <= b for a, b in zip(g, m)) for g in out):
            out.append(m)
    return tuple(sorted(out))


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for da, ca in a.items():
        for db, cb in b.items():
            d = tuple(x + y for x, y in zip(da, db))
            out[d] = out.get(d, 0) + ca * cb
    return {d: c for d, c in out.items() if c}


def _poly_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for d, c in b.items():
        out[d] = out.get(d, 0) + c
    return {d: c for d, c in out.items() if c}


class HilbertNumerator:
    """Numerator computations for a fixed assignment of variable degrees."""

    def __init__(self, var_degrees: Sequence[tuple]):
        self.vdeg = [tuple(d) for d in var_degrees]
        self.ngr = len(self.vdeg[0]) if self.vdeg else 1
        self._memo: dict = {}

    def deg(self, m: tuple) -> tuple:
        out = [0] * self.ngr
        for e, d in zip(m, self.vdeg):
            if e:
                for k in range(self.ngr):
                    out[k] += e * d[k]
        return tuple(out)

    def numerator(self, gens: Sequence[tuple]) -> dict:
        """K(S/I) as {degree tuple: integer coefficient}."""
        return self._num(_minimal(tuple(g) for g in gens))

    def _num(self, gens: tuple) -> dict:
        zero = (0,) * self.ngr
        if not gens:
            return {zero: 1}
        if gens in self._memo:
            return self._memo[gens]
        if any(not any(g) for g in gens):
            res: dict = {}
        else:
            supp = [frozenset(i for i, a in enumerate(g) if a) for g in gens]
            coprime = all(not (supp[i] & supp[j]) for i in range(len(gens))
                          for j in range(i + 1, len(gens)))
            if coprime:
                res = {zero: 1}
                for g in gens:
                    res = _poly_mul(res, {zero: 1, self.deg(g): -1})
            else:
                # pivot on the variable occurring in the most generators
                nv = len(gens[0])
                counts = [sum(1 for g in gens if g[i]) for i in range(nv)]
                v = max(range(nv), key=lambda i: (counts[i], -i))
                exps = sorted(g[v] for g in gens if g[v])
                e = exps[(len(exps) - 1) // 2]
                piv = tuple(e if i == v else 0 for i in range(nv))
                plus = _minimal(gens + (piv,))
                colon = _minimal(tuple(tuple(max(a - b, 0) for a, b in zip(g, piv)) for g in gens))
                res = _poly_add(self._num(plus), _poly_mul({self.deg(piv): 1}, self._num(colon)))
        self._memo[gens] = res
        return res


def _geometric(arr: np.ndarray, vd: tuple) -> np.ndarray:
    """arr / (1 - T^vd) truncated to the box of arr."""
    out = arr.copy()
    k = 1
    while True:
        sh = tuple(k * v for v in vd)
        if any(s >= n for s, n in zip(sh, arr.shape)):
            return out
        dst = tuple(slice(s, None) for s in sh)
        src = tuple(slice(0, n - s) for s, n in zip(sh, arr.shape))
        out[dst] += arr[src]
        k += 1


def series_window(numerators: Sequence[tuple], var_degrees: Sequence[tuple],
                  bounds: Sequence[int], offsets: Sequence[int] | None = None) -> np.ndarray:
    """Expand sum_k T^shift_k K_k / prod(1 - T^deg(v)) in a box.

    ``numerators`` is a list of (shift, numerator dict).  ``bounds`` gives the
    largest degree kept in each grading, ``offsets`` the smallest (default
    0; every numerator term must lie at or above it).  Returns an integer
    array indexed by degree minus offset.  Variable degree vectors must be
    nonnegative and nonzero.
    """
    ngr = len(bounds)
    offsets = list(offsets) if offsets is not None else [0] * ngr
    shape = tuple(max(b - o + 1, 0) for b, o in zip(bounds, offsets))
    arr = np.zeros(shape, dtype=np.int64)
    if 0 in shape:
        return arr
    for shift, num in numerators:
        for d, c in num.items():
            idx = tuple(a + b - o for a, b, o in zip(d, shift, offsets))
            if any(i < 0 for i in idx):
                raise ValueError("numerator term below the window; lower the offsets")
            if all(i < s for i, s in zip(idx, shape)):
                arr[idx] += c
    for vd in var_degrees:
        if not any(vd) or any(v < 0 for v in vd):
            raise ValueError("variable degrees must be nonnegative and nonzero")
        arr = _geometric(arr, tuple(vd))
    return arr


def hilbert_function_box(gens_by_comp: dict, comp_shifts: dict, var_degrees: Sequence[tuple],
                         bounds: Sequence[int]) -> np.ndarray:
    """Hilbert function of (free module)/(monomial submodule) in a box of degrees.

    ``gens_by_comp`` maps component -> list of leading exponent tuples,
    ``comp_shifts`` maps component -> degree tuple of that basis vector.
    """
    hn = HilbertNumerator(var_degrees)
    nums = []
    for c, sh in comp_shifts.items():
        nums.append((sh, hn.numerator(gens_by_comp.get(c, []))))
    offsets = [min([0] + [sh[k] for sh in comp_shifts.values()]) for k in range(len(bounds))]
    return series_window(nums, var_degrees, bounds, offsets), offsets


def univariate_series(numerator: dict, weights: Sequence[int], top: int) -> list:
    """Coefficients 0..top of K(t)/prod(1 - t^w)."""
    arr = series_window([((0,), numerator)], [(w,) for w in weights], [top])
    return [int(v) for v in arr]


def expand_rational(num: Sequence[int], denom_power: int, top: int) -> list:
    """Coefficients 0..top of num(x)/(1-x)^denom_power."""
    coeffs = [0] * (top + 1)
    for i, c in enumerate(num):
        if i <= top:
            coeffs[i] += c
    for _ in range(denom_power):
        for i in range(1, top + 1):
            coeffs[i] += coeffs[i - 1]
    return coeffs


def numerator_of(series: Sequence[int], denom_power: int) -> list:
    """(1-x)^denom_power * series, truncated to the length of the series."""
    s = list(series)
    for _ in range(denom_power):
        s = [s[0]] + [s[i] - s[i - 1] for i in range(1, len(s))]
    return s
