"""Good filtrations of A = k[x]/Q, reductions, reduction numbers and analytic spread."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .arith import Polynomial, RingDescriptor, weighted_degree
from .groebner import (IdealHandle, eliminate_poly, ideal_equal, ideal_product, ideal_quotient,
                       interreduced, krull_dim, maximal_ideal, minimalize, unit_ideal, zero_ideal,
                       GroebnerBasis)
from .newton import closure_power_generators


class FiltrationError(ValueError):
    pass


class BudgetError(FiltrationError):
    pass


DEFAULT_K_MAX = 8
DEFAULT_N_MAX = 8


class GoodFiltration:
    """A filtration I_0 = A ⊇ I_1 ⊇ ... given by a finite table and the rule
    I_n = I_1 I_{n-1} for n > n0.

    For ``kind == "m_filtration_of"`` the ideals are m·I_{n-1}(parent) for n ≥ 1.
    """

    def __init__(self, ring: RingDescriptor, kind: str, table: Sequence[IdealHandle], n0: int,
                 base_ideal: IdealHandle | None = None, parent: "GoodFiltration | None" = None,
                 meta: dict | None = None):
        self.ring = ring
        self.kind = kind
        self.table = list(table)
        self.n0 = n0
        self.base_ideal = base_ideal if base_ideal is not None else self.table[1]
        self.parent = parent
        self.meta = dict(meta or {})
        self._cache: dict = {i: I for i, I in enumerate(self.table)}
        self._m = maximal_ideal(ring)

    def ideal(self, n: int) -> IdealHandle:
        if n <= 0:
            return self._cache[0]
        if n in self._cache:
            return self._cache[n]
        if self.kind == "m_filtration_of":
            I = ideal_product(self._m, self.parent.ideal(n - 1))
        else:
            I = ideal_product(self.ideal(1), self.ideal(n - 1))
        self._cache[n] = I
        return I

    def __getitem__(self, n: int) -> IdealHandle:
        return self.ideal(n)

    @property
    def I1(self) -> IdealHandle:
        return self.ideal(1)

    def describe(self) -> dict:
        return {"kind": self.kind, "n0": self.n0,
                "table": [[str(g) for g in I.gens] for I in self.table]}

    def __repr__(self):
        return f"GoodFiltration({self.kind}, n0={self.n0})"


def _check_proper_homogeneous(I: IdealHandle):
    if not I.is_homogeneous():
        raise FiltrationError("ideal generators must be weighted-homogeneous")
    if I.is_unit():
        raise FiltrationError("the ideal is the whole ring")
    if I.is_zero():
        raise FiltrationError("the ideal is zero")


def verify_filtration(F: GoodFiltration, window: int = 2) -> None:
    """Chain, multiplicativity and goodness checks; raises FiltrationError."""
    n0 = F.n0
    top = n0 + window + 1
    if not F.ideal(0).is_unit():
        raise FiltrationError("I_0 must be the whole ring")
    if F.ideal(1).is_unit():
        raise FiltrationError("I_1 must be a proper ideal")
    for n in range(1, top + 1):
        if not F.ideal(n - 1).contains_ideal(F.ideal(n)):
            raise FiltrationError(f"chain violation: I_{n} is not contained in I_{n - 1}")
    for i in range(1, n0 + 2):
        for j in range(i, n0 + 2 - i):
            if not F.ideal(i + j).contains_ideal(ideal_product(F.ideal(i), F.ideal(j))):
                raise FiltrationError(f"multiplicativity violation: I_{i} I_{j} is not in I_{i + j}")


def make_adic(I: IdealHandle) -> GoodFiltration:
    _check_proper_homogeneous(I)
    I = interreduced(I)
    return GoodFiltration(I.ring, "adic", [unit_ideal(I.ring), I], 1, I)


def _stabilization_index(ideals: list, start: int = 1, window: int = 2):
    """Smallest n0 >= start with ideals[m+1] = ideals[1]*ideals[m] for m in n0..n0+window."""
    I1 = ideals[1]
    ok = {}
    for m in range(1, len(ideals) - 1):
        ok[m] = ideal_equal(ideals[m + 1], ideal_product(I1, ideals[m]))
    for n0 in range(start, len(ideals) - 1 - window):
        if all(ok[m] for m in range(n0, n0 + window + 1)):
            return n0
    return None


def annihilator_is_zero(I: IdealHandle) -> bool:
    """(0 :_A I) = 0, i.e. (Q : I) = Q in k[x]."""
    if not I.ring.quotient_gens:
        return not I.is_zero()
    ann = ideal_quotient(zero_ideal(I.ring), I)
    return ann.is_zero()


def ratliff_rush_ideal(I: IdealHandle, n: int, k_max: int = DEFAULT_K_MAX,
                       powers: dict | None = None) -> tuple:
    """(union over k of (I^{n+k} : I^k), k at which two consecutive colons agreed)."""
    powers = powers if powers is not None else {}

    def pw(m):
        if m not in powers:
            powers[m] = unit_ideal(I.ring) if m == 0 else ideal_product(I, pw(m - 1))
        return powers[m]

    prev = ideal_quotient(pw(n + 1), pw(1))
    for k in range(2, k_max + 1):
        cur = ideal_quotient(pw(n + k), pw(k))
        if ideal_equal(cur, prev):
            return prev, k
        prev = cur
    raise BudgetError(f"RR budget exceeded: no stabilization of (I^{{{n}+k}} : I^k) for k <= {k_max}")


def make_ratliff_rush(I: IdealHandle, k_max: int = DEFAULT_K_MAX, window: int = 2) -> GoodFiltration:
    _check_proper_homogeneous(I)
    if not annihilator_is_zero(I):
        raise FiltrationError("Ratliff-Rush undefined: I has a nonzero annihilator")
    I = interreduced(I)
    powers: dict = {}
    ideals = [unit_ideal(I.ring)]
    certs = {}
    n = 1
    while True:
        J, k = ratliff_rush_ideal(I, n, k_max, powers)
        ideals.append(J)
        certs[n] = k
        n0 = _stabilization_index(ideals, 1, window) if len(ideals) >= window + 3 else None
        if n0 is not None:
            break
        if n > k_max + window + 2:
            raise BudgetError("RR budget exceeded: goodness not certified")
        n += 1
    table = ideals[:n0 + 1]
    F = GoodFiltration(I.ring, "ratliff_rush", table, n0, I, meta={"k_max": k_max, "stabilized_at_k": certs})
    # the extension rule must reproduce the computed tail
    for m in range(n0 + 1, len(ideals)):
        if not ideal_equal(F.ideal(m), ideals[m]):
            raise FiltrationError("Ratliff-Rush tail disagrees with the extension rule")
    return F


def _monomial_exponents(I: IdealHandle) -> list:
    out = []
    for g in I.gens:
        if len(g.terms) != 1:
            raise FiltrationError(f"non-monomial generator {g}")
        out.append(next(iter(g.terms)))
    return out


def integral_closure_power(I: IdealHandle, n: int) -> IdealHandle:
    if I.ring.quotient_gens:
        raise FiltrationError("integral closures are offered over polynomial base rings only")
    exps = _monomial_exponents(I)
    base = I.base
    if n <= 0:
        return unit_ideal(I.ring)
    return IdealHandle(I.ring, [base.monomial(e) for e in closure_power_generators(exps, n)])


def make_integral_closure_monomial(I: IdealHandle, n_max: int = DEFAULT_N_MAX, window: int = 2
                                   ) -> GoodFiltration:
    _check_proper_homogeneous(I)
    _monomial_exponents(I)
    I = interreduced(I)
    ideals = [unit_ideal(I.ring)]
    n0 = None
    for n in range(1, n_max + window + 2):
        ideals.append(integral_closure_power(I, n))
        if len(ideals) >= window + 3:
            n0 = _stabilization_index(ideals, 1, window)
            if n0 is not None:
                break
    if n0 is None or n0 > n_max:
        raise BudgetError(f"goodness of the integral closure filtration not certified within n_max={n_max}")
    F = GoodFiltration(I.ring, "integral_closure_monomial", ideals[:n0 + 1], n0, I, meta={"n_max": n_max})
    for m in range(n0 + 1, len(ideals)):
        if not ideal_equal(F.ideal(m), ideals[m]):
            raise FiltrationError("integral closure tail disagrees with the extension rule")
    return F


def make_explicit(ideals: Sequence[IdealHandle], window: int = 2) -> GoodFiltration:
    """Filtration from I_1..I_n0 (I_0 = A is implicit); goodness checked on a window."""
    ideals = list(ideals)
    if not ideals:
        raise FiltrationError("an explicit filtration needs at least I_1")
    ring = ideals[0].ring
    for I in ideals:
        if not I.is_homogeneous():
            raise FiltrationError("ideal generators must be weighted-homogeneous")
    table = [unit_ideal(ring)] + [interreduced(I) for I in ideals]
    for n in range(1, len(table)):
        if not table[n - 1].contains_ideal(table[n]):
            raise FiltrationError(f"chain violation: I_{n} is not contained in I_{n - 1}")
    if table[1].is_unit():
        raise FiltrationError("I_1 must be a proper ideal")
    n0 = len(table) - 1
    F = GoodFiltration(ring, "explicit", table, n0, table[1])
    # multiplicativity on the table and across the extension rule
    for i in range(1, n0 + 1):
        for j in range(i, n0 + 2 - i):
            if not F.ideal(i + j).contains_ideal(ideal_product(F.ideal(i), F.ideal(j))):
                raise FiltrationError(f"multiplicativity violation: I_{i} I_{j} is not in I_{i + j}")
    verify_filtration(F, window)
    # shrink n0 to the true stabilization index
    n = n0
    while n > 1 and ideal_equal(F.ideal(n), ideal_product(F.ideal(1), F.ideal(n - 1))):
        n -= 1
    if n != n0:
        F = GoodFiltration(ring, "explicit", table[:n + 1], n, table[1], meta={"given_length": n0})
        for m in range(n + 1, n0 + 1):
            if not ideal_equal(F.ideal(m), table[m]):
                raise FiltrationError("explicit table disagrees with the extension rule")
    return F


def check_m_condition(F: GoodFiltration):
    """First n with I_{n+1} not in m·I_n, or None (checked n = 0..n0, enough by goodness)."""
    m = maximal_ideal(F.ring)
    for n in range(0, F.n0 + 1):
        if not ideal_product(m, F.ideal(n)).contains_ideal(F.ideal(n + 1)):
            return n
    return None


def derive_m_filtration(F: GoodFiltration) -> GoodFiltration:
    bad = check_m_condition(F)
    if bad is not None:
        raise FiltrationError(f"𝔉 ≰ 𝓕: I_{bad + 1} is not contained in m·I_{bad}")
    m = maximal_ideal(F.ring)
    table = [unit_ideal(F.ring), interreduced(m)]
    for n in range(1, F.n0 + 1):
        table.append(ideal_product(m, F.ideal(n)))
    G = GoodFiltration(F.ring, "m_filtration_of", table, F.n0 + 1, F.ideal(1), parent=F)
    # module structure over R(F) and its tail: I_1 𝓕_n = 𝓕_{n+1} for n > n0
    for n in range(F.n0 + 1, F.n0 + 4):
        if not ideal_equal(ideal_product(F.ideal(1), G.ideal(n)), G.ideal(n + 1)):
            raise FiltrationError("derived m-filtration failed its goodness window")
    return G


# ---------------------------------------------------------------- reductions

@dataclass
class ReductionCertificate:
    J: IdealHandle
    generators: list
    r_J: int
    witness_n: int
    seed: int
    attempt: int = 0
    weights: tuple = ()

    def describe(self) -> dict:
        return {"generators": [str(g) for g in self.generators], "r_J": self.r_J,
                "witness_n": self.witness_n, "seed": self.seed, "attempt": self.attempt,
                "weights": list(self.weights)}


def _check_J(J: IdealHandle, F: GoodFiltration):
    if not F.I1.contains_ideal(J):
        raise FiltrationError("J is not contained in I_1")


def is_reduction(J: IdealHandle, F: GoodFiltration, budget: int | None = None) -> tuple:
    """(True, n*) with n* ≥ n0 the first index where J I_n = I_{n+1} for n*..n*+n0,
    or (False, last index tried).

    Once J I_m = I_{m+1} for one m ≥ n0 it holds for all larger m:
    I_{m+2} = I_1 I_{m+1} = I_1 J I_m = J I_{m+1}.
    """
    _check_J(J, F)
    n0 = F.n0
    budget = budget if budget is not None else n0 + 12
    for m in range(n0, budget + 1):
        if all(ideal_equal(ideal_product(J, F.ideal(k)), F.ideal(k + 1)) for k in range(m, m + n0 + 1)):
            return True, m
    return False, budget


def reduction_number(F: GoodFiltration, J: IdealHandle, budget: int | None = None) -> int:
    """r_J = sup{n : I_n ≠ J I_{n-1}}."""
    ok, m = is_reduction(J, F, budget)
    if not ok:
        raise FiltrationError("J is not a reduction")
    n = m
    while n >= 1 and ideal_equal(ideal_product(J, F.ideal(n - 1)), F.ideal(n)):
        n -= 1
    return max(n, 0)


def rees_ideal_gens(I1: IdealHandle, gens: Sequence[Polynomial] | None = None) -> tuple:
    """Kernel of k[x][y] -> A[t], y_j -> f_j t; returns (ring k[x][y], generators).

    The y-variables carry x-weight deg f_j and t-degree 1.
    """
    ring = I1.ring
    fs = list(gens) if gens is not None else minimalize(ring, I1.gens)
    base = ring.base
    ynames = []
    taken = set(base.names)
    for j in range(len(fs)):
        nme = f"y{j + 1}"
        while nme in taken:
            nme = "_" + nme
        ynames.append(nme)
    yw = [weighted_degree(f, "x-weight") for f in fs]
    Bring = base.extend(ynames, yw, [1] * len(fs))
    Ering = Bring.extend(("_t",), (0,), (1,))
    t = Ering.gen("_t")
    polys = [Ering.gen(n) - Ering.embed(f) * t for n, f in zip(ynames, fs)]
    polys += [Ering.embed(q) for q in ring.quotient_gens]
    elim = eliminate_poly(polys, ["_t"])
    return Bring, [Bring.restrict(g) for g in elim], fs


def analytic_spread_of_ideal(I1: IdealHandle) -> int:
    Bring, rel, fs = rees_ideal_gens(I1)
    nx = len(I1.ring.x_vars)
    gens = list(rel) + [Bring.gen(n) for n in I1.ring.x_vars]
    gb = GroebnerBasis(gens, ring=Bring)
    return krull_dim(gb)


def analytic_spread(F: GoodFiltration) -> int:
    return analytic_spread_of_ideal(F.I1)


def _rng(seed: int, attempt: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(attempt,))
    return np.random.Generator(np.random.Philox(ss))


def graded_piece_basis(I: IdealHandle, w: int) -> list:
    """Monomial multiples spanning I_w: x^a f with deg(x^a f) = w, f a generator."""
    base = I.base
    out = []
    for f in minimalize(I.ring, I.gens):
        d = weighted_degree(f, "x-weight")
        if d > w:
            continue
        for m in _monomials_of_weight(base.xweights, w - d):
            out.append(base.monomial(m) * f)
    return out


def _monomials_of_weight(weights: Sequence[int], w: int) -> list:
    out = []

    def rec(i, rem, cur):
        if i == len(weights):
            if rem == 0:
                out.append(tuple(cur))
            return
        for k in range(rem // weights[i] + 1):
            cur.append(k)
            rec(i + 1, rem - k * weights[i], cur)
            cur.pop()

    rec(0, w, [])
    return out


def _weight_tuples(weights: Sequence[int], ell: int) -> list:
    ws = sorted(set(weights))
    tuples = list(itertools.combinations_with_replacement(ws, ell))
    tuples.sort(key=lambda t: (sum(t), t))
    return tuples


def minimal_reduction(F: GoodFiltration, seed: int = 0, max_attempts: int = 24,
                      ell: int | None = None) -> ReductionCertificate:
    """A minimal reduction by ℓ random homogeneous elements of I_1.

    When μ(I_1) = ℓ the minimal generators themselves are used.  Otherwise
    weight tuples (w_1 ≤ ... ≤ w_ℓ) drawn from the generator weights are
    tried in order of total weight; each z_j is a random element of the
    graded piece (I_1)_{w_j}.  Randomness is keyed by (seed, attempt).
    """
    ring = F.ring
    p = ring.char
    I1 = F.I1
    gens = minimalize(ring, I1.gens)
    ell = analytic_spread(F) if ell is None else ell
    if ell == len(gens):
        J = IdealHandle(ring, gens)
        ok, m = is_reduction(J, F)
        if not ok:
            raise FiltrationError("minimal generators of I_1 do not form a reduction")
        r = reduction_number(F, J)
        return ReductionCertificate(J, list(gens), r, r, seed, 0,
                                    tuple(weighted_degree(g, "x-weight") for g in gens))
    weights = [weighted_degree(g, "x-weight") for g in gens]
    attempt = 0
    pieces: dict = {}
    for wt in _weight_tuples(weights, ell):
        for _ in range(max(2, max_attempts // max(1, len(_weight_tuples(weights, ell))))):
            rng = _rng(seed, attempt)
            attempt += 1
            zs = []
            for w in wt:
                if w not in pieces:
                    pieces[w] = graded_piece_basis(I1, w)
                basis = pieces[w]
                coeffs = rng.integers(1, p, size=len(basis))
                z = ring.base.zero()
                for c, b in zip(coeffs, basis):
                    z = z + b.scale(int(c))
                zs.append(z)
            if any(z.is_zero() for z in zs):
                continue
            J = IdealHandle(ring, zs)
            ok, m = is_reduction(J, F)
            if ok:
                r = reduction_number(F, J)
                return ReductionCertificate(J, zs, r, r, seed, attempt - 1, tuple(wt))
            if attempt >= max_attempts:
                break
        if attempt >= max_attempts:
            break
    raise FiltrationError(f"reduction search failed (ℓ={ell}, attempts={attempt})")


def sampled_reduction_number(F: GoodFiltration, seeds: Sequence[int]) -> tuple:
    """(min over seeds of r_J, list of the individual values)."""
    vals = [minimal_reduction(F, s).r_J for s in seeds]
    return min(vals), vals
