"""Module Buchberger engine on raw sparse vectors.

A vector is a dict mapping terms ``(component, exponents)`` to nonzero
residues mod p.  Ideals are rank-one modules (component 0).  Term orders are
sort keys; a larger key is a larger term.
"""
from __future__ import annotations

import heapq
import itertools
from typing import Iterable, Sequence

from .arith import MonomialOrder, PolyRing


class BudgetExceeded(RuntimeError):
    """Raised when a computation exceeds its configured step budget."""


class Stats:
    """Deterministic work counters (S-pair reductions performed)."""

    reductions = 0
    budget: int | None = None
    _spent_at_arm = 0

    @classmethod
    def arm(cls, budget: int | None):
        cls.budget = budget
        cls._spent_at_arm = cls.reductions

    @classmethod
    def tick(cls):
        cls.reductions += 1
        if cls.budget is not None and cls.reductions - cls._spent_at_arm > cls.budget:
            raise BudgetExceeded(f"step budget of {cls.budget} reductions exhausted")


class ModuleOrder:
    """Term order on (component, exponents).

    The key is ``rank[c]`` (if given), then the degree of variable ``tvar``
    (if given), then either the supplied monomial order or weighted degree
    with component shift followed by reverse lex, and finally the component
    (lower index is larger).
    """

    def __init__(self, ring: PolyRing, shifts: Sequence[int] | None = None,
                 rank: Sequence[int] | None = None, tvar: int | None = None,
                 mono: MonomialOrder | None = None):
        self.ring = ring
        self.w = ring.total_weights()
        if any(x <= 0 for x in self.w) and mono is None:
            raise ValueError("module orders need positive variable weights")
        self.shifts = list(shifts) if shifts is not None else None
        self.rank = list(rank) if rank is not None else None
        self.tvar = tvar
        self.mono = mono
        self._cache: dict = {}
        self.n = ring.nvars

    def shift(self, c: int) -> int:
        if self.shifts is None:
            return 0
        return self.shifts[c]

    def degree(self, term) -> int:
        c, e = term
        return sum(a * b for a, b in zip(self.w, e)) + self.shift(c)

    def key(self, term):
        k = self._cache.get(term)
        if k is not None:
            return k
        c, e = term
        parts = []
        if self.rank is not None:
            parts.append(self.rank[c])
        if self.tvar is not None:
            parts.append(e[self.tvar])
        if self.mono is not None:
            k = tuple(parts) + tuple(self.mono.key(e)) + (-c,)
        else:
            d = sum(a * b for a, b in zip(self.w, e)) + self.shift(c)
            k = tuple(parts) + (d,) + tuple(-e[i] for i in range(self.n - 1, -1, -1)) + (-c,)
        self._cache[term] = k
        return k

    def negkey(self, term):
        return tuple(-x for x in self.key(term))


def ideal_order(ring: PolyRing, mono: MonomialOrder | None = None) -> ModuleOrder:
    if mono is None:
        return ModuleOrder(ring)
    return ModuleOrder(ring, mono=mono)


# ---------------------------------------------------------------- vectors

def lead(v: dict, order: ModuleOrder):
    return max(v, key=order.key)


def monic(v: dict, order: ModuleOrder, p: int) -> dict:
    t = lead(v, order)
    inv = pow(v[t], -1, p)
    if inv == 1:
        return dict(v)
    return {k: c * inv % p for k, c in v.items()}


def vec_add(a: dict, b: dict, p: int, scale: int = 1) -> dict:
    out = dict(a)
    for k, c in b.items():
        x = (out.get(k, 0) + scale * c) % p
        if x:
            out[k] = x
        else:
            out.pop(k, None)
    return out


def vec_scale(a: dict, c: int, p: int) -> dict:
    c %= p
    if c == 0:
        return {}
    return {k: v * c % p for k, v in a.items()}


def vec_mul_mono(a: dict, e: tuple, c: int, p: int) -> dict:
    """(c * x^e) * a."""
    return {(k[0], tuple(x + y for x, y in zip(k[1], e))): v * c % p for k, v in a.items()}


def vec_mul_poly(a: dict, f: dict, p: int) -> dict:
    """f * a where f is an exponent->coeff dict."""
    out: dict = {}
    for fe, fc in f.items():
        for (c, e), v in a.items():
            k = (c, tuple(x + y for x, y in zip(e, fe)))
            out[k] = (out.get(k, 0) + fc * v) % p
    return {k: v for k, v in out.items() if v}


def _divisor_index(basis: Sequence[dict], lts: Sequence) -> dict:
    idx: dict = {}
    for i, (c, e) in enumerate(lts):
        idx.setdefault(c, []).append((e, i))
    return idx


def _find_divisor(idx: dict, term):
    c, e = term
    for ge, i in idx.get(c, ()):
        for a, b in zip(ge, e):
            if a > b:
                break
        else:
            return i
    return None


def reduce_vec(v: dict, basis: Sequence[dict], lts: Sequence, order: ModuleOrder,
               p: int, idx: dict | None = None, full: bool = True) -> dict:
    """Normal form of v modulo a list of monic vectors with given leading terms."""
    if not v:
        return {}
    if idx is None:
        idx = _divisor_index(basis, lts)
    v = dict(v)
    rem: dict = {}
    heap = [(order.negkey(t), t) for t in v]
    heapq.heapify(heap)
    seen = set(v)
    while heap:
        _, t = heapq.heappop(heap)
        seen.discard(t)
        c = v.get(t)
        if not c:
            continue
        i = _find_divisor(idx, t)
        if i is None:
            if not full:
                rem.update(v)
                return rem
            rem[t] = c
            del v[t]
            continue
        g = basis[i]
        gc, ge = lts[i]
        m = tuple(a - b for a, b in zip(t[1], ge))
        for (kc, ke), kv in g.items():
            nt = (kc, tuple(a + b for a, b in zip(ke, m)))
            x = (v.get(nt, 0) - c * kv) % p
            if x:
                v[nt] = x
                if nt not in seen:
                    seen.add(nt)
                    heapq.heappush(heap, (order.negkey(nt), nt))
            else:
                v.pop(nt, None)
    return rem


# ---------------------------------------------------------------- Buchberger

class _Buchberger:
    def __init__(self, order: ModuleOrder, p: int, ideal_mode: bool):
        self.order = order
        self.p = p
        self.ideal_mode = ideal_mode
        self.polys: list = []
        self.lts: list = []
        self.sugar: list = []
        self.active: list = []  # indices, in insertion order
        self.pairs: dict = {}   # (i, j) -> lcm term
        self.queue: list = []
        self.counter = itertools.count()

    def _tdeg(self, term) -> int:
        return self.order.degree(term)

    def push_input(self, v: dict):
        if not v:
            return
        s = max(self._tdeg(t) for t in v)
        heapq.heappush(self.queue, (s, 0, next(self.counter), ("in", v)))

    def _basis_view(self):
        basis = [self.polys[i] for i in self.active]
        lts = [self.lts[i] for i in self.active]
        return basis, lts

    def insert(self, h: dict, sugar: int):
        order, p = self.order, self.p
        h = monic(h, order, p)
        lt = lead(h, order)
        k = len(self.polys)
        self.polys.append(h)
        self.lts.append(lt)
        self.sugar.append(sugar)
        hc, he = lt
        # candidate pairs with active elements in the same component
        cand = []
        for i in self.active:
            ic, ie = self.lts[i]
            if ic != hc:
                continue
            L = tuple(max(a, b) for a, b in zip(ie, he))
            cand.append((i, L))
        coprime = {}
        if self.ideal_mode:
            for i, L in cand:
                ie = self.lts[i][1]
                coprime[i] = all(a == 0 or b == 0 for a, b in zip(ie, he))
        # Gebauer-Moeller step 1: keep pairs whose lcm is minimal
        D = []
        for pos, (i, L) in enumerate(cand):
            if coprime.get(i):
                D.append((i, L))
                continue
            rest = cand[pos + 1:] + D
            if any(all(a <= b for a, b in zip(L2, L)) for _, L2 in rest):
                continue
            D.append((i, L))
        # step 2: product criterion (ideals only)
        E = [(i, L) for i, L in D if not coprime.get(i)]
        # step 3: drop old pairs made redundant by h
        dead = []
        for (i, j), (c, L) in self.pairs.items():
            if c != hc:
                continue
            if all(a <= b for a, b in zip(he, L)):
                Li = tuple(max(a, b) for a, b in zip(self.lts[i][1], he))
                Lj = tuple(max(a, b) for a, b in zip(self.lts[j][1], he))
                if Li != L and Lj != L:
                    dead.append((i, j))
        for key in dead:
            del self.pairs[key]
        for i, L in E:
            term = (hc, L)
            d = self._tdeg(term)
            s = max(self.sugar[i] + d - self._tdeg(self.lts[i]),
                    sugar + d - self._tdeg(lt))
            self.pairs[(i, k)] = (hc, L)
            heapq.heappush(self.queue, (s, 1, next(self.counter), ("pair", (i, k))))
        # remove active elements whose leading term is divisible by lt(h)
        self.active = [i for i in self.active
                       if not (self.lts[i][0] == hc and all(a <= b for a, b in zip(he, self.lts[i][1])))]
        self.active.append(k)

    def spoly(self, i: int, j: int, L: tuple) -> dict:
        p = self.p
        fi, fj = self.polys[i], self.polys[j]
        mi = tuple(a - b for a, b in zip(L, self.lts[i][1]))
        mj = tuple(a - b for a, b in zip(L, self.lts[j][1]))
        a = vec_mul_mono(fi, mi, 1, p)
        b = vec_mul_mono(fj, mj, 1, p)
        return vec_add(a, b, p, -1)

    def run(self):
        order, p = self.order, self.p
        while self.queue:
            s, kind, _, (tag, payload) = heapq.heappop(self.queue)
            if tag == "pair":
                if payload not in self.pairs:
                    continue
                c, L = self.pairs.pop(payload)
                v = self.spoly(payload[0], payload[1], L)
            else:
                v = payload
            Stats.tick()
            basis, lts = self._basis_view()
            r = reduce_vec(v, basis, lts, order, p)
            if r:
                self.insert(r, s)

    def reduced(self) -> list:
        order, p = self.order, self.p
        basis, lts = self._basis_view()
        out = []
        for k in range(len(basis)):
            others = basis[:k] + basis[k + 1:]
            olts = lts[:k] + lts[k + 1:]
            g = basis[k]
            t = lts[k]
            tail = dict(g)
            del tail[t]
            tail = reduce_vec(tail, others, olts, order, p)
            tail[t] = g[t]
            out.append(monic(tail, order, p))
        out.sort(key=lambda v: order.key(lead(v, order)))
        return out


def groebner(gens: Iterable[dict], order: ModuleOrder, p: int,
             ideal_mode: bool | None = None) -> list:
    """Reduced Groebner basis (monic, sorted by ascending leading term)."""
    gens = [g for g in gens if g]
    if ideal_mode is None:
        ideal_mode = all(t[0] == 0 for g in gens for t in g)
    bb = _Buchberger(order, p, ideal_mode)
    for g in gens:
        bb.push_input(g)
    bb.run()
    return bb.reduced()


class VecGB:
    """A reduced Groebner basis of a submodule with a cached divisor index."""

    def __init__(self, gens: Iterable[dict], order: ModuleOrder, p: int):
        self.order = order
        self.p = p
        self.basis = groebner(gens, order, p)
        self.lts = [lead(g, order) for g in self.basis]
        self.idx = _divisor_index(self.basis, self.lts)

    def reduce(self, v: dict) -> dict:
        return reduce_vec(v, self.basis, self.lts, self.order, self.p, self.idx)

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def has_constant_lead(self) -> bool:
        """True if some leading term is a bare basis vector (the unit ideal in rank one)."""
        return any(not any(e) for _, e in self.lts)


class IncrementalGB:
    """Groebner basis that grows as vectors are added (used for minimal generators)."""

    def __init__(self, order: ModuleOrder, p: int, ideal_mode: bool = False):
        self.bb = _Buchberger(order, p, ideal_mode)
        self.order = order
        self.p = p

    def reduce(self, v: dict) -> dict:
        basis, lts = self.bb._basis_view()
        return reduce_vec(v, basis, lts, self.order, self.p)

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def add(self, v: dict) -> bool:
        """Add v; return False when v already lies in the submodule."""
        r = self.reduce(v)
        if not r:
            return False
        self.bb.push_input(r)
        self.bb.run()
        return True

    def basis(self) -> list:
        return self.bb._basis_view()[0]
