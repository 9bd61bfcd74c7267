"""Bigraded finitely presented modules over B = k[x][y].

A module is ``B^g / Rel`` with generator bidegrees (x-weight, t-degree).
The y-variables stand for elements g_j t of the Rees algebra; each carries
t-degree 1 and x-weight deg(g_j), so every presentation is bihomogeneous.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .arith import NEG_INF, PolyRing, Polynomial, RingDescriptor, weighted_degree
from .engine import IncrementalGB, ModuleOrder, VecGB, lead, vec_add, vec_mul_poly
from .groebner import dim_from_leading_monomials, syzygy_vectors, vector_bidegree
from .hilbert import HilbertNumerator, series_window


@dataclass(frozen=True)
class Structure:
    """The ring B = k[x][y_1..y_s] with y_j acting as g_j t on A[t]."""

    base: RingDescriptor
    elements: tuple

    @property
    def nx(self) -> int:
        return len(self.base.x_vars)

    @property
    def ny(self) -> int:
        return len(self.elements)

    @property
    def y_names(self) -> tuple:
        taken = set(self.base.x_vars)
        out = []
        for j in range(self.ny):
            n = f"y{j + 1}"
            while n in taken:
                n = "_" + n
            out.append(n)
        return tuple(out)

    @property
    def y_weights(self) -> tuple:
        return tuple(weighted_degree(g, "x-weight") for g in self.elements)

    @property
    def ring(self) -> PolyRing:
        b = self.base.base
        return b.extend(self.y_names, self.y_weights, (1,) * self.ny)

    @property
    def x_ring(self) -> PolyRing:
        return self.base.base

    def lift_x(self, f: Polynomial) -> Polynomial:
        return self.ring.embed(f)

    def y_var(self, j: int) -> Polynomial:
        return self.ring.gen(self.y_names[j])


def _component_shifts(degs: Sequence[tuple]) -> list:
    return [d[0] + d[1] for d in degs]


def module_order(ring: PolyRing, degs: Sequence[tuple]) -> ModuleOrder:
    return ModuleOrder(ring, _component_shifts(degs))


class BigradedModule:
    """Cokernel of relations in the free module with given generator bidegrees."""

    def __init__(self, structure: Structure, gen_degrees: Sequence[tuple],
                 relations: Sequence[dict], label: str = "", ring: PolyRing | None = None):
        self.structure = structure
        self.ring = ring or structure.ring
        self.gen_degrees = [tuple(d) for d in gen_degrees]
        self.relations = [r for r in relations if r]
        self.label = label
        self._gb: VecGB | None = None
        for r in self.relations:
            vector_bidegree(self.ring, r, self.gen_degrees)

    @property
    def rank(self) -> int:
        return len(self.gen_degrees)

    @property
    def order(self) -> ModuleOrder:
        return module_order(self.ring, self.gen_degrees)

    @property
    def gb(self) -> VecGB:
        if self._gb is None:
            self._gb = VecGB(self.relations, self.order, self.ring.char)
        return self._gb

    def reduce(self, v: dict) -> dict:
        return self.gb.reduce(v)

    def basis_vector(self, k: int) -> dict:
        return {(k, self.ring.zero_exps()): 1}

    def is_zero(self) -> bool:
        return all(not self.reduce(self.basis_vector(k)) for k in range(self.rank))

    def leading_by_component(self) -> dict:
        out: dict = {}
        for c, e in self.gb.lts:
            out.setdefault(c, []).append(e)
        return out

    def dim(self):
        """Krull dimension, from the leading-term module."""
        lt = self.leading_by_component()
        best = NEG_INF
        for k in range(self.rank):
            d = dim_from_leading_monomials(lt.get(k, []), self.ring.nvars)
            best = max(best, d)
        return best

    def var_degrees(self) -> list:
        return [(w, t) for w, t in zip(self.ring.xweights, self.ring.tdegs)]

    def hilbert_box(self, w_max: int, n_max: int) -> tuple:
        """Bigraded Hilbert function for x-weight <= w_max and t-degree <= n_max.

        Returns (array, offsets) with array[w - off_w, n - off_n].
        """
        hn = HilbertNumerator(self.var_degrees())
        lt = self.leading_by_component()
        nums = [(self.gen_degrees[k], hn.numerator(lt.get(k, []))) for k in range(self.rank)]
        off = [min([0] + [d[0] for d in self.gen_degrees]), min([0] + [d[1] for d in self.gen_degrees])]
        return series_window(nums, self.var_degrees(), [w_max, n_max], off), off

    def hilbert_value(self, w: int, n: int) -> int:
        arr, off = self.hilbert_box(w, n)
        i, j = w - off[0], n - off[1]
        if i < 0 or j < 0:
            return 0
        return int(arr[i, j])

    def t_indegree(self):
        """Smallest t-degree of a nonzero element (+inf for the zero module)."""
        ds = [self.gen_degrees[k][1] for k in range(self.rank) if self.reduce(self.basis_vector(k))]
        return min(ds) if ds else float("inf")

    def __repr__(self):
        return f"BigradedModule({self.label!r}, gens={self.gen_degrees}, relations={len(self.relations)})"


# ---------------------------------------------------------------- submodules

def vec_from_polys(entries: Sequence[Polynomial]) -> dict:
    v: dict = {}
    for i, f in enumerate(entries):
        for e, c in f.terms.items():
            v[(i, e)] = c
    return v


def vec_component(ring: PolyRing, v: dict, k: int) -> Polynomial:
    return Polynomial(ring, {e: c for (c0, e), c in v.items() if c0 == k}, True)


def minimal_subset(ring: PolyRing, degs: Sequence[tuple], vecs: Sequence[dict],
                   modulo: Sequence[dict] = ()) -> list:
    """Indices of a minimal generating subset of (vecs + modulo)/(modulo).

    Graded Nakayama: scan by increasing total degree and keep a vector when
    it is not in the span of ``modulo`` and the vectors kept before it.
    """
    order = module_order(ring, degs)
    inc = IncrementalGB(order, ring.char)
    for m in modulo:
        if m:
            inc.bb.push_input(m)
    inc.bb.run()
    shifts = _component_shifts(degs)
    keyed = []
    for i, v in enumerate(vecs):
        if not v:
            continue
        d = max(order.degree(t) for t in v)
        keyed.append((d, i))
    keyed.sort()
    kept = []
    for _, i in keyed:
        if inc.add(vecs[i]):
            kept.append(i)
    return sorted(kept)


def submodule_contains(ring: PolyRing, degs: Sequence[tuple], gens: Sequence[dict],
                       vecs: Sequence[dict]) -> bool:
    gb = VecGB(gens, module_order(ring, degs), ring.char)
    return all(not gb.reduce(v) for v in vecs)


def colon_element(ring: PolyRing, degs: Sequence[tuple], U: Sequence[dict], f: Polynomial) -> list:
    """Generators of (U : f) = {v : f v in U} in the free module with row degrees degs."""
    r = len(degs)
    z = ring.zero_exps()
    cols = []
    for k in range(r):
        cols.append({(k, e): c for e, c in f.terms.items()})
    cols.extend(U)
    syz, _ = syzygy_vectors(ring, cols, degs)
    out = []
    for s in syz:
        v = {(c, e): x for (c, e), x in s.items() if c < r}
        if v:
            out.append(v)
    return out


def intersect_submodules(ring: PolyRing, degs: Sequence[tuple], U: Sequence[dict],
                         V: Sequence[dict]) -> list:
    U = [u for u in U if u]
    V = [v for v in V if v]
    if not U or not V:
        return []
    syz, _ = syzygy_vectors(ring, list(U) + list(V), degs)
    p = ring.char
    out = []
    for s in syz:
        acc: dict = {}
        for i, u in enumerate(U):
            coef = {e: c for (c0, e), c in s.items() if c0 == i}
            if coef:
                acc = vec_add(acc, vec_mul_poly(u, coef, p), p)
        if acc:
            out.append(acc)
    return out


def same_submodule(ring: PolyRing, degs, U, V) -> bool:
    return submodule_contains(ring, degs, U, V) and submodule_contains(ring, degs, V, U)


def saturate_by_element(ring: PolyRing, degs, U: Sequence[dict], f: Polynomial,
                        max_steps: int = 64) -> list:
    cur = list(U)
    for _ in range(max_steps):
        nxt = colon_element(ring, degs, cur, f)
        if submodule_contains(ring, degs, cur, nxt):
            return cur
        cur = nxt
    raise RuntimeError("module saturation did not stabilize")


def saturate_by_ideal(ring: PolyRing, degs, U: Sequence[dict], gens: Sequence[Polynomial]) -> list:
    """(U : I^inf) = intersection over generators f of I of (U : f^inf)."""
    out = None
    for f in gens:
        s = saturate_by_element(ring, degs, U, f)
        out = s if out is None else intersect_submodules(ring, degs, out, s)
    return out if out is not None else list(U)


# ---------------------------------------------------------------- pruning

@dataclass
class Pruning:
    """Record of generators removed because a relation expressed them."""

    steps: list = field(default_factory=list)  # (k, relation, constant)
    p: int = 0

    def apply(self, v: dict) -> dict:
        for k, r, c in self.steps:
            v = _eliminate_component(v, k, r, c, self.p)
        return v


def _eliminate_component(v: dict, k: int, r: dict, c: int, p: int) -> dict:
    coef = {e: x for (c0, e), x in v.items() if c0 == k}
    if coef:
        inv = pow(c, -1, p)
        coef = {e: x * inv % p for e, x in coef.items()}
        v = vec_add(v, vec_mul_poly(r, coef, p), p, -1)
    out = {}
    for (c0, e), x in v.items():
        if c0 == k:
            raise AssertionError("component survived elimination")
        out[(c0 - 1 if c0 > k else c0, e)] = x
    return out


def prune_presentation(ring: PolyRing, degs: Sequence[tuple], relations: Sequence[dict]):
    """Drop generators that a relation writes in terms of the others.

    Returns (new degrees, new relations, Pruning).
    """
    p = ring.char
    z = ring.zero_exps()
    degs = list(degs)
    rels = [dict(r) for r in relations if r]
    pr = Pruning(p=p)
    while True:
        hit = None
        for i, r in enumerate(rels):
            for (c0, e), x in r.items():
                if e == z:
                    hit = (i, c0, x)
                    break
            if hit:
                break
        if hit is None:
            return degs, rels, pr
        i, k, c = hit
        r = rels.pop(i)
        rels = [_eliminate_component(s, k, r, c, p) for s in rels]
        rels = [s for s in rels if s]
        pr.steps.append((k, r, c))
        degs.pop(k)


def minimize_module(M: BigradedModule) -> tuple:
    """(minimal module, Pruning) with minimal generators and relations."""
    degs, rels, pr = prune_presentation(M.ring, M.gen_degrees, M.relations)
    keep = minimal_subset(M.ring, degs, rels)
    out = BigradedModule(M.structure, degs, [rels[i] for i in keep], M.label, M.ring)
    return out, pr


def quotient_by_submodule(M: BigradedModule, extra: Sequence[dict], label: str = "") -> BigradedModule:
    return BigradedModule(M.structure, M.gen_degrees, list(M.relations) + list(extra),
                          label or M.label, M.ring)
