"""Ideal arithmetic over weighted quotient rings A = k[x]/Q.

Every ideal of A is carried by its full preimage in k[x]; the quotient
generators are folded into every Groebner computation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .arith import (NEG_INF, MonomialOrder, PolyRing, Polynomial, RingDescriptor,
                    RingMismatch, weighted_degree)
from .engine import (IncrementalGB, ModuleOrder, VecGB, groebner, ideal_order, lead,
                     reduce_vec)


def to_vec(f: Polynomial, comp: int = 0) -> dict:
    return {(comp, e): c for e, c in f.terms.items()}


def from_vec(ring: PolyRing, v: dict) -> Polynomial:
    return Polynomial(ring, {e: c for (_, e), c in v.items()}, True)


class GroebnerBasis:
    """Reduced Groebner basis of an ideal of a polynomial ring."""

    def __init__(self, gens: Sequence[Polynomial], order: MonomialOrder | None = None,
                 ring: PolyRing | None = None):
        gens = list(gens)
        if ring is None:
            if not gens:
                raise ValueError("cannot infer the ring of an empty generator list")
            ring = gens[0].ring
        for g in gens:
            if g.ring != ring:
                raise RingMismatch("generators over different rings")
        self.ring = ring
        self.order = order or MonomialOrder.degrevlex(ring)
        self._morder = ideal_order(ring, None if self.order.kind == "degrevlex"
                                   and self.order.weights == ring.total_weights() else self.order)
        self._gb = VecGB([to_vec(g) for g in gens], self._morder, ring.char)
        self.gens = [from_vec(ring, v) for v in self._gb.basis]

    def leading_monomials(self) -> list:
        return [e for _, e in self._gb.lts]

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring != self.ring:
            raise RingMismatch("polynomial over a different ring")
        return from_vec(self.ring, self._gb.reduce(to_vec(f)))

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def is_unit_ideal(self) -> bool:
        return self._gb.has_constant_lead()

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)


def buchberger(gens: Sequence[Polynomial], order: MonomialOrder | None = None) -> GroebnerBasis:
    if not gens:
        raise ValueError("buchberger needs at least one generator")
    return GroebnerBasis(gens, order)


# ---------------------------------------------------------------- ideals of A

class IdealHandle:
    """An ideal of A = k[x]/Q given by generators in k[x]."""

    def __init__(self, ring: RingDescriptor, gens: Iterable):
        self.ring = ring
        base = ring.base
        out = []
        for g in gens:
            if isinstance(g, str):
                g = base.parse(g)
            elif isinstance(g, int):
                g = base.const(g)
            if g.ring != base:
                g = base.restrict(g)
            if not g.is_zero():
                out.append(g)
        self.gens = tuple(out)
        self._gb: GroebnerBasis | None = None

    @property
    def base(self) -> PolyRing:
        return self.ring.base

    @property
    def gb(self) -> GroebnerBasis:
        if self._gb is None:
            self._gb = GroebnerBasis(list(self.gens) + list(self.ring.quotient_gens),
                                     ring=self.base)
        return self._gb

    def preimage_gens(self) -> list:
        return list(self.gens) + list(self.ring.quotient_gens)

    def contains(self, f) -> bool:
        if isinstance(f, str):
            f = self.base.parse(f)
        return self.gb.contains(f)

    def contains_ideal(self, other: "IdealHandle") -> bool:
        return all(self.contains(g) for g in other.gens)

    def is_unit(self) -> bool:
        return self.gb.is_unit_ideal()

    def is_zero(self) -> bool:
        """Zero as an ideal of A (contained in Q)."""
        return all(quotient_ideal_gb(self.ring).contains(g) for g in self.gens)

    def is_homogeneous(self) -> bool:
        return all(weighted_degree(g, "x-weight") != "non-homogeneous" for g in self.gens)

    def degrees(self) -> list:
        return [weighted_degree(g, "x-weight") for g in self.gens]

    def __repr__(self):
        return "(" + ", ".join(str(g) for g in self.gens) + ")"

    def __eq__(self, other):
        if not isinstance(other, IdealHandle):
            return NotImplemented
        return ideal_equal(self, other)

    __hash__ = None


_QCACHE: dict = {}


def quotient_ideal_gb(ring: RingDescriptor) -> GroebnerBasis:
    g = _QCACHE.get(ring)
    if g is None:
        g = GroebnerBasis(list(ring.quotient_gens), ring=ring.base)
        _QCACHE[ring] = g
    return g


def unit_ideal(ring: RingDescriptor) -> IdealHandle:
    return IdealHandle(ring, [ring.base.one()])


def zero_ideal(ring: RingDescriptor) -> IdealHandle:
    return IdealHandle(ring, [])


def maximal_ideal(ring: RingDescriptor) -> IdealHandle:
    return IdealHandle(ring, ring.base.gens())


def _same_ring(a: IdealHandle, b: IdealHandle):
    if a.ring != b.ring:
        raise RingMismatch("ideals over different rings")


def _is_monomial(f: Polynomial) -> bool:
    return len(f.terms) == 1


def minimalize(ring: RingDescriptor, gens: Sequence[Polynomial]) -> list:
    """Minimal homogeneous generators of (gens) + Q modulo Q, by graded Nakayama.

    Generators are scanned by increasing x-weight; one is kept when it does
    not lie in the ideal spanned by Q and the generators kept so far.
    """
    base = ring.base
    hom = []
    for g in gens:
        if g.is_zero():
            continue
        d = weighted_degree(g, "x-weight")
        if d == "non-homogeneous":
            raise ValueError(f"generator {g} is not weighted-homogeneous")
        hom.append((d, g))
    hom.sort(key=lambda dg: (dg[0], sorted(dg[1].terms.items())))
    quot = list(ring.quotient_gens)
    if all(_is_monomial(g) for _, g in hom) and all(_is_monomial(q) for q in quot):
        qm = [next(iter(q.terms)) for q in quot]
        kept, km = [], []
        for _, g in hom:
            m = next(iter(g.terms))
            if any(all(a <= b for a, b in zip(h, m)) for h in qm + km):
                continue
            kept.append(base.monomial(m))
            km.append(m)
        return kept
    order = ideal_order(base)
    inc = IncrementalGB(order, base.char, ideal_mode=True)
    for q in quot:
        inc.bb.push_input(to_vec(q))
    inc.bb.run()
    kept = []
    for _, g in hom:
        if inc.add(to_vec(g)):
            kept.append(g)
    return kept


def interreduced(ideal: IdealHandle) -> IdealHandle:
    if ideal.is_unit():
        return unit_ideal(ideal.ring)
    return IdealHandle(ideal.ring, minimalize(ideal.ring, ideal.gens))


def min_generators(I: IdealHandle) -> int:
    """mu(I) = number of minimal homogeneous generators of I in A."""
    if I.is_unit():
        return 1
    return len(minimalize(I.ring, I.gens))


def ideal_sum(a: IdealHandle, b: IdealHandle) -> IdealHandle:
    _same_ring(a, b)
    return IdealHandle(a.ring, a.gens + b.gens)


def ideal_product(a: IdealHandle, b: IdealHandle, minimal: bool = True) -> IdealHandle:
    _same_ring(a, b)
    prods = [f * g for f in a.gens for g in b.gens]
    out = IdealHandle(a.ring, prods)
    if minimal and out.is_homogeneous():
        return interreduced(out)
    return out


def ideal_power(a: IdealHandle, n: int) -> IdealHandle:
    if n < 0:
        raise ValueError("negative power")
    out = unit_ideal(a.ring)
    for _ in range(n):
        out = ideal_product(out, a)
    return out


def poly_intersection(base: PolyRing, gens_a: Sequence[Polynomial],
                      gens_b: Sequence[Polynomial]) -> list:
    """(gens_a) ∩ (gens_b) in k[x] by eliminating u from u*a + (1-u)*b."""
    if not gens_a or not gens_b:
        return []
    big = base.extend(("_u",), (0,), (0,))
    u = big.gen("_u")
    gens = [u * big.embed(f) for f in gens_a]
    gens += [(big.one() - u) * big.embed(f) for f in gens_b]
    ui = big.index("_u")
    order = MonomialOrder.elimination(big, [ui])
    gb = GroebnerBasis(gens, order, big)
    return [base.restrict(g) for g in gb.gens if all(e[ui] == 0 for e in g.terms)]


def ideal_intersection(a: IdealHandle, b: IdealHandle) -> IdealHandle:
    """a ∩ b, intersecting the preimages in k[x]."""
    _same_ring(a, b)
    out = IdealHandle(a.ring, poly_intersection(a.base, a.preimage_gens(), b.preimage_gens()))
    if out.is_homogeneous():
        return interreduced(out)
    return out


def exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    """f / g when g divides f exactly."""
    order = ideal_order(f.ring)
    p = f.ring.char
    gv = to_vec(g)
    glt = lead(gv, order)
    inv = pow(gv[glt], -1, p)
    rem = to_vec(f)
    q: dict = {}
    while rem:
        t = lead(rem, order)
        if not all(a <= b for a, b in zip(glt[1], t[1])):
            raise ValueError(f"{g} does not divide {f}")
        m = tuple(b - a for a, b in zip(glt[1], t[1]))
        c = rem[t] * inv % p
        q[m] = (q.get(m, 0) + c) % p
        for (kc, ke), kv in gv.items():
            nt = (0, tuple(x + y for x, y in zip(ke, m)))
            x = (rem.get(nt, 0) - c * kv) % p
            if x:
                rem[nt] = x
            else:
                rem.pop(nt, None)
    return Polynomial(f.ring, q)


def ideal_colon_element(a: IdealHandle, f: Polynomial) -> IdealHandle:
    """(a : f) in A, computed on preimages as (a ∩ (f)) / f inside k[x]."""
    if f.is_zero():
        raise ValueError("colon by zero ideal")
    inter = poly_intersection(a.base, a.preimage_gens(), [f])
    out = IdealHandle(a.ring, [exact_divide(g, f) for g in inter])
    if out.is_homogeneous():
        return interreduced(out)
    return out


def ideal_quotient(a: IdealHandle, b: IdealHandle) -> IdealHandle:
    _same_ring(a, b)
    if b.is_zero():
        raise ValueError("colon by zero ideal")
    out = None
    for f in b.gens:
        if quotient_ideal_gb(b.ring).contains(f):
            continue
        c = ideal_colon_element(a, f)
        out = c if out is None else ideal_intersection(out, c)
    return out


def ideal_saturation(a: IdealHandle, b: IdealHandle, max_steps: int = 64) -> IdealHandle:
    cur = a
    for _ in range(max_steps):
        nxt = ideal_quotient(cur, b)
        if ideal_equal(nxt, cur):
            return cur
        cur = nxt
    raise RuntimeError("saturation did not stabilize")


def ideal_ops(a: IdealHandle, b: IdealHandle, op: str) -> IdealHandle:
    fn = {"sum": ideal_sum, "product": ideal_product, "intersection": ideal_intersection,
          "quotient": ideal_quotient, "saturation": ideal_saturation}.get(op)
    if fn is None:
        raise ValueError(f"unknown ideal op {op!r}")
    return fn(a, b)


def ideal_equal(a: IdealHandle, b: IdealHandle) -> bool:
    _same_ring(a, b)
    return a.contains_ideal(b) and b.contains_ideal(a)


def in_radical(f: Polynomial, I: IdealHandle) -> bool:
    """f ∈ rad(I) iff (I : f^∞) is the unit ideal."""
    if I.contains(f):
        return True
    sat = ideal_saturation(I, IdealHandle(I.ring, [f]))
    return sat.is_unit()


# ---------------------------------------------------------------- dimension

def dim_from_leading_monomials(lms: Sequence[tuple], nvars: int):
    """Krull dimension of k[x]/(monomials): largest independent variable set."""
    lms = [tuple(i for i, a in enumerate(m) if a) for m in lms]
    if any(len(s) == 0 for s in lms):
        return NEG_INF
    supports = [frozenset(s) for s in lms]
    for size in range(nvars, -1, -1):
        for subset in itertools.combinations(range(nvars), size):
            ss = set(subset)
            if not any(s <= ss for s in supports):
                return size
    return 0


def krull_dim(q) -> int:
    """Dimension of the ambient ring modulo q (an IdealHandle or GroebnerBasis)."""
    if isinstance(q, IdealHandle):
        gb = q.gb
    else:
        gb = q
    return dim_from_leading_monomials(gb.leading_monomials(), gb.ring.nvars)


def ring_dim(ring: RingDescriptor):
    return krull_dim(zero_ideal(ring))


def height(I: IdealHandle):
    return ring_dim(I.ring) - krull_dim(I)


# ---------------------------------------------------------------- elimination

def eliminate_poly(gens: Sequence[Polynomial], block: Sequence[str]) -> list:
    """Generators of (gens) ∩ k[remaining variables], in the original ring."""
    if not gens:
        return []
    ring = gens[0].ring
    if not block:
        return GroebnerBasis(gens, ring=ring).gens
    idx = [ring.index(n) for n in block]
    order = MonomialOrder.elimination(ring, idx)
    gb = GroebnerBasis(gens, order, ring)
    return [g for g in gb.gens if all(all(e[i] == 0 for i in idx) for e in g.terms)]


def eliminate(block: Sequence[str], a: IdealHandle) -> IdealHandle:
    """a ∩ k[variables outside block], as an ideal of the smaller polynomial ring."""
    gens = eliminate_poly(a.preimage_gens(), block)
    ring = a.ring
    keep = [i for i, n in enumerate(ring.x_vars) if n not in block]
    sub = RingDescriptor(tuple(ring.x_vars[i] for i in keep),
                         tuple(ring.x_weights[i] for i in keep), char=ring.char)
    return IdealHandle(sub, [sub.base.restrict(g) for g in gens])


# ---------------------------------------------------------------- syzygies

@dataclass
class SubmodulePresentation:
    """Generators (columns) of a submodule of B^r.

    ``columns`` are sparse vectors {(row, exps): coeff}; ``gen_t_degrees``
    lists the t-degree of each basis row of B^r.
    """

    ring: PolyRing
    rank: int
    columns: list
    gen_t_degrees: list = field(default_factory=list)
    column_bidegrees: list = field(default_factory=list)


def vector_bidegree(ring: PolyRing, v: dict, row_degs: Sequence) -> tuple | None:
    degs = set()
    for (c, e), _ in v.items():
        bx, bt = ring.bidegree(e)
        rx, rt = row_degs[c]
        degs.add((bx + rx, bt + rt))
    if len(degs) > 1:
        raise ValueError("vector is not bihomogeneous")
    return degs.pop() if degs else None


def syzygy_vectors(ring: PolyRing, columns: Sequence[dict], row_degs: Sequence,
                   ) -> tuple:
    """Kernel of B^m -> B^r, e_i -> columns[i]; returns (generators, column bidegrees).

    Uses the graph module (col_i, e_i) in B^(r+m) with the first r
    components ranked above the rest.
    """
    r = len(row_degs)
    m = len(columns)
    col_degs = []
    for v in columns:
        d = vector_bidegree(ring, v, row_degs)
        col_degs.append(d if d is not None else (0, 0))
    shifts = [sum(d) for d in row_degs] + [sum(d) for d in col_degs]
    rank = [1] * r + [0] * m
    order = ModuleOrder(ring, shifts, rank)
    gens = []
    z = ring.zero_exps()
    for i, v in enumerate(columns):
        w = dict(v)
        w[(r + i, z)] = ring.char - 1  # -e_i
        gens.append(w)
    gb = groebner(gens, order, ring.char, ideal_mode=False)
    syz = []
    for g in gb:
        t = lead(g, order)
        if t[0] >= r:
            syz.append({(c - r, e): x for (c, e), x in g.items()})
    return syz, col_degs


def syzygies(columns: Sequence, ring: PolyRing | None = None, row_degs: Sequence | None = None
             ) -> SubmodulePresentation:
    """Syzygies of module elements; columns may be lists of Polynomials."""
    vecs = []
    for col in columns:
        if isinstance(col, dict):
            vecs.append(col)
            continue
        if isinstance(col, Polynomial):
            col = [col]
        ring = ring or col[0].ring
        v = {}
        for i, f in enumerate(col):
            for e, c in f.terms.items():
                v[(i, e)] = c
        vecs.append(v)
    if ring is None:
        raise ValueError("cannot infer the ring")
    if row_degs is None:
        r = 1 + max((c for v in vecs for (c, _) in v), default=0)
        row_degs = [(0, 0)] * r
    syz, col_degs = syzygy_vectors(ring, vecs, row_degs)
    return SubmodulePresentation(ring, len(vecs), syz, [d[1] for d in col_degs], list(col_degs))
