"""Resolutions, local cohomology along the structure variables, regularity.

Modules are BigradedModules over S = T[z_1..z_l], T = k[x] (x-weight
graded), z_j of t-degree 1.  Local cohomology is taken with respect to (z).

a-invariants.  With F_• a free resolution of M over S and
H = H^l_(z)(S) = ⊕_{β ≥ 1} T z^{-β}, one has H^i_(z)(M) = H_{l-i}(F_• ⊗ H).
In t-degree n the complex K_n = (F_• ⊗ H)_n is a finite complex of free
T-modules with basis (k, β), |β| = b_k - n, so each graded piece of local
cohomology is the homology of an explicit complex over T.  Which indices
can be nonzero is decided first: H^i vanishes below grade((z), M) and
above cd = dim M/(x)M, and is nonzero at both ends.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .arith import NEG_INF, PolyRing, Polynomial, weighted_degree
from .engine import ModuleOrder, VecGB, vec_add, vec_mul_poly
from .groebner import syzygy_vectors, vector_bidegree
from .hilbert import numerator_of
from .modules import (BigradedModule, minimal_subset, minimize_module, module_order,
                      saturate_by_ideal, colon_element)

POS_INF = float("inf")


class UndecidedError(RuntimeError):
    """A vanishing question the implemented certificates cannot settle."""


# ---------------------------------------------------------------- linear algebra over a polynomial ring

def kernel(ring: PolyRing, columns: Sequence[dict], col_degs: Sequence[tuple],
           row_degs: Sequence[tuple]) -> list:
    """Generators of the kernel of ⊕ B e_k -> B^r, e_k -> columns[k]."""
    z = ring.zero_exps()
    out = []
    nz = [k for k, c in enumerate(columns) if c]
    for k, c in enumerate(columns):
        if not c:
            out.append({(k, z): 1})
    if nz and row_degs:
        syz, _ = syzygy_vectors(ring, [columns[k] for k in nz], row_degs)
        for s in syz:
            out.append({(nz[c], e): x for (c, e), x in s.items()})
    return out


def contained(ring: PolyRing, degs: Sequence[tuple], gens: Sequence[dict], vecs: Sequence[dict]) -> bool:
    vecs = [v for v in vecs if v]
    if not vecs:
        return True
    gens = [g for g in gens if g]
    if not gens:
        return False
    gb = VecGB(gens, module_order(ring, degs), ring.char)
    return all(not gb.reduce(v) for v in vecs)


def homology_nonzero(ring: PolyRing, degs_prev: Sequence[tuple], d_in: Sequence[dict],
                     degs_here: Sequence[tuple], d_out: Sequence[dict]) -> bool:
    """Is ker(d_out: C_here -> C_prev) / im(d_in: C_next -> C_here) nonzero?

    ``d_out`` lists the images of the basis of C_here, ``d_in`` the images
    of the basis of C_next (vectors in C_here).
    """
    if not degs_here:
        return False
    ker = kernel(ring, d_out, degs_here, degs_prev)
    if not ker:
        return False
    return not contained(ring, degs_here, d_in, ker)


# ---------------------------------------------------------------- resolutions

@dataclass
class FreeResolution:
    ring: PolyRing
    degrees: list            # degrees[j] = bidegrees of the basis of F_j
    maps: list               # maps[j] = columns of d_{j+1}: F_{j+1} -> F_j

    @property
    def length(self) -> int:
        return len(self.degrees) - 1 if self.degrees and self.degrees[0] else -1

    def betti(self) -> dict:
        out = {}
        for j, ds in enumerate(self.degrees):
            for d in ds:
                out[(j, d[1])] = out.get((j, d[1]), 0) + 1
        return out

    def betti_table(self) -> list:
        return [[j, t, c] for (j, t), c in sorted(self.betti().items())]

    def composition_zero(self) -> bool:
        p = self.ring.char
        for j in range(1, len(self.maps)):
            for col in self.maps[j]:
                img: dict = {}
                for (c, e), x in col.items():
                    img = vec_add(img, vec_mul_poly(self.maps[j - 1][c], {e: x}, p), p)
                if img:
                    return False
        return True

    def minimal(self) -> bool:
        z = self.ring.zero_exps()
        return all(e != z for m in self.maps for col in m for (_, e) in col)


def minimal_resolution(M: BigradedModule, max_len: int | None = None) -> FreeResolution:
    M, _ = minimize_module(M)
    ring = M.ring
    degs = [list(M.gen_degrees)]
    maps = []
    if not degs[0]:
        return FreeResolution(ring, [[]], [])
    cols = list(M.relations)
    row = degs[0]
    limit = max_len if max_len is not None else ring.nvars + 1
    while cols:
        cdegs = [vector_bidegree(ring, c, row) for c in cols]
        maps.append(cols)
        degs.append(cdegs)
        if len(maps) > limit:
            raise RuntimeError("resolution longer than the number of variables")
        syz = kernel(ring, cols, cdegs, row)
        keep = minimal_subset(ring, cdegs, syz) if syz else []
        cols = [syz[i] for i in keep]
        row = cdegs
    return FreeResolution(ring, degs, maps)


def projective_dimension(res: FreeResolution) -> int:
    return res.length


def depth_dim(M: BigradedModule, res: FreeResolution | None = None) -> tuple:
    """(depth, dim) over the module's ring; (+inf, -inf) for the zero module."""
    Mm, _ = minimize_module(M)
    if Mm.rank == 0:
        return POS_INF, NEG_INF
    res = res or minimal_resolution(Mm)
    return Mm.ring.nvars - res.length, Mm.dim()


# ---------------------------------------------------------------- ring split

@dataclass(frozen=True)
class Split:
    """Positions of the x-block and z-block inside a module ring."""

    nx: int
    nz: int

    @staticmethod
    def of(M: BigradedModule) -> "Split":
        ring = M.ring
        nz = sum(1 for t in ring.tdegs if t > 0)
        return Split(ring.nvars - nz, nz)


def _x_ring(ring: PolyRing, nx: int) -> PolyRing:
    return PolyRing(ring.names[:nx], ring.xweights[:nx], (0,) * nx, ring.char)


def _z_ring(ring: PolyRing, nx: int) -> PolyRing:
    return PolyRing(ring.names[nx:], ring.xweights[nx:], ring.tdegs[nx:], ring.char)


# ---------------------------------------------------------------- Tor against T = S/(z)

def tor_table(res: FreeResolution, sp: Split) -> dict:
    """{j: sorted t-degrees n with Tor_j^S(M, T)_n ≠ 0}."""
    ring = res.ring
    T = _x_ring(ring, sp.nx)
    nx = sp.nx

    def slice_cols(j, n):
        # columns of d_j restricted to z = 0, basis of F_j in t-degree n
        if j == 0 or j > len(res.maps):
            return []
        rows = res.degrees[j - 1]
        ridx = {r: i for i, r in enumerate([r for r in range(len(rows)) if rows[r][1] == n])}
        out = []
        for k, d in enumerate(res.degrees[j]):
            if d[1] != n:
                continue
            col = {}
            for (c, e), x in res.maps[j - 1][k].items():
                if any(e[nx:]):
                    continue
                col[(ridx[c], e[:nx])] = x
            out.append(col)
        return out

    out = {}
    for j, ds in enumerate(res.degrees):
        ns = sorted(set(d[1] for d in ds))
        hits = []
        for n in ns:
            here = [(d[0], 0) for d in ds if d[1] == n]
            prev = [(d[0], 0) for d in res.degrees[j - 1] if d[1] == n] if j > 0 else []
            d_out = slice_cols(j, n) if j > 0 else [dict() for _ in here]
            d_in = slice_cols(j + 1, n) if j + 1 < len(res.degrees) else []
            if homology_nonzero(T, prev, d_in, here, d_out):
                hits.append(n)
        if hits:
            out[j] = hits
    return out


def grade_z(res: FreeResolution, sp: Split, tors: dict | None = None):
    """grade((z), M) = l - max{j : Tor_j(M, T) ≠ 0}; +inf for M = 0."""
    tors = tor_table(res, sp) if tors is None else tors
    if not tors:
        return POS_INF
    return sp.nz - max(tors)


def reg_from_tor(tors: dict):
    if not tors:
        return NEG_INF
    return max(max(ns) - j for j, ns in tors.items())


def cd_z(M: BigradedModule, sp: Split):
    """Cohomological dimension of (z) on M: dim M/(x)M."""
    ring = M.ring
    extra = []
    for k in range(M.rank):
        for i in range(sp.nx):
            e = tuple(1 if v == i else 0 for v in range(ring.nvars))
            extra.append({(k, e): 1})
    Q = BigradedModule(M.structure, M.gen_degrees, list(M.relations) + extra, M.label, ring)
    return Q.dim()


# ---------------------------------------------------------------- local cohomology

def _compositions(total: int, parts: int):
    """β ∈ Z_{≥1}^parts with |β| = total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if total < parts:
        return
    for c in itertools.combinations(range(1, total), parts - 1):
        cuts = (0,) + c + (total,)
        yield tuple(cuts[i + 1] - cuts[i] for i in range(parts))


class LocalCohomology:
    """Graded pieces of H^i_(z)(M) through the complexes K_n."""

    def __init__(self, M: BigradedModule, res: FreeResolution | None = None):
        self.M, _ = minimize_module(M)
        self.sp = Split.of(self.M)
        self.res = res or minimal_resolution(self.M)
        ring = self.M.ring
        self.T = _x_ring(ring, self.sp.nx)
        self.zw = ring.xweights[self.sp.nx:]
        self._basis: dict = {}

    def basis(self, j: int, n: int) -> list:
        """[(k, β, x-degree)] for K_n in homological position j."""
        key = (j, n)
        if key not in self._basis:
            out = []
            if 0 <= j < len(self.res.degrees):
                for k, (bx, bt) in enumerate(self.res.degrees[j]):
                    for beta in _compositions(bt - n, self.sp.nz):
                        out.append((k, beta, bx - sum(b * w for b, w in zip(beta, self.zw))))
            self._basis[key] = out
        return self._basis[key]

    def differential(self, j: int, n: int) -> list:
        """Images of the K_n basis in position j, as vectors over the basis in position j-1."""
        src = self.basis(j, n)
        if j == 0:
            return [dict() for _ in src]
        tgt = self.basis(j - 1, n)
        idx = {(k, beta): i for i, (k, beta, _) in enumerate(tgt)}
        nx = self.sp.nx
        p = self.T.char
        out = []
        for k, beta, _ in src:
            col: dict = {}
            for (r, e), x in self.res.maps[j - 1][k].items():
                gamma = e[nx:]
                nb = tuple(b - g for b, g in zip(beta, gamma))
                if any(v < 1 for v in nb):
                    continue
                key = (idx[(r, nb)], e[:nx])
                col[key] = (col.get(key, 0) + x) % p
            out.append({t: c for t, c in col.items() if c})
        return out

    def nonzero(self, i: int, n: int) -> bool:
        j = self.sp.nz - i
        here = self.basis(j, n)
        if not here:
            return False
        degs = [(d, 0) for _, _, d in here]
        prev = [(d, 0) for _, _, d in self.basis(j - 1, n)]
        d_out = self.differential(j, n)
        d_in = self.differential(j + 1, n)
        return homology_nonzero(self.T, prev, d_in, degs, d_out)

    def n_top(self):
        bts = [d[1] for ds in self.res.degrees for d in ds]
        return max(bts) - self.sp.nz if bts else NEG_INF

    def top_degree(self, i: int, depth_limit: int = 200):
        """a_i, assuming H^i ≠ 0 is known."""
        n = self.n_top()
        for step in range(depth_limit):
            if self.nonzero(i, n - step):
                return n - step
        raise UndecidedError(f"no nonzero piece of H^{i} within {depth_limit} degrees")


@dataclass
class AInvariants:
    a: list                      # index i -> int or -inf
    grade: float = 0
    cd: float = 0
    method: str = "koszul-cech"
    tor: dict = field(default_factory=dict)

    def reg(self):
        vals = [x + i for i, x in enumerate(self.a) if x != NEG_INF]
        return max(vals) if vals else NEG_INF

    def nonvanishing(self) -> list:
        return [i for i, x in enumerate(self.a) if x != NEG_INF]

    def as_json(self) -> list:
        return [None if x == NEG_INF else int(x) for x in self.a]


def a_invariants(M: BigradedModule, res: FreeResolution | None = None) -> AInvariants:
    Mm, _ = minimize_module(M)
    sp = Split.of(Mm)
    l = sp.nz
    if Mm.rank == 0:
        return AInvariants([NEG_INF] * (l + 1), POS_INF, NEG_INF)
    lc = LocalCohomology(Mm, res)
    tors = tor_table(lc.res, sp)
    g = grade_z(lc.res, sp, tors)
    cd = cd_z(Mm, sp)
    nonzero = set()
    for i in range(l + 1):
        if i < g or i > cd:
            continue
        if i == g or i == cd:
            nonzero.add(i)
            continue
        nonzero.add(("?", i))
    a = [NEG_INF] * (l + 1)
    for item in sorted(nonzero, key=str):
        if isinstance(item, tuple):
            i = item[1]
            if _intermediate_nonzero(Mm, i, l, g, cd):
                a[i] = lc.top_degree(i)
            continue
        a[item] = lc.top_degree(item)
    return AInvariants(a, g, cd, tor=tors)


def _intermediate_nonzero(M: BigradedModule, i: int, l: int, g, cd) -> bool:
    """Decide H^i ≠ 0 for grade < i < cd (only l = 2, i = 1 arises here)."""
    if not (l == 2 and g == 0 and i == 1):
        raise UndecidedError(f"intermediate local cohomology H^{i} with l={l} is not decided")
    sp = Split.of(M)
    zs = [_var_poly(M.ring, sp.nx + j) for j in range(sp.nz)]
    sat = saturate_by_ideal(M.ring, M.gen_degrees, M.relations, zs)
    Mp = BigradedModule(M.structure, M.gen_degrees, sat, M.label + "/H0", M.ring)
    Mp, _ = minimize_module(Mp)
    if Mp.rank == 0:
        return False
    res = minimal_resolution(Mp)
    gp = grade_z(res, sp)
    return gp == 1


def _var_poly(ring: PolyRing, i: int) -> Polynomial:
    return ring.gen(ring.names[i])


# ---------------------------------------------------------------- Ext and duality

def ext_module(M: BigradedModule, j: int, res: FreeResolution | None = None) -> BigradedModule:
    """Ext^j(M, S), minimally generated (relations as computed)."""
    Mm, _ = minimize_module(M)
    ring = Mm.ring
    res = res or minimal_resolution(Mm)
    L = len(res.degrees)
    if j < 0 or j >= L or not res.degrees[j]:
        return BigradedModule(Mm.structure, [], [], f"Ext^{j}", ring)
    dual = lambda ds: [(-a, -b) for a, b in ds]
    here = dual(res.degrees[j])
    # d_{j+1}^T: F_j^* -> F_{j+1}^*
    if j + 1 < L:
        nxt = dual(res.degrees[j + 1])
        cols = [dict() for _ in here]
        for s, col in enumerate(res.maps[j]):
            for (k, e), x in col.items():
                cols[k][(s, e)] = x
        ker = kernel(ring, cols, here, nxt)
    else:
        z = ring.zero_exps()
        ker = [{(k, z): 1} for k in range(len(here))]
    # image of d_j^T: F_{j-1}^* -> F_j^*
    img = []
    if j >= 1:
        prev = res.degrees[j - 1]
        img = [dict() for _ in prev]
        for k, col in enumerate(res.maps[j - 1]):
            for (r, e), x in col.items():
                img[r][(k, e)] = x
        img = [v for v in img if v]
    if not ker:
        return BigradedModule(Mm.structure, [], [], f"Ext^{j}", ring)
    keep = minimal_subset(ring, here, ker, img)
    gens = [ker[i] for i in keep]
    if not gens:
        return BigradedModule(Mm.structure, [], [], f"Ext^{j}", ring)
    gdegs = [vector_bidegree(ring, v, here) for v in gens]
    # relations: syzygies of [gens | img] projected to the gens
    cols = list(gens) + img
    syz = kernel(ring, cols, gdegs + [vector_bidegree(ring, v, here) for v in img], here)
    rels = []
    for s in syz:
        v = {(c, e): x for (c, e), x in s.items() if c < len(gens)}
        if v:
            rels.append(v)
    return BigradedModule(Mm.structure, gdegs, rels, f"Ext^{j}", ring)


def t_indegree(E: BigradedModule):
    """Smallest t-degree of a nonzero element; +inf for zero."""
    Em, _ = minimize_module(E)
    if Em.rank == 0:
        return POS_INF
    return min(d[1] for d in Em.gen_degrees)


def is_x_torsion(M: BigradedModule) -> bool:
    sp = Split.of(M)
    if sp.nx == 0:
        return True
    xs = [_var_poly(M.ring, i) for i in range(sp.nx)]
    sat = saturate_by_ideal(M.ring, M.gen_degrees, M.relations, xs)
    z = M.ring.zero_exps()
    return contained(M.ring, M.gen_degrees, sat, [{(k, z): 1} for k in range(M.rank)])


def a_invariants_duality(M: BigradedModule, res: FreeResolution | None = None) -> AInvariants:
    """a_i = -indeg_t Ext^{d+l-i}(M, S) - l, valid when M is (x)-torsion."""
    Mm, _ = minimize_module(M)
    sp = Split.of(Mm)
    l, d = sp.nz, sp.nx
    if not is_x_torsion(Mm):
        raise ValueError("duality route needs an (x)-torsion module")
    if Mm.rank == 0:
        return AInvariants([NEG_INF] * (l + 1), POS_INF, NEG_INF, method="duality")
    res = res or minimal_resolution(Mm)
    a = []
    for i in range(l + 1):
        E = ext_module(Mm, d + l - i, res)
        ind = t_indegree(E)
        a.append(NEG_INF if ind == POS_INF else -ind - l)
    return AInvariants(a, method="duality")


# ---------------------------------------------------------------- regularity routes

def restrict_to_z(M: BigradedModule) -> BigradedModule:
    """M as a module over k[z], when x acts trivially (relations read at x = 0)."""
    sp = Split.of(M)
    ring = M.ring
    Z = _z_ring(ring, sp.nx)
    rels = []
    for r in M.relations:
        v = {(c, e[sp.nx:]): x for (c, e), x in r.items() if not any(e[:sp.nx])}
        if v:
            rels.append(v)
    return BigradedModule(M.structure, M.gen_degrees, rels, M.label + "|z", Z)


def x_acts_trivially(M: BigradedModule) -> bool:
    sp = Split.of(M)
    ring = M.ring
    vecs = []
    for k in range(M.rank):
        for i in range(sp.nx):
            e = tuple(1 if v == i else 0 for v in range(ring.nvars))
            vecs.append({(k, e): 1})
    return contained(ring, M.gen_degrees, M.relations, vecs) if vecs else True


def reg_betti(M: BigradedModule):
    """max(t-degree - step) over a minimal resolution over k[z]; x must act trivially."""
    if not x_acts_trivially(M):
        raise ValueError("Betti route needs trivial x-action")
    Z = restrict_to_z(M)
    Zm, _ = minimize_module(Z)
    if Zm.rank == 0:
        return NEG_INF
    res = minimal_resolution(Zm)
    return max(d[1] - j for j, ds in enumerate(res.degrees) for d in ds)


def regularity(M: BigradedModule, res: FreeResolution | None = None) -> dict:
    """Regularity by every applicable route: {'a': ..., 'tor': ..., 'betti': ..., 'duality': ...}."""
    Mm, _ = minimize_module(M)
    if Mm.rank == 0:
        raise ValueError("regularity of the zero module")
    res = res or minimal_resolution(Mm)
    av = a_invariants(Mm, res)
    out = {"a": av.reg(), "tor": reg_from_tor(av.tor), "a_vector": av}
    if x_acts_trivially(Mm):
        out["betti"] = reg_betti(Mm)
        out["duality"] = a_invariants_duality(Mm, res).reg()
    return out


def shift_module(M: BigradedModule, s: int) -> BigradedModule:
    """M(-s): generator t-degrees raised by s."""
    return BigradedModule(M.structure, [(a, b + s) for a, b in M.gen_degrees], M.relations,
                          M.label + f"(-{s})", M.ring)


# ---------------------------------------------------------------- Hilbert data

def t_hilbert(M: BigradedModule, n_max: int, w_max: int | None = None) -> list:
    """dim_k M_n for 0 ≤ n ≤ n_max; M_n must be finite-dimensional (x-torsion)."""
    if w_max is None:
        ws = [d[0] for d in M.gen_degrees] or [0]
        w_max = max(ws) + n_max * max(M.ring.xweights or (1,)) + 2 * max(M.ring.xweights or (1,)) + 2
    arr, off = M.hilbert_box(w_max, n_max)
    col0 = -off[1]
    return [int(arr[:, col0 + n].sum()) for n in range(n_max + 1)]


@dataclass
class FiberSeries:
    mu: list
    numerator: list
    ell: int


def rational_form(mu: Sequence[int], ell: int, min_tail: int = 2) -> FiberSeries:
    """Σ μ_n x^n = numerator/(1-x)^ell from a window of μ-values.

    The numerator must vanish on the last ``min_tail`` coefficients of the
    window, otherwise the μ-sequence has not settled.
    """
    num = numerator_of(mu, ell)
    last = max((i for i, c in enumerate(num) if c), default=-1)
    if len(num) - 1 - last < min_tail:
        raise ValueError("μ-sequence not yet polynomial of degree ell-1 inside the window")
    return FiberSeries(list(mu), num[:last + 1], ell)


def hilbert_series_fiber(F, n_max: int, ell: int | None = None) -> FiberSeries:
    """Fiber cone series from μ(I_n), 0 ≤ n ≤ n_max."""
    from .filtrations import analytic_spread
    from .groebner import min_generators
    ell = analytic_spread(F) if ell is None else ell
    mu = [1] + [min_generators(F.ideal(n)) for n in range(1, n_max + 1)]
    return rational_form(mu, ell)


# ---------------------------------------------------------------- Koszul homology and grade

def koszul_nonzero(M: BigradedModule, elems: Sequence[Polynomial]) -> list:
    """[H_j(f; M) ≠ 0 for j = 0..len(f)]."""
    Mm, _ = minimize_module(M)
    ring = Mm.ring
    p = ring.char
    n = len(elems)
    g = Mm.rank
    fdeg = [ring.bidegree(next(iter(f.terms))) for f in elems]
    subsets = [list(itertools.combinations(range(n), j)) for j in range(n + 1)]
    sidx = [{S: i for i, S in enumerate(ss)} for ss in subsets]

    def degs(j):
        out = []
        for S in subsets[j]:
            sx = sum(fdeg[s][0] for s in S)
            st = sum(fdeg[s][1] for s in S)
            for k in range(g):
                a, b = Mm.gen_degrees[k]
                out.append((a + sx, b + st))
        return out

    def rel_cols(j):
        out = []
        for si in range(len(subsets[j])):
            for r in Mm.relations:
                out.append({(si * g + c, e): x for (c, e), x in r.items()})
        return out

    def diff(j):
        """Images of the basis of K_j in K_{j-1}."""
        out = []
        for S in subsets[j]:
            for k in range(g):
                col: dict = {}
                for pos, s in enumerate(S):
                    T = tuple(x for x in S if x != s)
                    sign = 1 if pos % 2 == 0 else p - 1
                    ti = sidx[j - 1][T]
                    for e, c in elems[s].terms.items():
                        key = (ti * g + k, e)
                        col[key] = (col.get(key, 0) + sign * c) % p
                out.append({t: c for t, c in col.items() if c})
        return out

    res = []
    for j in range(n + 1):
        here = degs(j)
        # kernel of d_j modulo relations of K_{j-1}
        if j > 0:
            d = diff(j)
            rc = rel_cols(j - 1)
            cols = d + rc
            cdegs = here + [vector_bidegree(ring, v, degs(j - 1)) for v in rc]
            ker_all = kernel(ring, cols, cdegs, degs(j - 1))
            ker = []
            for v in ker_all:
                w = {(c, e): x for (c, e), x in v.items() if c < len(d)}
                if w:
                    ker.append(w)
        else:
            z = ring.zero_exps()
            ker = [{(c, z): 1} for c in range(len(here))]
        img = rel_cols(j)
        if j < n:
            img = img + diff(j + 1)
        res.append(bool(ker) and not contained(ring, here, img, ker))
    return res


def grade_on(elems: Sequence[Polynomial], M: BigradedModule):
    """grade of the ideal (elems) on M; +inf when (elems)M = M."""
    hs = koszul_nonzero(M, elems)
    if not any(hs):
        return POS_INF
    return len(elems) - max(j for j, h in enumerate(hs) if h)


# ---------------------------------------------------------------- filter-regular elements

def annihilator_vanishes_from(M: BigradedModule, v: Polynomial, n_check: int):
    """First t-degree n ≥ (max generator degree of (0 :_M v)) at which (0 :_M v)_n = 0, or None."""
    Mm, _ = minimize_module(M)
    ring = Mm.ring
    if Mm.rank == 0:
        return 0
    U = colon_element(ring, Mm.gen_degrees, Mm.relations, v)
    U = [u for u in U if u]
    gb = Mm.gb
    extra = [u for u in U if gb.reduce(u)]
    if not extra:
        return 0
    sp = Split.of(Mm)
    udeg = [vector_bidegree(ring, u, Mm.gen_degrees)[1] for u in extra]
    D = max(udeg)
    zvars = list(range(sp.nx, ring.nvars))
    p = ring.char
    for n in range(D, n_check + 1):
        ok = True
        for u, du in zip(extra, udeg):
            for gamma in _monomials_z(len(zvars), n - du):
                e = [0] * ring.nvars
                for i, gi in zip(zvars, gamma):
                    e[i] = gi
                w = vec_mul_poly(u, {tuple(e): 1}, p)
                if gb.reduce(w):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return n
    return None


def _monomials_z(nz: int, deg: int):
    if deg < 0:
        return
    for c in itertools.combinations_with_replacement(range(nz), deg):
        e = [0] * nz
        for i in c:
            e[i] += 1
        yield tuple(e)


def is_filter_regular(v: Polynomial, M: BigradedModule, n_check: int) -> bool:
    return annihilator_vanishes_from(M, v, n_check) is not None


def find_filter_regular_sequence(modules: Sequence[BigradedModule], length: int, seed: int,
                                 n_check: int, max_attempts: int = 16) -> list:
    """Random k-combinations v_1..v_length of the z-variables, each filter-regular on every
    module modulo the previously chosen elements."""
    if length == 0:
        return []
    from .filtrations import _rng
    ring = modules[0].ring
    sp = Split.of(modules[0])
    zs = [_var_poly(ring, sp.nx + j) for j in range(sp.nz)]
    chosen = []
    cur = list(modules)
    attempt = 0
    while len(chosen) < length:
        if attempt >= max_attempts:
            raise RuntimeError("filter-regular search: retries exhausted")
        rng = _rng(seed, attempt)
        attempt += 1
        cs = rng.integers(1, ring.char, size=len(zs))
        v = ring.zero()
        for c, z in zip(cs, zs):
            v = v + z.scale(int(c))
        if all(is_filter_regular(v, M, n_check) for M in cur):
            chosen.append(v)
            cur = [_mod_out(M, v) for M in cur]
    return chosen


def _mod_out(M: BigradedModule, v: Polynomial) -> BigradedModule:
    extra = [{(k, e): c for e, c in v.terms.items()} for k in range(M.rank)]
    return BigradedModule(M.structure, M.gen_degrees, list(M.relations) + extra, M.label, M.ring)


# ---------------------------------------------------------------- PID decomposition (l = 1)

@dataclass
class PIDDecomposition:
    free_shifts: list
    torsion_pairs: list

    def reg(self):
        vals = list(self.free_shifts) + [c + d - 1 for c, d in self.torsion_pairs]
        return max(vals) if vals else NEG_INF

    def r_J(self):
        vals = list(self.free_shifts) + [d for _, d in self.torsion_pairs]
        return max(vals) if vals else NEG_INF

    def series(self, n_max: int) -> list:
        """Coefficients of (Σ x^b + Σ (1 - x^c) x^d)/(1 - x) up to n_max."""
        out = [0] * (n_max + 1)
        for b in self.free_shifts:
            for n in range(max(b, 0), n_max + 1):
                out[n] += 1
        for c, d in self.torsion_pairs:
            for n in range(max(d, 0), min(c + d, n_max + 1)):
                out[n] += 1
        return out


def pid_decompose(M: BigradedModule) -> PIDDecomposition:
    """Graded Smith form over k[u] of a module with trivial x-action and one z-variable."""
    sp = Split.of(M)
    if sp.nz != 1:
        raise ValueError("PID decomposition needs exactly one structure variable")
    Z = restrict_to_z(M)
    Zm, _ = minimize_module(Z)
    p = Zm.ring.char
    rows = [d[1] for d in Zm.gen_degrees]
    cols = []
    for r in Zm.relations:
        col = {}
        for (c, e), x in r.items():
            col[c] = x
        cdeg = vector_bidegree(Zm.ring, r, Zm.gen_degrees)[1]
        cols.append((cdeg, col))
    live_rows = set(range(len(rows)))
    torsion = []
    while True:
        best = None
        for ci, (cd, col) in enumerate(cols):
            for r, x in col.items():
                if x and r in live_rows:
                    k = cd - rows[r]
                    key = (k, r, ci)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        k0, r0, c0 = best
        cd0, col0 = cols[c0]
        piv = col0[r0]
        inv = pow(piv, -1, p)
        # column operations clear row r0
        for ci, (cd, col) in enumerate(cols):
            if ci == c0 or not col.get(r0):
                continue
            f = col[r0] * inv % p
            for r, x in col0.items():
                col[r] = (col.get(r, 0) - f * x) % p
            cols[ci] = (cd, {r: x for r, x in col.items() if x})
        # row operations clear column c0 (only column c0 has entries in row r0 now)
        cols[c0] = (cd0, {r0: piv})
        live_rows.discard(r0)
        if k0 > 0:
            torsion.append((k0, rows[r0]))
        cols = [(cd, {r: x for r, x in col.items() if r != r0}) for i, (cd, col) in enumerate(cols) if i != c0]
    free = sorted(rows[r] for r in live_rows)
    return PIDDecomposition(free, sorted(torsion, key=lambda cd: (cd[1], cd[0])))
