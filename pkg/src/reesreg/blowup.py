"""Blowup algebras of a good filtration as t-graded modules over B = k[x][y].

Every module handled here is a family N = ⊕ P_n/Q_n t^n of ideals of A
(Q_n ⊆ P_n), with y_j acting as multiplication by g_j t.  The presentation
is found by the graph construction: in k[x,y,t]^(g+h+1) with basis
e_1..e_g (generators p_k t^{n_k} of ⊕P_n), f_1..f_h (generators of ⊕Q_n)
and ε (standing for A[t]), the submodule spanned by

    e_k - p_k t^{n_k} ε,   f_l - q_l t^{m_l} ε,   (y_j - g_j t) ε,   Q_A ε

meets the t-free, ε-free part exactly in the relations of N (after the
f-coordinates are dropped).  Elements of N are lifted by reducing p t^n ε.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .arith import PolyRing, Polynomial, RingDescriptor, format_poly, weighted_degree
from .engine import IncrementalGB, ModuleOrder, VecGB, vec_add, vec_mul_poly
from .filtrations import FiltrationError, GoodFiltration, check_m_condition, derive_m_filtration
from .groebner import (IdealHandle, eliminate_poly, ideal_equal, ideal_product, maximal_ideal,
                       minimalize, to_vec, unit_ideal, zero_ideal)
from .hilbert import HilbertNumerator, series_window
from .modules import BigradedModule, Structure, minimal_subset, module_order


class PresentationError(RuntimeError):
    """Internal consistency trap: a presented module disagrees with its ideals."""


# ---------------------------------------------------------------- Rees ideal

@dataclass
class ReesIdealPresentation:
    ring: PolyRing
    generators: list
    images: list

    def substitution_check(self) -> bool:
        """Every generator vanishes under y_j -> f_j t (modulo Q)."""
        return all(_substitute(self.ring, g, self.images).is_zero() for g in self.generators)


def _substitute(ring: PolyRing, g: Polynomial, images: Sequence[Polynomial], quotient=()) -> Polynomial:
    nx = ring.nvars - len(images)
    big = images[0].ring.extend(("_t",), (0,), (1,)) if images else None
    t = big.gen("_t")
    out = big.zero()
    imgs = [big.embed(f) * t for f in images]
    for e, c in g.terms.items():
        term = big.monomial(tuple(e[:nx]) + (0,) * (big.nvars - nx), c)
        for j, k in enumerate(e[nx:]):
            if k:
                term = term * imgs[j] ** k
        out = out + term
    if quotient:
        from .groebner import GroebnerBasis
        out = GroebnerBasis([big.embed(q) for q in quotient], ring=big).normal_form(out)
    return out


def rees_ideal(I1: IdealHandle) -> ReesIdealPresentation:
    from .filtrations import rees_ideal_gens
    ring, gens, fs = rees_ideal_gens(I1)
    pres = ReesIdealPresentation(ring, list(gens), list(fs))
    if not I1.ring.quotient_gens and not pres.substitution_check():
        raise PresentationError("Rees ideal generator fails the substitution check")
    return pres


# ---------------------------------------------------------------- families

@dataclass
class Family:
    """N_n = P(n)/Q(n); generators of P (resp. Q) live in t-degrees ≤ bound_p (bound_q)."""

    name: str
    P: Callable
    Q: Callable
    bound_p: int
    bound_q: int


def generation_bound(F: GoodFiltration, elements: Sequence[Polynomial], budget: int = 40) -> int:
    """Smallest N with (g) I_m = I_{m+1} for all m ≥ N, g the structure elements."""
    ring = F.ring
    g = IdealHandle(ring, list(elements))
    eq = {}

    def ok(m):
        if m not in eq:
            eq[m] = ideal_equal(ideal_product(g, F.ideal(m)), F.ideal(m + 1))
        return eq[m]

    m = F.n0
    while not ok(m):
        m += 1
        if m > F.n0 + budget:
            raise FiltrationError("the structure elements do not generate a reduction")
    N = m
    while N > 0 and ok(N - 1):
        N -= 1
    return N


def families(F: GoodFiltration, N_I: int, Fm: GoodFiltration | None = None) -> dict:
    ring = F.ring
    Z = zero_ideal(ring)
    m = maximal_ideal(ring)
    I = F.ideal
    fams = {
        "R": Family("R", I, lambda n: Z, N_I, 0),
        "G": Family("G", I, lambda n: I(n + 1), N_I, max(N_I - 1, 0)),
        "F": Family("F", I, lambda n: ideal_product(m, I(n)), N_I, N_I),
        "R+": Family("R+", lambda n: Z if n == 0 else I(n), lambda n: Z, max(N_I, 1), 0),
        "R+(1)": Family("R+(1)", lambda n: I(n + 1), lambda n: Z, max(N_I - 1, 0), 0),
        "A": Family("A", I, lambda n: Z if n == 0 else I(n), N_I, max(N_I, 1)),
    }
    if Fm is not None:
        fams["RF"] = Family("RF", Fm.ideal, lambda n: Z, N_I + 1, 0)
        fams["mG"] = Family("mG", lambda n: ideal_product(m, I(n)), lambda n: I(n + 1),
                            N_I, max(N_I - 1, 0))
        fams["mG(-1)"] = Family("mG(-1)", Fm.ideal, I, N_I + 1, N_I)
    return fams


# ---------------------------------------------------------------- presentations

def _family_generators(structure: Structure, ideal_of: Callable, bound: int) -> list:
    """[(p, n)]: minimal generators of ⊕ ideal_of(n) t^n as a module over B."""
    ring = structure.base
    base = ring.base
    order = ModuleOrder(base)
    g = list(structure.elements)
    out = []
    prev = None
    for n in range(0, bound + 1):
        cur = ideal_of(n)
        if cur.is_zero():
            prev = cur
            continue
        inc = IncrementalGB(order, base.char, ideal_mode=True)
        for q in ring.quotient_gens:
            inc.bb.push_input(to_vec(q))
        if prev is not None:
            for a in g:
                for b in prev.gens:
                    inc.bb.push_input(to_vec(a * b))
        inc.bb.run()
        cand = []
        for p in cur.gens:
            d = weighted_degree(p, "x-weight")
            cand.append((d, sorted(p.terms.items()), p))
        cand.sort(key=lambda x: (x[0], x[1]))
        for _, _, p in cand:
            if inc.add(to_vec(p)):
                out.append((p, n))
        prev = cur
    return out


class PresentedFamily:
    """A family N = ⊕ P_n/Q_n presented over B with a lifting map."""

    def __init__(self, F: GoodFiltration, structure: Structure, family: Family, label: str = ""):
        self.F = F
        self.structure = structure
        self.family = family
        self.label = label or family.name
        self.pgens = _family_generators(structure, family.P, family.bound_p)
        self.qgens = _family_generators(structure, family.Q, family.bound_q)
        self._build()

    def _build(self):
        st = self.structure
        B = st.ring
        base = st.base
        self.tring = B.extend(("_t",), (0,), (1,))
        T = self.tring
        self.ti = T.index("_t")
        t = T.gen("_t")
        g, h = len(self.pgens), len(self.qgens)
        self.g, self.h = g, h
        eps = g + h
        degs = [(weighted_degree(p, "x-weight"), n) for p, n in self.pgens]
        self.degs = degs
        qdegs = [(weighted_degree(q, "x-weight"), n) for q, n in self.qgens]
        shifts = [a + b for a, b in degs + qdegs] + [0]
        rank = [0] * (g + h) + [1]
        self.order = ModuleOrder(T, shifts, rank, tvar=self.ti)
        p = T.char
        z = T.zero_exps()
        gens = []
        for k, (pk, n) in enumerate(self.pgens + self.qgens):
            v = {(k, z): 1}
            term = T.embed(pk) * t ** n
            for e, c in term.terms.items():
                v[(eps, e)] = (-c) % p
            gens.append(v)
        for j in range(st.ny):
            f = T.gen(st.y_names[j]) - T.embed(st.elements[j]) * t
            gens.append({(eps, e): c for e, c in f.terms.items()})
        for q in base.quotient_gens:
            gens.append({(eps, e): c for e, c in T.embed(q).terms.items()})
        self.gb = VecGB(gens, self.order, p)
        rels = []
        for v in self.gb.basis:
            if any(c0 == eps or e[self.ti] for (c0, e) in v):
                continue
            w = {(c0, e[:self.ti] + e[self.ti + 1:]): x for (c0, e), x in v.items() if c0 < g}
            if w:
                rels.append(w)
        keep = minimal_subset(B, degs, rels) if rels else []
        self.module = BigradedModule(st, degs, [rels[i] for i in keep], self.label, B)

    def lift(self, p: Polynomial, n: int) -> dict:
        """The class of p t^n (p ∈ P_n) as a vector over the module's generators."""
        T = self.tring
        if p.ring != T:
            p = T.embed(p)
        v = {(self.g + self.h, e): c for e, c in (p * T.gen("_t") ** n).terms.items()}
        r = self.gb.reduce(v)
        out = {}
        for (c0, e), x in r.items():
            if c0 == self.g + self.h or e[self.ti]:
                raise PresentationError(f"{p} t^{n} does not lie in the family {self.label}")
            if c0 < self.g:
                out[(c0, e[:self.ti] + e[self.ti + 1:])] = x
        return out

    # -------------------------------------------------------- checks

    def ideal_hilbert(self, w_max: int, n_max: int) -> np.ndarray:
        """dim_k (P_n/Q_n)_w for 0 ≤ w ≤ w_max, 0 ≤ n ≤ n_max, from the ideals."""
        out = np.zeros((w_max + 1, n_max + 1), dtype=np.int64)
        for n in range(n_max + 1):
            out[:, n] = quotient_dims(self.family.Q(n), w_max) - quotient_dims(self.family.P(n), w_max)
        return out

    def check_hilbert(self, n_max: int, w_max: int | None = None) -> bool:
        w_max = w_max if w_max is not None else default_w_max(self)
        arr, off = self.module.hilbert_box(w_max, n_max)
        mine = arr[-off[0]:, -off[1]:] if (off[0] or off[1]) else arr
        ref = self.ideal_hilbert(w_max, n_max)
        if not np.array_equal(mine, ref):
            raise PresentationError(f"Hilbert mismatch for {self.label}")
        return True


def default_w_max(P: "PresentedFamily") -> int:
    ws = [d[0] for d in P.degs] or [0]
    xw = max(P.F.ring.x_weights)
    return max(ws) + 2 * xw + 2


_QDIM: dict = {}


def quotient_dims(I: IdealHandle, w_max: int) -> np.ndarray:
    """dim_k (A/I)_w for 0 ≤ w ≤ w_max."""
    ring = I.ring
    weights = [(w,) for w in ring.x_weights]
    lms = I.gb.leading_monomials()
    hn = HilbertNumerator(weights)
    num = hn.numerator(lms)
    return series_window([((0,), num)], weights, [w_max])


def default_structure(F: GoodFiltration) -> Structure:
    """Structure map from the minimal generators of the filtration's driver ideal."""
    return Structure(F.ring, tuple(minimalize(F.ring, F.base_ideal.gens)))


def reduction_structure(F: GoodFiltration, J_gens: Sequence[Polynomial]) -> Structure:
    return Structure(F.ring, tuple(J_gens))


class Blowups:
    """All family presentations of one filtration over one structure."""

    def __init__(self, F: GoodFiltration, structure: Structure | None = None, need_m: bool = True):
        self.F = F
        self.structure = structure or default_structure(F)
        self.N_I = generation_bound(F, self.structure.elements)
        self.Fm = None
        self.m_error = None
        if need_m:
            try:
                self.Fm = derive_m_filtration(F)
            except FiltrationError as exc:
                self.m_error = str(exc)
        self.fams = families(F, self.N_I, self.Fm)
        self._cache: dict = {}

    def get(self, name: str) -> PresentedFamily:
        if name not in self._cache:
            if name not in self.fams:
                raise FiltrationError(self.m_error or f"unknown family {name}")
            self._cache[name] = PresentedFamily(self.F, self.structure, self.fams[name], name)
        return self._cache[name]

    def module(self, name: str) -> BigradedModule:
        return self.get(name).module


def present_rees(F: GoodFiltration, structure: Structure | None = None) -> BigradedModule:
    return Blowups(F, structure, need_m=False).module("R")


def present_assoc_graded(F: GoodFiltration, structure: Structure | None = None) -> BigradedModule:
    return Blowups(F, structure, need_m=False).module("G")


def present_fiber(F: GoodFiltration, structure: Structure | None = None) -> BigradedModule:
    return Blowups(F, structure, need_m=False).module("F")


def present_mG(F: GoodFiltration, structure: Structure | None = None) -> BigradedModule:
    bl = Blowups(F, structure)
    return bl.module("mG")


def present_rees_m(F: GoodFiltration, structure: Structure | None = None) -> BigradedModule:
    return Blowups(F, structure).module("RF")


# ---------------------------------------------------------------- maps and sequences

def map_matrix(src: PresentedFamily, dst: PresentedFamily) -> list:
    """Images of the generators of src in dst under the identity on (p, n)."""
    return [dst.lift(p, n) for p, n in src.pgens]


def apply_map(images: Sequence[dict], v: dict, p: int) -> dict:
    out: dict = {}
    for (c, e), x in v.items():
        out = vec_add(out, vec_mul_poly(images[c], {e: x}, p), p)
    return out


@dataclass
class ExactTriple:
    name: str
    left: PresentedFamily
    middle: PresentedFamily
    right: PresentedFamily
    inject: list
    surject: list
    twist: int = 0
    composition_zero: bool = False
    additive: bool = False
    window: tuple = ()
    failures: list = field(default_factory=list)

    def describe(self) -> dict:
        return {"sequence": self.name, "twist": self.twist, "composition_zero": self.composition_zero,
                "additive": self.additive, "window": list(self.window)}


SEQUENCES = {
    "rplus_r_a": ("R+", "R", "A", 0),
    "rplus1_r_g": ("R+(1)", "R", "G", 1),
    "r_rm_mg": ("R", "RF", "mG(-1)", -1),
    "mg_g_f": ("mG", "G", "F", 0),
}


def build_exact_sequences(bl: Blowups, n_check: int, w_max: int | None = None) -> list:
    out = []
    p = bl.F.ring.char
    for name, (l, mname, r, tw) in SEQUENCES.items():
        if l not in bl.fams or r not in bl.fams or mname not in bl.fams:
            continue
        L, M, Rr = bl.get(l), bl.get(mname), bl.get(r)
        inj = map_matrix(L, M)
        sur = map_matrix(M, Rr)
        comp = all(not Rr.module.reduce(apply_map(sur, v, p)) for v in inj)
        wm = w_max if w_max is not None else max(default_w_max(L), default_w_max(M), default_w_max(Rr))
        hs = []
        for P in (L, M, Rr):
            arr, off = P.module.hilbert_box(wm, n_check)
            if off[0] or off[1]:
                arr = arr[-off[0]:, -off[1]:]
            hs.append(arr)
        add = bool(np.array_equal(hs[1], hs[0] + hs[2]))
        tri = ExactTriple(name, L, M, Rr, inj, sur, tw, comp, add, (wm, n_check))
        if not add:
            bad = np.argwhere(hs[1] != hs[0] + hs[2])
            tri.failures = [tuple(int(x) for x in b) for b in bad[:5]]
        out.append(tri)
    return out


# ---------------------------------------------------------------- forms

def initial_form(a: Polynomial, bl: Blowups) -> dict:
    """Class of a in G_1 = I_1/I_2 as a vector over the generators of G."""
    F = bl.F
    if not F.ideal(1).contains(a):
        raise FiltrationError(f"{a} is not in I_1")
    P = bl.get("G")
    return P.module.reduce(P.lift(a, 1))


def fiber_form(a: Polynomial, bl: Blowups) -> dict:
    """Class of a in F_1 = I_1/m I_1."""
    F = bl.F
    if not F.ideal(1).contains(a):
        raise FiltrationError(f"{a} is not in I_1")
    P = bl.get("F")
    return P.module.reduce(P.lift(a, 1))


# ---------------------------------------------------------------- dump

def vector_text(ring: PolyRing, v: dict, rank: int) -> list:
    comps = [dict() for _ in range(rank)]
    for (c, e), x in v.items():
        comps[c][e] = x
    return [format_poly(Polynomial(ring, d, True)) for d in comps]


def dump_module(M: BigradedModule) -> dict:
    return {"label": M.label, "ring": list(M.ring.names),
            "generator_degrees": [list(d) for d in M.gen_degrees],
            "relations": [vector_text(M.ring, r, M.rank) for r in M.relations]}


def dump_json(M: BigradedModule) -> str:
    return json.dumps(dump_module(M), sort_keys=True)
