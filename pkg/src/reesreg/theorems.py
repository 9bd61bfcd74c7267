"""Executable checks of the regularity statements, run over a filtration corpus.

Every check reads a-invariant vectors and regularities of the blowup
modules R, G, F, R(𝓕) and 𝔪G, all presented over k[x][z_1..z_l] where
z_j stands for a_j t and (a_1..a_l) is a certified minimal reduction.
Since (a)t R is a reduction of R_+, local cohomology along (z) is the
local cohomology along R_+.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .arith import NEG_INF
from .blowup import Blowups, build_exact_sequences, quotient_dims, reduction_structure
from .engine import BudgetExceeded
from .filtrations import (BudgetError, GoodFiltration, analytic_spread, minimal_reduction,
                          sampled_reduction_number)
from .groebner import (IdealHandle, ideal_equal, ideal_product, ideal_sum, in_radical,
                       krull_dim, maximal_ideal, zero_ideal)
from .homology import (POS_INF, AInvariants, Split, UndecidedError, a_invariants,
                       a_invariants_duality, depth_dim, grade_on, hilbert_series_fiber,
                       minimal_resolution, pid_decompose, reg_betti, t_hilbert)
from .modules import BigradedModule, Structure, colon_element, minimize_module as _minimize

VERSION = "0.1.0"

CHECK_IDS = ("L3.1", "T3.2.i", "T3.2.ii", "T3.2.iii", "T3.2.iv", "C3.3", "C3.4", "L4.1", "L4.2",
             "T4.3", "C4.4", "L4.5", "T4.6", "P4.7", "P4.8", "P4.9")

PASS, FAIL, NA, BUDGET = "PASS", "FAIL", "NOT_APPLICABLE", "BUDGET"


def jsonable(x):
    """−∞ → None, +∞ → "+inf", tuples → lists, numpy ints → int."""
    if isinstance(x, float):
        if x == NEG_INF:
            return None
        if x == POS_INF:
            return "+inf"
        if x.is_integer():
            return int(x)
        return x
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


@dataclass
class TheoremCheck:
    id: str
    status: str
    hypotheses: list = field(default_factory=list)   # [(name, value)]
    lhs: object = None
    rhs: object = None
    window: int = 0
    note: str = ""

    def violated(self) -> list:
        return [h for h, v in self.hypotheses if v is False]

    def to_json(self) -> dict:
        out = {"id": self.id, "status": self.status,
               "hypotheses": [[h, jsonable(v)] for h, v in self.hypotheses],
               "lhs": jsonable(self.lhs), "rhs": jsonable(self.rhs), "window": self.window}
        if self.note:
            out["note"] = self.note
        return out


def _sub1(a):
    return a - 1 if a != NEG_INF else NEG_INF


# ---------------------------------------------------------------- per-entry analysis

class EntryAnalysis:
    """All quantities the checks read, computed on demand and cached."""

    def __init__(self, F: GoodFiltration, seed: int = 0, n_check: int | None = None,
                 reduction_samples: int = 5):
        self.F = F
        self.seed = seed
        self.reduction_samples = reduction_samples
        self._n_check = n_check
        self._mods: dict = {}
        self._res: dict = {}
        self._av: dict = {}

    # filtration data
    @cached_property
    def ell(self) -> int:
        return analytic_spread(self.F)

    @cached_property
    def cert(self):
        return minimal_reduction(self.F, self.seed, ell=self.ell)

    @cached_property
    def sampled_r(self) -> tuple:
        seeds = [self.seed + i for i in range(self.reduction_samples)]
        return sampled_reduction_number(self.F, seeds)

    @cached_property
    def n_check(self) -> int:
        if self._n_check is not None:
            return self._n_check
        return 2 * (self.F.n0 + self.cert.r_J) + 4

    @cached_property
    def bl(self) -> Blowups:
        return Blowups(self.F, reduction_structure(self.F, self.cert.generators))

    @property
    def has_m(self) -> bool:
        return self.bl.Fm is not None

    # base ring A as a module over k[x]
    @cached_property
    def A_module(self) -> BigradedModule:
        ring = self.F.ring
        S0 = Structure(ring, ())
        rels = [{(0, e): c for e, c in q.terms.items()} for q in ring.quotient_gens]
        return BigradedModule(S0, [(0, 0)], rels, "A")

    @cached_property
    def grade_I1(self):
        ring = self.A_module.ring
        return grade_on([ring.embed(g) if g.ring != ring else g for g in self.F.I1.gens], self.A_module)

    @cached_property
    def I1_nilpotent(self) -> bool:
        Z = zero_ideal(self.F.ring)
        return all(in_radical(g, Z) for g in self.F.I1.gens)

    @cached_property
    def A_depth_dim(self) -> tuple:
        return depth_dim(self.A_module)

    @cached_property
    def height_I1(self):
        dA = krull_dim(zero_ideal(self.F.ring))
        return dA - krull_dim(self.F.I1)

    # modules
    def module(self, name: str) -> BigradedModule:
        if name not in self._mods:
            self._mods[name] = _minimize(self.bl.module(name))[0]
        return self._mods[name]

    def resolution(self, name: str):
        if name not in self._res:
            self._res[name] = minimal_resolution(self.module(name))
        return self._res[name]

    def av(self, name: str) -> AInvariants:
        if name not in self._av:
            M = self.module(name)
            self._av[name] = a_invariants(M, self.resolution(name) if M.rank else None)
        return self._av[name]

    def a(self, name: str, i: int):
        a = self.av(name).a
        return a[i] if 0 <= i < len(a) else NEG_INF

    def reg(self, name: str):
        return self.av(name).reg()

    def depth_dim(self, name: str) -> tuple:
        M = self.module(name)
        if M.rank == 0:
            return POS_INF, NEG_INF
        return depth_dim(M, self.resolution(name))

    @cached_property
    def fiber_series(self):
        return hilbert_series_fiber(self.F, max(self.n_check, 2 * self.F.n0 + 6), self.ell)

    @cached_property
    def exact_sequences(self) -> list:
        return build_exact_sequences(self.bl, self.n_check)

    @cached_property
    def fiber_routes(self) -> dict:
        """reg F by the a-vector, Tor, Betti and duality routes (F has trivial x-action)."""
        M = self.module("F")
        res = self.resolution("F")
        av = self.av("F")
        out = {"a_vector": av.reg(), "betti": reg_betti(M), "duality": a_invariants_duality(M, res).reg()}
        return out

    def module_report(self, name: str) -> dict:
        M = self.module(name)
        if M.rank == 0:
            return {"zero": True, "a": [None] * (self.ell + 1)}
        av = self.av(name)
        d, k = self.depth_dim(name)
        res = self.resolution(name)
        return {"zero": False, "a": av.as_json(), "reg": jsonable(av.reg()), "depth": jsonable(d),
                "dim": jsonable(k), "grade_z": jsonable(av.grade), "pd": res.length,
                "betti": res.betti_table(), "generators": len(M.gen_degrees),
                "relations": len(M.relations)}

    def invariant_report(self) -> dict:
        fs = self.fiber_series
        r_min, r_vals = self.sampled_r
        mods = {name: self.module_report(name) for name in ("R", "G", "F")}
        if self.has_m:
            for name in ("RF", "mG"):
                mods[name] = self.module_report(name)
        return {
            "n0": self.F.n0,
            "analytic_spread": self.ell,
            "reduction": self.cert.describe(),
            "sampled_r": {"value": r_min, "samples": r_vals,
                          "seeds": [self.seed + i for i in range(self.reduction_samples)]},
            "grade_I1": jsonable(self.grade_I1),
            "hilbert_numerator_fiber": fs.numerator,
            "mu": fs.mu,
            "reg": jsonable(self.reg("G")),
            "reg_R": jsonable(self.reg("R")),
            "reg_G": jsonable(self.reg("G")),
            "reg_F": jsonable(self.reg("F")),
            "a_invariants": mods["G"]["a"],
            "depth": mods["G"]["depth"],
            "dim": mods["G"]["dim"],
            "modules": mods,
            "m_filtration": self.bl.m_error or "ok",
            "n_check": self.n_check,
            "exact_sequences": [s.describe() for s in self.exact_sequences],
        }


# ---------------------------------------------------------------- checks

def _check(cid, hyps, ok, lhs, rhs, window, note="") -> TheoremCheck:
    if not all(v for _, v in hyps):
        return TheoremCheck(cid, NA, hyps, lhs, rhs, window, note)
    return TheoremCheck(cid, PASS if ok else FAIL, hyps, lhs, rhs, window, note)


def check_L3_1(E: EntryAnalysis) -> TheoremCheck:
    aR, aG = E.av("R").a, E.av("G").a
    bad = []
    for i in range(len(aR)):
        if i <= 1:
            bound = max(0, aG[i] + 1)
            if not aR[i] < bound:
                bad.append(i)
        elif not aR[i] <= aG[i]:
            bad.append(i)
    return _check("L3.1", [("a-vectors computed", True)], not bad, {"a(R)": aR}, {"a(G)": aG}, E.n_check,
                  f"violated at i={bad}" if bad else "")


def check_T3_2(E: EntryAnalysis) -> list:
    aR, aG = E.av("R").a, E.av("G").a
    l = len(aR) - 1
    aG_next = lambda i: aG[i + 1] if i + 1 <= l else NEG_INF
    w = E.n_check
    out = []
    idx = [i for i in range(l + 1) if i != 1]
    bad = [i for i in idx if not aR[i] <= aG[i]]
    out.append(_check("T3.2.i", [("indices i != 1", bool(idx))], not bad, {"a(R)": aR}, {"a(G)": aG}, w,
                      f"violated at i={bad}" if bad else ""))
    eq_idx = [i for i in idx if aG[i] >= aG_next(i)]
    bad = [i for i in eq_idx if aR[i] != aG[i]]
    out.append(_check("T3.2.ii", [("some i != 1 with a_i(G) >= a_{i+1}(G)", bool(eq_idx))], not bad,
                      {"a(R)": aR, "indices": eq_idx}, {"a(G)": aG}, w,
                      f"violated at i={bad}" if bad else ""))
    h1 = l >= 1 and aG[1] != NEG_INF
    nil = E.I1_nilpotent
    if l >= 1:
        ok = aR[1] <= aG[1] and (aR[1] == aG[1] if aG[1] >= aG_next(1) else True)
        out.append(_check("T3.2.iii", [("H^1(G) != 0 or I_1 in sqrt(0)", h1 or nil)], ok,
                          {"a_1(R)": aR[1]}, {"a_1(G)": aG[1], "a_2(G)": aG_next(1)}, w))
        out.append(_check("T3.2.iv", [("H^1(G) = 0", not h1), ("I_1 not in sqrt(0)", not nil)],
                          aR[1] == -1, {"a_1(R)": aR[1]}, -1, w))
    else:
        out.append(TheoremCheck("T3.2.iii", NA, [("analytic spread >= 1", False)], None, None, w))
        out.append(TheoremCheck("T3.2.iv", NA, [("analytic spread >= 1", False)], None, None, w))
    return out


def check_C3_3(E: EntryAnalysis) -> TheoremCheck:
    aR, aG = E.av("R").a, E.av("G").a
    nzG = [i for i, x in enumerate(aG) if x != NEG_INF]
    if not nzG:
        return TheoremCheck("C3.3", NA, [("G != 0", False)], None, None, E.n_check)
    top = max(nzG)
    ok = aR[top] == aG[top]
    nzR = [i for i, x in enumerate(aR) if x != NEG_INF]
    gate = E.I1_nilpotent or top >= 1
    topR = max(nzR) if nzR else NEG_INF
    if gate:
        ok = ok and topR == top
    return _check("C3.3", [("G != 0", True)], ok,
                  {"top index G": top, "a_top(R)": aR[top], "top index R": topR},
                  {"a_top(G)": aG[top], "top-index agreement checked": gate}, E.n_check)


def check_C3_4(E: EntryAnalysis) -> TheoremCheck:
    rR, rG = E.reg("R"), E.reg("G")
    return _check("C3.4", [("R, G nonzero", True)], rR == rG, {"reg R": rR}, {"reg G": rG}, E.n_check)


def _m_gate(E: EntryAnalysis) -> tuple:
    return ("I_{n+1} in m I_n for all n", E.has_m)


def check_L4_1(E: EntryAnalysis) -> TheoremCheck:
    h = [_m_gate(E)]
    if not E.has_m:
        return TheoremCheck("L4.1", NA, h, None, None, E.n_check, E.bl.m_error or "")
    l = E.ell
    lhs = _sub1(E.a("RF", l))
    rhs = E.a("R", l)
    return _check("L4.1", h, lhs <= rhs, {"a_l(R(mF)) - 1": lhs}, {"a_l(R)": rhs}, E.n_check)


def check_L4_2(E: EntryAnalysis) -> TheoremCheck:
    h = [("analytic spread = 1", E.ell == 1), ("grade I_1 = 1", E.grade_I1 == 1)]
    if not all(v for _, v in h):
        return TheoremCheck("L4.2", NA, h, None, None, E.n_check)
    routes = dict(E.fiber_routes)
    pid = pid_decompose(E.module("F"))
    series_ok = pid.series(E.n_check) == _t_series(E.module("F"), E.n_check)
    routes["pid"] = pid.reg()
    r_J = E.cert.r_J
    ok = len(set(routes.values())) == 1 and routes["a_vector"] == r_J and pid.r_J() == r_J and series_ok
    return _check("L4.2", h, ok, {"reg F": routes, "pid free shifts": pid.free_shifts,
                                  "pid torsion": [list(t) for t in pid.torsion_pairs],
                                  "pid series matches": series_ok},
                  {"r_J": r_J, "pid r_J": pid.r_J()}, E.n_check)


def _t_series(M: BigradedModule, n_max: int) -> list:
    return t_hilbert(M, n_max)


def check_T4_3(E: EntryAnalysis) -> TheoremCheck:
    h = [("analytic spread = 1", E.ell == 1)]
    if E.ell != 1:
        return TheoremCheck("T4.3", NA, h, None, None, E.n_check)
    rF, rG = E.reg("F"), E.reg("G")
    ok = rF <= rG
    eq_gate = E.grade_I1 == 1
    r = E.sampled_r[0]
    if eq_gate:
        ok = ok and rF == rG == r
    return TheoremCheck("T4.3", PASS if ok else FAIL, h, {"reg F": rF},
                        {"reg G": rG, "sampled r": r, "equality branch": eq_gate}, E.n_check,
                        "= sampled r" if eq_gate else "")


def check_C4_4(E: EntryAnalysis) -> TheoremCheck:
    dep, dim = E.A_depth_dim
    h = [("analytic spread = 1", E.ell == 1), ("A Cohen-Macaulay", dep == dim),
         ("equimultiple: s(I_1) = ht I_1", E.ell == E.height_I1)]
    if not all(v for _, v in h):
        return TheoremCheck("C4.4", NA, h, {"ht I_1": E.height_I1}, None, E.n_check)
    rF, rG, r = E.reg("F"), E.reg("G"), E.sampled_r[0]
    return _check("C4.4", h, rF == rG == r, {"reg F": rF}, {"reg G": rG, "sampled r": r}, E.n_check,
                  "= sampled r")


def _var_vec(M: BigradedModule, var: int) -> list:
    ring = M.ring
    e = tuple(1 if v == var else 0 for v in range(ring.nvars))
    return [{(k, e): 1} for k in range(M.rank)]


def check_L4_5(E: EntryAnalysis) -> TheoremCheck:
    """a = first reduction generator; a* = z_1 acting on G, a° = z_1 acting on F."""
    a = E.cert.generators[0]
    G = E.module("G")
    sp = Split.of(G)
    z1 = G.ring.gen(G.ring.names[sp.nx])
    U = colon_element(G.ring, G.gen_degrees, G.relations, z1)
    regular = all(not G.reduce(u) for u in U)
    h = [("a* regular on G", regular)]
    if not regular:
        return TheoremCheck("L4.5", NA, h, {"a": str(a)}, None, E.n_check)
    Fm = E.module("F")
    FmodA = BigradedModule(Fm.structure, Fm.gen_degrees,
                           list(Fm.relations) + _var_vec(Fm, sp.nx), "F/aF", Fm.ring)
    n = E.n_check
    ring = E.F.ring
    ws = [d[0] for d in Fm.gen_degrees] or [0]
    w_max = max(ws) + n * max(Fm.ring.xweights) + 2 * max(ring.x_weights) + 2
    arr, off = FmodA.hilbert_box(w_max, n)
    if off[0] or off[1]:
        arr = arr[-off[0]:, -off[1]:]
    aI = IdealHandle(ring, [a])
    m = maximal_ideal(ring)
    ref = np.zeros_like(arr)
    for k in range(n + 1):
        if k == 0:
            top = quotient_dims(ideal_sum(m, aI), w_max)
            ref[:, 0] = top[:w_max + 1]
            continue
        Ik = E.F.ideal(k)
        low = quotient_dims(ideal_sum(ideal_product(m, Ik), aI), w_max)
        high = quotient_dims(ideal_sum(Ik, aI), w_max)
        ref[:, k] = (low - high)[:w_max + 1]
    ok = bool(np.array_equal(arr, ref))
    return _check("L4.5", h, ok, {"a": str(a), "F/a°F t-series": arr.sum(axis=0).tolist()},
                  {"F(filtration mod a) t-series": ref.sum(axis=0).tolist()}, n,
                  "" if ok else f"first mismatch {np.argwhere(arr != ref)[0].tolist()}")


def check_T4_6(E: EntryAnalysis) -> TheoremCheck:
    l = E.ell
    gG = E.av("G").grade
    h = [("grade I_1 = l", E.grade_I1 == l), ("grade G_+ >= l-1", gG >= l - 1)]
    if not all(v for _, v in h):
        return TheoremCheck("T4.6", NA, h, {"grade I_1": E.grade_I1, "grade G_+": gG}, {"l": l}, E.n_check)
    rF, rG = E.reg("F"), E.reg("G")
    depF = E.depth_dim("F")[0]
    eq = depF >= l - 1
    ok = rF >= rG and (rF == rG if eq else True)
    return TheoremCheck("T4.6", PASS if ok else FAIL, h, {"reg F": rF},
                        {"reg G": rG, "depth F": depF, "equality branch": eq}, E.n_check)


def check_P4_7(E: EntryAnalysis) -> TheoremCheck:
    h = [_m_gate(E)]
    if not E.has_m:
        return TheoremCheck("P4.7", NA, h, None, None, E.n_check, E.bl.m_error or "")
    rRF, rR = E.reg("RF"), E.reg("R")
    h.append(("reg R(mF) <= reg R", rRF <= rR))
    rF, rG = E.reg("F"), E.reg("G")
    return _check("P4.7", h, rF == rG, {"reg F": rF, "reg R(mF)": rRF}, {"reg G": rG, "reg R": rR}, E.n_check)


def m_power_index(E: EntryAnalysis):
    """Smallest m in n0+1..N_check with I_m = m·I_{m-1} (then it holds for all larger m), or None."""
    F = E.F
    mm = maximal_ideal(F.ring)
    for m in range(F.n0 + 1, max(E.n_check, F.n0 + 3) + 1):
        if ideal_equal(F.ideal(m), ideal_product(mm, F.ideal(m - 1))):
            return m
    return None


def check_P4_8(E: EntryAnalysis) -> TheoremCheck:
    m = m_power_index(E)
    h = [("grade I_1 > 0", E.grade_I1 > 0), ("I_n = m I_{n-1} for large n", m is not None)]
    rF, rG = E.reg("F"), E.reg("G")
    return _check("P4.8", h, rF == rG, {"reg F": rF, "from n": m}, {"reg G": rG}, E.n_check)


def check_P4_9(E: EntryAnalysis) -> TheoremCheck:
    l = E.ell
    h = [_m_gate(E)]
    if not E.has_m:
        return TheoremCheck("P4.9", NA, h, None, None, E.n_check, E.bl.m_error or "")
    mG = E.module("mG")
    h.append(("mG != 0", mG.rank > 0))
    if mG.rank == 0:
        return TheoremCheck("P4.9", NA, h, None, None, E.n_check)
    dep, dim = E.depth_dim("mG")
    h.append(("mG Cohen-Macaulay of dimension l", dep == dim == l))
    if not all(v for _, v in h):
        return TheoremCheck("P4.9", NA, h, {"depth mG": dep, "dim mG": dim}, {"l": l}, E.n_check)
    rF, rG, rR, rmG = E.reg("F"), E.reg("G"), E.reg("R"), E.reg("mG")
    aRF1 = _sub1(E.a("RF", l))
    aR = E.a("R", l)
    parts = {"(i) reg F <= reg G": rF <= rG}
    if aRF1 < aR:
        parts["(ii) reg F = reg R"] = rF == rR
    elif aRF1 == aR:
        parts["(iii) reg mG <= reg R and reg F <= reg R"] = rmG <= rR and rF <= rR
    if rmG < rG:
        parts["reg mG < reg G => reg F = reg R"] = rF == rR
    return _check("P4.9", h, all(parts.values()),
                  {"reg F": rF, "reg mG": rmG, "a_l(R(mF)) - 1": aRF1, "branches": parts},
                  {"reg G": rG, "reg R": rR, "a_l(R)": aR}, E.n_check)


CHECKS: dict = {
    "L3.1": check_L3_1, "T3.2": check_T3_2, "C3.3": check_C3_3, "C3.4": check_C3_4,
    "L4.1": check_L4_1, "L4.2": check_L4_2, "T4.3": check_T4_3, "C4.4": check_C4_4,
    "L4.5": check_L4_5, "T4.6": check_T4_6, "P4.7": check_P4_7, "P4.8": check_P4_8,
    "P4.9": check_P4_9,
}

_ERRORS = (BudgetError, BudgetExceeded, UndecidedError)


def run_checks(E: EntryAnalysis, which: Sequence[str] | None = None) -> list:
    wanted = set(which or CHECK_IDS)
    out = []
    for key, fn in CHECKS.items():
        ids = [c for c in CHECK_IDS if c == key or c.startswith(key + ".")]
        if not wanted.intersection(ids):
            continue
        try:
            res = fn(E)
        except _ERRORS as exc:
            res = [TheoremCheck(c, BUDGET, [], None, None, E.n_check, str(exc)) for c in ids]
        res = res if isinstance(res, list) else [res]
        out.extend(r for r in res if r.id in wanted)
    return out


def parse_which(text: str) -> list:
    if text.strip() == "all":
        return list(CHECK_IDS)
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok in CHECK_IDS:
            out.append(tok)
        elif tok in CHECKS:
            out.extend(c for c in CHECK_IDS if c.startswith(tok + "."))
        else:
            raise KeyError(f"unknown theorem id {tok!r}")
    return out
