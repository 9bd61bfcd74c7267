"""Corpus runner: invariants and theorem checks for every configured entry."""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .config import EntrySpec, JobConfig, Limits, build_filtration
from .engine import BudgetExceeded, Stats
from .filtrations import BudgetError, FiltrationError
from .homology import UndecidedError
from .theorems import BUDGET, CHECK_IDS, FAIL, VERSION, EntryAnalysis, jsonable, run_checks


@dataclass
class CorpusReport:
    entries: list = field(default_factory=list)
    seed: int = 0
    limits: dict = field(default_factory=dict)
    which: list = field(default_factory=list)

    def status_counts(self) -> dict:
        out: dict = {}
        for e in self.entries:
            for c in e["checks"]:
                out[c["status"]] = out.get(c["status"], 0) + 1
        return out

    def errors(self) -> list:
        return [e["entry"]["id"] for e in self.entries if e.get("error")]

    def exit_code(self) -> int:
        counts = self.status_counts()
        if counts.get(FAIL):
            return 1
        if self.errors():
            kinds = {e["error"]["kind"] for e in self.entries if e.get("error")}
            return 3 if kinds == {"budget"} else 2
        if counts.get(BUDGET):
            return 3
        return 0

    def as_dict(self) -> dict:
        return {"tool": "reesreg", "version": VERSION, "seed": self.seed, "limits": self.limits,
                "which": self.which, "stats": {"entries": len(self.entries), "statuses": self.status_counts()},
                "entries": self.entries}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["entry", "check", "status", "violated_hypotheses", "lhs", "rhs", "window"])
        for e in self.entries:
            eid = e["entry"]["id"]
            if e.get("error"):
                w.writerow([eid, "", "ERROR" if e["error"]["kind"] != "budget" else BUDGET,
                            e["error"]["message"], "", "", ""])
            for c in e["checks"]:
                bad = "; ".join(h for h, v in c["hypotheses"] if v is False)
                w.writerow([eid, c["id"], c["status"], bad,
                            json.dumps(c["lhs"], sort_keys=True, ensure_ascii=False),
                            json.dumps(c["rhs"], sort_keys=True, ensure_ascii=False), c["window"]])
        return buf.getvalue()


def run_entry(spec: EntrySpec, limits: Limits, which: Sequence[str], seed: int,
              n_check: int | None = None, with_checks: bool = True) -> dict:
    """One entry's invariant report and checks, as plain JSON data."""
    Stats.arm(limits.step_budget)
    record = {"entry": spec.descriptor(), "invariants": None, "checks": []}
    try:
        F = build_filtration(spec, limits)
        E = EntryAnalysis(F, seed=seed, n_check=n_check if n_check is not None else limits.n_check,
                          reduction_samples=limits.reduction_samples)
        record["filtration"] = jsonable(F.describe())
        record["invariants"] = E.invariant_report()
        if with_checks:
            record["checks"] = [c.to_json() for c in run_checks(E, which)]
    except (BudgetError, BudgetExceeded, UndecidedError) as exc:
        record["error"] = {"kind": "budget", "message": str(exc)}
        record["checks"] = [{"id": c, "status": BUDGET, "hypotheses": [], "lhs": None, "rhs": None,
                             "window": n_check, "note": str(exc)} for c in which] if with_checks else []
    except FiltrationError as exc:
        record["error"] = {"kind": "filtration", "message": str(exc)}
    finally:
        Stats.arm(None)
    return record


def _run_one(args):
    return run_entry(*args)


def run_corpus(config: JobConfig, which: Sequence[str] | None = None, seed: int | None = None,
               n_check: int | None = None, jobs: int | None = None, with_checks: bool = True) -> CorpusReport:
    which = list(which) if which is not None else list(CHECK_IDS)
    seed = seed if seed is not None else config.limits.seed
    if seed is None:
        raise ValueError("no seed given: set limits.seed or pass --seed")
    nc = n_check if n_check is not None else config.limits.n_check
    tasks = [(spec, config.limits, which, seed, nc, with_checks) for spec in config.entries]
    jobs = jobs if jobs is not None else min(len(tasks), os.cpu_count() or 1)
    if jobs <= 1 or len(tasks) <= 1:
        results = [_run_one(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    lim = config.limits.as_dict()
    lim["seed"] = seed
    lim["n_check"] = nc
    return CorpusReport(results, seed, lim, which)
