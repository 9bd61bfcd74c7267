"""Job configuration: TOML corpus files describing rings and filtrations."""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

import tomli

from .arith import _NAME, DEFAULT_PRIME, ParseError, RingDescriptor
from .filtrations import (DEFAULT_K_MAX, DEFAULT_N_MAX, FiltrationError, GoodFiltration, make_adic,
                          make_explicit, make_integral_closure_monomial, make_ratliff_rush)
from .groebner import IdealHandle

KINDS = ("adic", "ratliff_rush", "integral_closure_monomial", "explicit")


class ConfigError(ValueError):
    """Invalid configuration; the message names the entry and the position."""


@dataclass
class Limits:
    seed: int | None = None
    reduction_samples: int = 5
    n_check: int | None = None
    k_max: int = DEFAULT_K_MAX
    n_max: int = DEFAULT_N_MAX
    step_budget: int | None = None

    def as_dict(self) -> dict:
        return {"seed": self.seed, "reduction_samples": self.reduction_samples, "n_check": self.n_check,
                "k_max": self.k_max, "n_max": self.n_max, "step_budget": self.step_budget}


@dataclass
class EntrySpec:
    id: str
    ring: dict
    filtration: dict

    def descriptor(self) -> dict:
        return {"id": self.id, "ring": self.ring, "filtration": self.filtration}


@dataclass
class JobConfig:
    entries: list
    limits: Limits = field(default_factory=Limits)
    output_format: str = "json"
    output_path: str | None = None


def _want(d: dict, key: str, typ, where: str, default=...):
    if key not in d:
        if default is ...:
            raise ConfigError(f"{where}: missing key {key!r}")
        return default
    v = d[key]
    if typ is int and isinstance(v, bool):
        raise ConfigError(f"{where}.{key}: expected an integer")
    if not isinstance(v, typ):
        raise ConfigError(f"{where}.{key}: expected {getattr(typ, '__name__', typ)}, got {type(v).__name__}")
    return v


def _check_keys(d: dict, allowed: set, where: str):
    extra = sorted(set(d) - allowed)
    if extra:
        raise ConfigError(f"{where}: unknown key(s) {extra}")


def parse_limits(d: dict) -> Limits:
    _check_keys(d, {"seed", "reduction_samples", "n_check", "k_max", "n_max", "step_budget"}, "limits")
    lim = Limits(
        seed=_want(d, "seed", int, "limits", None),
        reduction_samples=_want(d, "reduction_samples", int, "limits", 5),
        n_check=_want(d, "n_check", int, "limits", None),
        k_max=_want(d, "k_max", int, "limits", DEFAULT_K_MAX),
        n_max=_want(d, "n_max", int, "limits", DEFAULT_N_MAX),
        step_budget=_want(d, "step_budget", int, "limits", None),
    )
    if lim.reduction_samples < 1:
        raise ConfigError("limits.reduction_samples: must be at least 1")
    if lim.n_check is not None and lim.n_check < 1:
        raise ConfigError("limits.n_check: must be positive")
    return lim


def parse_entry(d: dict, where: str) -> EntrySpec:
    _check_keys(d, {"id", "ring", "filtration"}, where)
    eid = _want(d, "id", str, where)
    where = f"entry {eid!r}"
    ring = _want(d, "ring", dict, where)
    filt = _want(d, "filtration", dict, where)
    _check_keys(ring, {"vars", "weights", "char", "quotient"}, where + ".ring")
    _check_keys(filt, {"kind", "generators", "table", "k_max", "n_max"}, where + ".filtration")
    kind = _want(filt, "kind", str, where + ".filtration")
    if kind not in KINDS:
        raise ConfigError(f"{where}.filtration.kind: unknown kind {kind!r} (expected one of {list(KINDS)})")
    spec = EntrySpec(eid, dict(ring), dict(filt))
    R = build_ring(spec)   # validates names, weights, quotient polynomials
    fw = where + ".filtration"
    if kind == "explicit":
        for i, row in enumerate(_want(filt, "table", list, fw)):
            _ideal(R, row, f"{fw}.table[{i}]")
    else:
        _ideal(R, _want(filt, "generators", list, fw), f"{fw}.generators")
    return spec


def parse_config(text: str, source: str = "<config>") -> JobConfig:
    try:
        data = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    _check_keys(data, {"limits", "output", "entry", "id", "ring", "filtration"}, source)
    limits = parse_limits(data.get("limits", {}))
    out = data.get("output", {})
    _check_keys(out, {"format", "path"}, "output")
    fmt = _want(out, "format", str, "output", "json")
    if fmt not in ("json", "csv"):
        raise ConfigError(f"output.format: expected 'json' or 'csv', got {fmt!r}")
    if "entry" in data:
        if any(k in data for k in ("ring", "filtration")):
            raise ConfigError(f"{source}: use either [[entry]] tables or a single [ring]/[filtration] job")
        raw = data["entry"]
        if not isinstance(raw, list):
            raise ConfigError(f"{source}: 'entry' must be an array of tables")
        entries = [parse_entry(e, f"entry #{i + 1}") for i, e in enumerate(raw)]
    elif "ring" in data or "filtration" in data:
        entries = [parse_entry({"id": data.get("id", "job"), "ring": data.get("ring"),
                                "filtration": data.get("filtration")}, "job")]
    else:
        entries = []
    ids = [e.id for e in entries]
    dup = sorted({i for i in ids if ids.count(i) > 1})
    if dup:
        raise ConfigError(f"{source}: duplicate entry id(s) {dup}")
    return JobConfig(entries, limits, fmt, out.get("path"))


def load_config(path: str) -> JobConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    return parse_config(text, path)


def bundled_corpus_text() -> str:
    return resources.files("reesreg").joinpath("data/corpus.toml").read_text(encoding="utf-8")


def bundled_corpus() -> JobConfig:
    return parse_config(bundled_corpus_text(), "bundled corpus")


# ---------------------------------------------------------------- building

def build_ring(spec: EntrySpec) -> RingDescriptor:
    where = f"entry {spec.id!r}.ring"
    r = spec.ring
    names = _want(r, "vars", list, where)
    weights = _want(r, "weights", list, where, [1] * len(names))
    char = _want(r, "char", int, where, DEFAULT_PRIME)
    quot = _want(r, "quotient", list, where, [])
    for i, n in enumerate(names):
        if not isinstance(n, str):
            raise ConfigError(f"{where}.vars[{i}]: expected a string")
    for i, w in enumerate(weights):
        if not isinstance(w, int) or isinstance(w, bool) or w <= 0:
            raise ConfigError(f"{where}.weights[{i}]: weights must be positive integers")
    for i, n in enumerate(names):
        if not _NAME.fullmatch(n):
            raise ConfigError(f"{where}.vars[{i}]: malformed variable name {n!r} "
                              f"(column {_bad_column(n) + 1})")
    try:
        base = RingDescriptor(tuple(names), tuple(weights), char=char)
        base.base
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    polys = [_parse_poly(base, q, f"{where}.quotient[{i}]") for i, q in enumerate(quot)]
    try:
        return RingDescriptor(tuple(names), tuple(weights), char=char, quotient_gens=tuple(polys))
    except ValueError as exc:
        raise ConfigError(f"{where}.quotient: {exc}") from None


def _bad_column(name: str) -> int:
    """First offending character of a variable name."""
    for i in range(len(name)):
        if not _NAME.fullmatch(name[:i + 1]):
            return i
    return len(name)


def _parse_poly(ring: RingDescriptor, text, where: str):
    if not isinstance(text, str):
        raise ConfigError(f"{where}: expected a polynomial string")
    try:
        return ring.parse(text)
    except ParseError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _ideal(ring: RingDescriptor, gens, where: str) -> IdealHandle:
    if not isinstance(gens, list) or not gens:
        raise ConfigError(f"{where}: expected a nonempty list of polynomials")
    polys = [_parse_poly(ring, g, f"{where}[{i}]") for i, g in enumerate(gens)]
    return IdealHandle(ring, polys)


def build_filtration(spec: EntrySpec, limits: Limits | None = None) -> GoodFiltration:
    """Construct and validate the filtration; FiltrationError propagates with the entry id."""
    limits = limits or Limits()
    ring = build_ring(spec)
    f = spec.filtration
    where = f"entry {spec.id!r}.filtration"
    kind = f["kind"]
    try:
        if kind == "explicit":
            table = _want(f, "table", list, where)
            ideals = [_ideal(ring, row, f"{where}.table[{i}]") for i, row in enumerate(table)]
            return make_explicit(ideals)
        I = _ideal(ring, _want(f, "generators", list, where), f"{where}.generators")
        if kind == "adic":
            return make_adic(I)
        if kind == "ratliff_rush":
            return make_ratliff_rush(I, _want(f, "k_max", int, where, limits.k_max))
        return make_integral_closure_monomial(I, _want(f, "n_max", int, where, limits.n_max))
    except FiltrationError as exc:
        raise type(exc)(f"entry {spec.id!r}: {exc}") from None
