"""Command line front end.

    reesreg invariants --config job.toml
    reesreg verify --corpus bundled --which all

Exit codes: 0 success, 1 a check failed, 2 configuration error, 3 budget exhausted.
"""
from __future__ import annotations

import argparse
import sys

from .config import ConfigError, bundled_corpus, load_config
from .corpus import run_corpus
from .theorems import parse_which

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reesreg", description="Regularity of blowup algebras of good filtrations.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, text in (("invariants", "invariant reports for the configured filtrations"),
                       ("verify", "theorem checks over a corpus")):
        s = sub.add_parser(name, help=text)
        src = s.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", metavar="PATH", help="TOML job or corpus file")
        src.add_argument("--corpus", choices=["bundled"], help="use the bundled corpus")
        s.add_argument("--format", choices=["json", "csv"], default=None)
        s.add_argument("--seed", type=int, default=None)
        s.add_argument("--n-check", type=int, default=None, dest="n_check")
        s.add_argument("--jobs", type=int, default=None, help="worker processes (default: one per entry)")
        s.add_argument("--output", metavar="PATH", default=None, help="write the report here instead of stdout")
        if name == "verify":
            s.add_argument("--which", default="all", help="comma-separated check ids, or 'all'")
    return p


def _fail(msg: str, code: int) -> int:
    print(f"reesreg: {msg}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = bundled_corpus() if args.corpus else load_config(args.config)
    except ConfigError as exc:
        return _fail(f"config error: {exc}", EXIT_CONFIG)
    which = []
    if args.command == "verify":
        try:
            which = parse_which(args.which)
        except KeyError as exc:
            return _fail(str(exc.args[0]), EXIT_CONFIG)
    if args.n_check is not None and args.n_check < 1:
        return _fail("--n-check must be positive", EXIT_CONFIG)
    seed = args.seed if args.seed is not None else cfg.limits.seed
    if seed is None:
        return _fail("config error: no seed (set limits.seed or pass --seed)", EXIT_CONFIG)
    report = run_corpus(cfg, which if args.command == "verify" else [], seed, args.n_check, args.jobs,
                        with_checks=args.command == "verify")
    fmt = args.format or cfg.output_format
    text = report.to_json() if fmt == "json" else report.to_csv()
    path = args.output or cfg.output_path
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for e in report.entries:
        if e.get("error"):
            print(f"reesreg: entry {e['entry']['id']!r}: {e['error']['message']}", file=sys.stderr)
    return report.exit_code()


if __name__ == "__main__":
    raise SystemExit(main())
