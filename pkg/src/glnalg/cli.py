"""``glnalg`` command line.  Exit codes: 0 all checks pass, 1 a check failed,
2 bad configuration or usage."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .suites import ALL_SUITES, CATALOG, ConfigError, RunConfig, dumps, explain, run, write_report

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def _common(sp: argparse.ArgumentParser) -> None:
    # None means "not given", so config-file values survive
    sp.add_argument("--n", type=int)
    sp.add_argument("--u", type=float)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--max-degree", dest="max_degree", type=int)
    sp.add_argument("--order", type=int)
    sp.add_argument("--suites", type=lambda s: [t for t in s.split(",") if t])
    sp.add_argument("--out")
    sp.add_argument("--workers", type=int)
    sp.add_argument("--spec", dest="spec_files", action="append", help="similarity spec JSON (general/family)")
    sp.add_argument("--mutate", action="store_true", default=None, help="apply the suite's negative-control mutation")
    sp.add_argument("--timings", action="store_true", default=None, help="add wall-clock times (reports stop being reproducible)")
    sp.add_argument("--json", action="store_true", help="print the JSON report to stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="glnalg", description="Exact and numeric checks for gl(n)-type noncommutative spaces.")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", help="run one suite")
    v.add_argument("suite", choices=ALL_SUITES)
    _common(v)
    s = sub.add_parser("star", help="numeric star-product suite")
    _common(s)
    r = sub.add_parser("run", help="run several suites, optionally from a JSON config")
    r.add_argument("--config")
    _common(r)
    e = sub.add_parser("explain", help="describe a check id")
    e.add_argument("check_id", nargs="?")
    e.add_argument("--list", action="store_true")
    return ap


def _config(args) -> RunConfig:
    cfg = RunConfig()
    text = None
    if getattr(args, "config", None):
        path = Path(args.config)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"{path}: {exc.strerror}") from exc
        cfg = RunConfig.from_json(text, str(path))
    for name in ("n", "u", "seed", "tol", "samples", "max_degree", "order", "suites", "out", "workers", "spec_files", "mutate", "timings"):
        val = getattr(args, name, None)
        if val is not None:
            setattr(cfg, name, val)
    if args.cmd == "verify":
        cfg.suites = [args.suite]
    elif args.cmd == "star":
        cfg.suites = ["star"]
    try:
        return cfg.validate()
    except ConfigError as exc:
        field = getattr(exc, "field", None)
        if text is not None and field and getattr(args, field, None) is None:
            raise ConfigError(f"{args.config}: line {_line_of(text, field)}: {exc}") from exc
        raise


def _line_of(text: str, field: str) -> int:
    keys = {field, {"max_degree": "maxDegree", "spec_files": "specFiles"}.get(field, field)}
    for i, line in enumerate(text.splitlines(), 1):
        if any(f'"{k}"' in line for k in keys):
            return i
    return 1


def _print_summary(doc: dict, out) -> None:
    for suite in doc["suites"]:
        status = "PASS" if suite["pass"] else "FAIL"
        print(f"[{status}] {suite['suite']}", file=out)
        for rec in suite["records"]:
            mark = "ok  " if rec["pass"] else "FAIL"
            line = f"  {mark} {rec['check']}  residual={rec['residual']}"
            if "counts" in rec:
                line += f"  ({rec['counts']['pass']} ok, {rec['counts']['fail']} failed)"
            print(line if rec["pass"] else line[:2000], file=out)
        if "mutation" in suite:
            print(f"  mutation: {suite['mutation']}", file=out)


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.cmd == "explain":
        if args.list:
            print("\n".join(sorted(CATALOG)))
            return EXIT_OK
        try:
            print(explain(args.check_id or ""))
        except KeyError:
            print(f"error: unknown check {args.check_id!r} (try 'glnalg explain --list')", file=sys.stderr)
            return EXIT_CONFIG
        return EXIT_OK

    try:
        cfg = _config(args)
    except (ConfigError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        doc = run(cfg)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        # bad spec files land here
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if cfg.out:
        write_report(doc, cfg.out)
    if args.json:
        sys.stdout.write(dumps(doc))
    else:
        _print_summary(doc, sys.stdout)
    return EXIT_OK if doc["pass"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
