"""Command-line harness: accuracy audit, benchmark, table dumps, demo."""

from __future__ import annotations

import argparse
import sys

from . import audit, explog, tables
from .params import params_for_width


def _add_common(p, bench=False):
    p.add_argument("--width", type=int, choices=(32, 64), default=64)
    p.add_argument("--backend", choices=("fma", "dv"), default=None,
                   help="exact-residual backend (default: auto)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="twofold",
        description="Audit and benchmark the twofold exp/log functions.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("audit", help="accuracy audit against the etalon")
    a.add_argument("--fn", required=True,
                   help="function name or 'all' (one of: %s)" % ", ".join(explog.FUNCTION_NAMES))
    _add_common(a)
    a.add_argument("--samples", type=int, default=100_000)
    a.add_argument("--seed", type=int, default=42)
    a.add_argument("--etalon", choices=("oracle", "lib"), default="oracle",
                   help="'lib' compares binary32 results against the double library")
    a.add_argument("--out", default=None, help="write the JSON report(s) here")

    b = sub.add_parser("bench", help="throughput benchmark")
    b.add_argument("--fn", required=True,
                   help="function name or 'all'")
    _add_common(b)
    b.add_argument("--iters", type=int, default=200_000)

    t = sub.add_parser("tables", help="emit the constant tables")
    t.add_argument("--emit", required=True, help="output path ({width} is substituted)")
    t.add_argument("--width", type=int, choices=(32, 64), default=64)
    t.add_argument("--regen", action="store_true",
                   help="regenerate from the oracle instead of re-emitting packaged data")
    t.add_argument("--precision", type=int, default=192)

    sub.add_parser("demo", help="corner-case demo suite")
    return ap


def _fn_list(arg: str):
    if arg == "all":
        return list(explog.FUNCTION_NAMES)
    if arg not in explog.FUNCTION_NAMES:
        raise SystemExit(f"unknown function {arg!r}; pick from: "
                         + ", ".join(explog.FUNCTION_NAMES))
    return [arg]


def _cmd_audit(args) -> int:
    reports = []
    for name in _fn_list(args.fn):
        spec = audit.SampleSpec(fn=name, width=args.width, count=args.samples,
                                seed=args.seed)
        rep = audit.run_accuracy(spec, backend=args.backend, etalon=args.etalon)
        reports.append(rep)
        print(rep.summary_line())
    if args.out:
        payload = reports[0].to_json() if len(reports) == 1 else (
            "[\n" + ",\n".join(r.to_json() for r in reports) + "\n]"
        )
        with open(args.out, "w") as f:
            f.write(payload + "\n")
    return 0 if all(r.passed for r in reports) else 1


def _cmd_bench(args) -> int:
    for name in _fn_list(args.fn):
        rep = audit.run_bench(name, args.width, args.iters, backend=args.backend)
        print(rep.summary_line())
    return 0


def _cmd_tables(args) -> int:
    if args.regen:
        text = tables.dump_tables(
            tables.gen_tables(params_for_width(args.width), args.precision)
        )
    else:
        text = tables.packaged_dump(args.width)
    path = args.emit.replace("{width}", str(args.width))
    with open(path, "w") as f:
        f.write(text)
    print(f"wrote binary{args.width} tables to {path}")
    return 0


def _cmd_demo(_args) -> int:
    rep = audit.run_demo()
    for line in rep.summary_lines():
        print(line)
    if rep.passed:
        print("demo: all checks passed")
        return 0
    print(f"demo: {len(rep.failures())} check(s) FAILED")
    return 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "audit": _cmd_audit,
        "bench": _cmd_bench,
        "tables": _cmd_tables,
        "demo": _cmd_demo,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
