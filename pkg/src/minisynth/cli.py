"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 frontend (HDL) error, 3 equivalence
failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path

from . import corpus_files
from .errors import FrontendError, SynthError
from .lowering import LoweringOptions

EXIT_OK, EXIT_USAGE, EXIT_FRONTEND, EXIT_EQUIV = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _on_off(text: str) -> bool:
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return text == "on"


def _add_flow_args(p, *, synth: bool):
    p.add_argument("--adder", choices=["ripple", "prefix"], default="prefix",
                   help="final carry-propagate adder (default: prefix)")
    p.add_argument("--equiv", choices=["auto", "exhaustive", "random", "off"], default="auto",
                   help="equivalence check against the reference lowering; auto is exhaustive "
                        "up to 20 input+latch bits, random otherwise")
    p.add_argument("--vectors", type=int, default=100_000, help="random vectors (default: 100000)")
    p.add_argument("--seed", type=int, default=0)
    if synth:
        p.add_argument("--top", help="expected top module name")
        p.add_argument("--partselect", choices=["shifter", "muxtree"], default="shifter")
        p.add_argument("--mac-fusion", type=_on_off, default=False, metavar="{on,off}")
        p.add_argument("--script", default="basic", help="basic, enhanced, or a script file")
        p.add_argument("--emit-aiger", metavar="PATH", help="write the optimized AIG (.aag)")
        p.add_argument("--report", choices=["text", "json"], default="text")
        p.add_argument("--out", metavar="PATH", help="report file (default: stdout)")
        p.add_argument("--plot", metavar="PATH", help="figure of node count and depth per pass")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="minisynth", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("synth", help="synthesize one design and report QoR")
    p.add_argument("file", help="Verilog source")
    _add_flow_args(p, synth=True)

    p = sub.add_parser("compare", help="cumulative comparison of flow configurations")
    p.add_argument("files", nargs="*", help="Verilog sources (default: the bundled corpus)")
    p.add_argument("--columns", default="iguana,mux,abc,mac",
                   help="comma-separated columns from iguana, mux, abc, mac")
    p.add_argument("--out-dir", metavar="DIR", help="write comparison.txt, .csv and .png here")
    p.add_argument("--jobs", type=int, default=1, help="parallel flow runs")
    _add_flow_args(p, synth=False)

    p = sub.add_parser("db", help="rewrite database maintenance")
    dsub = p.add_subparsers(dest="db_command", parser_class=_Parser)
    dsub.required = True
    b = dsub.add_parser("build", help="enumerate the NPN structure database")
    b.add_argument("--out", required=True, metavar="PATH")
    b.add_argument("--max-nodes", type=int, default=7)
    return ap


def _synth(args) -> int:
    from .qor.flow import FlowConfig, run_flow

    cfg = FlowConfig(
        lowering=LoweringOptions(args.partselect, args.mac_fusion, args.adder),
        script=args.script, equiv=args.equiv, vectors=args.vectors, seed=args.seed,
        report_format=args.report, out=args.out, emit_aiger=args.emit_aiger, top=args.top,
    )
    report = run_flow(args.file, cfg)
    if not args.out:
        sys.stdout.write(report.render(args.report))
    if args.plot:
        from .qor.plotting import plot_passes
        plot_passes(report, args.plot)
    if report.equivalent is False:
        print(f"error: equivalence check failed: {report.equivalence}", file=sys.stderr)
        return EXIT_EQUIV
    return EXIT_OK


def _compare(args) -> int:
    from .qor.flow import FlowConfig, column_config, compare_configs

    keys = [k.strip() for k in args.columns.split(",") if k.strip()]
    base = FlowConfig(lowering=LoweringOptions(final_adder=args.adder), equiv=args.equiv,
                      vectors=args.vectors, seed=args.seed)
    try:
        configs = [column_config(k, base) for k in keys]
    except ValueError as e:
        raise _UsageError(str(e)) from None
    if len(configs) < 2:
        raise _UsageError("compare needs at least two columns")
    files = args.files or corpus_files()
    t0 = time.perf_counter()
    cmp = compare_configs(files, configs, jobs=args.jobs)
    text = cmp.to_text()
    sys.stdout.write(text)
    print(f"({len(files)} designs x {len(configs)} columns in {time.perf_counter() - t0:.1f} s)")
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "comparison.txt").write_text(text)
        with open(out / "comparison.csv", "w", newline="") as f:
            csv.writer(f).writerows(cmp.csv_rows())
        from .qor.plotting import plot_comparison
        plot_comparison(cmp, out / "comparison.png")
    if not cmp.all_equivalent:
        return EXIT_EQUIV
    return EXIT_OK


def _db(args) -> int:
    from .opt.rewrite_db import build_rewrite_db, save_rewrite_db

    t0 = time.perf_counter()
    db = build_rewrite_db(args.max_nodes)
    save_rewrite_db(db, args.out)
    print(f"wrote {len(db)} classes to {args.out} ({time.perf_counter() - t0:.1f} s)")
    return EXIT_OK


class _UsageError(Exception):
    pass


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"synth": _synth, "compare": _compare, "db": _db}[args.command]
    try:
        return handler(args)
    except FrontendError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FRONTEND
    except (_UsageError, SynthError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
