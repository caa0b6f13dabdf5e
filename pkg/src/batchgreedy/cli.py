"""Command-line front end: ``batchgreedy {gen,run,sweep,verify}``.

Exit codes: 0 when every applicable check holds, 2 when any fails, 1 on
usage, input or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import instances
from .errors import BatchGreedyError
from .objectives import TOL, certify_monotone_submodular
from .report import run_instance, summarize, sweep, write_csv
from .setsystem import check_matroid_axioms

EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _range(text):
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def build_parser():
    p = _Parser(prog="batchgreedy", description="k-batch greedy under matroid constraints")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a seeded task-assignment instance")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--n", type=int, default=1, help="number of subtasks")
    g.add_argument("--N", type=int, required=True, help="number of agents")
    g.add_argument("--K", type=int, required=True, help="matroid rank")
    g.add_argument("--matroid", choices=instances.MATROID_KINDS, default="uniform")
    g.add_argument("--out", help="output path (default: stdout)")

    def common(sp):
        sp.add_argument("--budget", type=int, default=None, help="enumeration cap")
        sp.add_argument("--tolerance", type=float, default=TOL)
        sp.add_argument("--out", help="write the report here")

    r = sub.add_parser("run", help="greedy, curvature, bounds and checks for one instance")
    r.add_argument("instance")
    r.add_argument("--k", type=_int_list, default=[1], help="comma-separated batch sizes")
    r.add_argument("--allow-partial-batch", action="store_true")
    r.add_argument("--json", action="store_true", help="print the JSON report on stdout")
    r.add_argument("--timings", action="store_true", help="include wall-clock timings")
    common(r)

    s = sub.add_parser("sweep", help="replicate the guarantees over generated instances")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=200)
    s.add_argument("--n-range", type=_range, default=(1, 3))
    s.add_argument("--N-range", type=_range, default=(3, 8))
    s.add_argument("--k", type=_int_list, default=[1, 2, 3, 4])
    s.add_argument("--kinds", default=",".join(instances.MATROID_KINDS))
    s.add_argument("--json", action="store_true", help="print the summary as JSON")
    common(s)

    v = sub.add_parser("verify", help="matroid axioms and objective certificate only")
    v.add_argument("instance")
    v.add_argument("--json", action="store_true")
    common(v)
    return p


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args):
    inst = instances.generate_instance(args.seed, args.n, args.N, args.K, args.matroid)
    _emit(instances.dumps(inst), args.out)
    return EXIT_OK


def cmd_run(args):
    inst = instances.load(args.instance)
    report = run_instance(
        inst, args.k, args.allow_partial_batch, args.budget, args.tolerance, args.timings
    )
    text = _dump(report)
    if args.out:
        Path(args.out).write_text(text)
    if args.json:
        sys.stdout.write(text)
    else:
        _print_run_summary(report)
    return EXIT_OK if report["verdict"]["all_hold"] else EXIT_FAILED


def _print_run_summary(report):
    cert = report["certificate"]
    print(f"instance {report['instance_digest'][:12]}  N={report['ground_size']}  "
          f"{report['matroid_kind']} rank={report['rank']}")
    print(f"nondecreasing={cert['nondecreasing']} submodular={cert['submodular']}")
    if "value" in report["optimum"]:
        print(f"optimum {report['optimum']['optimum']} value={report['optimum']['value']:.6g}")
    for run in report["runs"]:
        if "skipped" in run:
            print(f"k={run['k']}: skipped ({run['skipped']})")
            continue
        alpha = run["curvature"]["alpha_k"]
        line = f"k={run['k']}: alpha_k={alpha:.6g}"
        if "trace" in run and "value" in run["trace"]:
            line += f" greedy={run['trace']['value']:.6g}"
        print(line)
        for c in run.get("checks", []):
            state = "ok" if c["holds"] else "FAIL"
            if not c["applicable"]:
                state = "n/a"
            print(f"    {c['name']:<28} {state:<5} slack={c['slack']:.3g}")
    v = report["verdict"]
    print(f"{v['applicable_checks']} applicable checks, {v['failed']} failed")


def cmd_sweep(args):
    kinds = tuple(k for k in args.kinds.split(",") if k)
    for kind in kinds:
        if kind not in instances.MATROID_KINDS:
            raise UsageError(f"unknown matroid kind {kind!r}")
    if args.count < 0:
        raise UsageError("--count must be >= 0")
    results = sweep(
        args.seed, args.count, args.n_range, args.N_range, tuple(args.k), kinds,
        allow_partial=True, budget=args.budget, tol=args.tolerance,
    )
    _emit(write_csv(results), args.out)
    summary = summarize(results, args.tolerance)
    if args.json:
        sys.stderr.write(_dump(summary))
    else:
        for key, val in summary.items():
            print(f"{key}: {val}", file=sys.stderr)
    return EXIT_OK if summary["violations"] == 0 else EXIT_FAILED


def cmd_verify(args):
    inst = instances.load(args.instance)
    axioms = check_matroid_axioms(inst.matroid, args.budget)
    cert = certify_monotone_submodular(inst.objective, args.tolerance)
    report = {"axioms": axioms.to_dict(), "certificate": cert.to_dict()}
    text = _dump(report)
    if args.out:
        Path(args.out).write_text(text)
    if args.json:
        sys.stdout.write(text)
    else:
        print(f"hereditary={axioms.hereditary} augmentation={axioms.augmentation} "
              f"equicardinal={axioms.equicardinal}")
        print(f"nondecreasing={cert.nondecreasing} submodular={cert.submodular}")
    return EXIT_OK if axioms.ok and cert.ok else EXIT_FAILED


COMMANDS = {"gen": cmd_gen, "run": cmd_run, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"batchgreedy: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (BatchGreedyError, OSError) as e:
        print(f"batchgreedy: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
