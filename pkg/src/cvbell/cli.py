"""Batch command surface: reproduce the violation curve, decoherence
thresholds, MABK reports and LHV constructions as CSV/JSON artifacts.

Exit codes: 0 on success, 2 on usage or validation errors, 1 on internal
invariant failures.  All randomness flows through --seed; repeated runs are
byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .decoherence import fig1_csv, first_threshold_n
from .formats import fmt15
from .lhv import (
    construct_general,
    construct_two_party,
    ensemble_to_json_dict,
    evaluate,
    sample_cfrd_report,
    table_from_json,
)
from .mabk import ENUMERATION_MAX_SITES, mabk_report
from .quadrature import cfrd_report
from .states import balanced_psi_s, canonical_signs


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_cfrd_scan(args: argparse.Namespace) -> int:
    if args.n_max < 2 or args.n_max % 2 != 0:
        raise ValueError("--n-max must be an even integer >= 2")
    reports = [
        cfrd_report(balanced_psi_s(n), canonical_signs(n))
        for n in range(2, args.n_max + 1, 2)
    ]
    if args.format == "json":
        text = json.dumps([r.to_dict() for r in reports], indent=2) + "\n"
    else:
        lines = ["n,lhs,rhs,ratio,violated"]
        lines += [
            f"{r.n},{fmt15(r.lhs)},{fmt15(r.rhs)},{fmt15(r.ratio)},"
            f"{'true' if r.violated else 'false'}"
            for r in reports
        ]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def cmd_thresholds(args: argparse.Namespace) -> int:
    if args.n_min % 2 != 0 or args.n_max % 2 != 0:
        raise ValueError("--n-min and --n-max must be even")
    if args.n_min < first_threshold_n():
        raise ValueError(
            f"no threshold exists below n = {first_threshold_n()}; "
            f"got --n-min {args.n_min}"
        )
    _emit(fig1_csv(args.n_min, args.n_max), args.out)
    return 0


def cmd_mabk(args: argparse.Namespace) -> int:
    if not 1 <= args.n <= ENUMERATION_MAX_SITES:
        raise ValueError(f"--n must be in 1..{ENUMERATION_MAX_SITES}")
    if args.optimize and not 2 <= args.n <= 6:
        raise ValueError("--optimize supports 2 <= n <= 6")
    report = mabk_report(args.n, optimize=args.optimize, seed=args.seed)
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return 0


def cmd_lhv_fit(args: argparse.Namespace) -> int:
    path = Path(args.table)
    if not path.exists():
        raise ValueError(f"table file not found: {path}")
    try:
        table = table_from_json(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(
            f"malformed JSON in {path}: line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}"
        ) from exc
    scn = table.scenario
    if (scn.sites, scn.settings) == (2, 2):
        ensemble = construct_two_party(table)
    else:
        ensemble = construct_general(table)
    worst = 0.0
    for combo, target in table.full.items():
        worst = max(worst, abs(target - evaluate(ensemble, range(scn.sites), combo)))
    for (sites, settings), target in table.lower.items():
        worst = max(worst, abs(target - evaluate(ensemble, sites, settings)))
    passed = worst <= 1e-12
    payload = {
        "ensemble": ensemble_to_json_dict(ensemble),
        "verification": {
            "max_abs_error": worst,
            "tolerance": 1e-12,
            "passed": passed,
        },
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    if not passed:
        raise RuntimeError(
            f"constructed ensemble missed a target by {worst!r} (> 1e-12)"
        )
    return 0


def cmd_lhv_sample(args: argparse.Namespace) -> int:
    if args.trials < 1:
        raise ValueError("--trials must be >= 1")
    if args.n < 1:
        raise ValueError("--n must be >= 1")
    report = sample_cfrd_report(
        n=args.n, trials=args.trials, seed=args.seed, distribution=args.distribution
    )
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvbell",
        description=(
            "Continuous-variable Bell toolkit: violation curves, decoherence "
            "thresholds, MABK reports, hidden-variable constructions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser(
        "cfrd-scan", help="violation ratio of the two-branch state vs mode count"
    )
    scan.add_argument("--n-max", type=int, default=14, help="largest even mode count")
    scan.add_argument("--format", choices=("csv", "json"), default="csv")
    scan.add_argument("--out", default=None, help="output path (default stdout)")
    scan.set_defaults(func=cmd_cfrd_scan)

    thr = sub.add_parser(
        "thresholds",
        help="detection-efficiency and preparation-fidelity thresholds vs n",
    )
    thr.add_argument("--n-min", type=int, default=10)
    thr.add_argument("--n-max", type=int, default=40)
    thr.add_argument("--out", default=None)
    thr.set_defaults(func=cmd_thresholds)

    mabk = sub.add_parser(
        "mabk", help="hidden-variable and quantum maxima of the recursion operator"
    )
    mabk.add_argument("--n", type=int, required=True, help="number of sites")
    mabk.add_argument(
        "--optimize", action="store_true", help="optimize measurement angles (n <= 6)"
    )
    mabk.add_argument("--seed", type=int, default=0)
    mabk.add_argument("--out", default=None)
    mabk.set_defaults(func=cmd_mabk)

    lhv = sub.add_parser("lhv", help="hidden-variable model construction and sampling")
    lhv_sub = lhv.add_subparsers(dest="lhv_command", required=True)

    fit = lhv_sub.add_parser(
        "fit", help="build an ensemble reproducing a correlation table"
    )
    fit.add_argument("--table", required=True, help="correlation-table JSON file")
    fit.add_argument("--out", default=None)
    fit.set_defaults(func=cmd_lhv_fit)

    sample = lhv_sub.add_parser(
        "sample", help="Monte-Carlo check that random strategies never violate"
    )
    sample.add_argument("--trials", type=int, required=True)
    sample.add_argument("--n", type=int, required=True, help="number of sites")
    sample.add_argument("--seed", type=int, default=0)
    sample.add_argument(
        "--distribution", choices=("normal", "uniform"), default="normal"
    )
    sample.add_argument("--out", default=None)
    sample.set_defaults(func=cmd_lhv_sample)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
