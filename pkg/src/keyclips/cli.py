"""Command-line front end.

Exit codes: 0 success, 1 data or IO errors, 2 usage errors.  Machine
output (JSON, CSV) goes to stdout or --out; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import baselines, harness
from .baselines import DEFAULT_ITS_ALPHA
from .container import ContainerError, read_container, write_container
from .model import SelectionConfig, plan_from_json, plan_to_json
from .planner import BudgetViolation, plan
from .relevance import curve_to_csv, relevancy_scores


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def _nonneg_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _scale_float(text: str) -> float:
    value = float(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _int_list(text: str) -> tuple[int, ...]:
    if not text:
        return ()
    return tuple(int(part) for part in text.split(","))


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(","))


def _seed_list(text: str) -> tuple[int, ...]:
    """Seeds as 'a:b' (half-open range) or a comma list."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        return tuple(range(int(lo), int(hi)))
    return _int_list(text)


def _policy_list(text: str) -> tuple[str, ...]:
    names = tuple(part.strip() for part in text.split(",") if part.strip())
    for name in names:
        if name not in harness.POLICIES:
            raise argparse.ArgumentTypeError(
                f"unknown policy {name!r}; choose from {', '.join(harness.POLICIES)}")
    return names


def _add_config_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--k", type=_positive_int, default=16,
                     help="frame budget in full-resolution frame equivalents")
    sub.add_argument("--k-anchor", type=_positive_int, default=None,
                     help="anchor count cap (default: same as --k)")
    sub.add_argument("--s-max", type=_scale_float, default=2.0,
                     help="maximum spatial downscale factor")
    sub.add_argument("--lambda-r", type=_nonneg_float, default=0.5,
                     help="redundancy penalty weight")
    sub.add_argument("--lambda-l", type=_nonneg_float, default=0.05,
                     help="length reward weight")
    sub.add_argument("--z", type=_positive_float, default=392.0,
                     help="pixels per token of the downstream encoder")
    sub.add_argument("--grid", type=_positive_int, default=28,
                     help="output dimension granularity in pixels")
    sub.add_argument("--seed", type=_nonneg_int, default=0, help="RNG seed")
    sub.add_argument("--no-merge", action="store_true",
                     help="keep overlapping clips separate")


def _config_from(args) -> SelectionConfig:
    return SelectionConfig(k=args.k, k_anchor=args.k_anchor, s_max=args.s_max,
                           lambda_r=args.lambda_r, lambda_l=args.lambda_l,
                           z=args.z, grid=args.grid, seed=args.seed,
                           merge=not args.no_merge)


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def cmd_select(args) -> int:
    seq, query = read_container(args.input)
    if query is None:
        print("error: missing query embedding", file=sys.stderr)
        return 1
    result = plan(seq, query, _config_from(args))
    _emit(plan_to_json(result), args.out)
    return 0


def cmd_baseline(args) -> int:
    seq, query = read_container(args.input)
    if args.method == "uniform":
        selection = baselines.uniform_select(seq.n, args.k)
    else:
        if query is None:
            print("error: missing query embedding", file=sys.stderr)
            return 1
        curve = relevancy_scores(seq, query)
        if args.method == "topk":
            selection = baselines.topk_select(curve, args.k)
        elif args.method == "its":
            selection = baselines.its_select(curve, args.k, alpha=args.alpha)
        else:
            selection = baselines.watershed_select(curve, args.k, args.seed)
    if args.clips:
        cfg = SelectionConfig(k=args.k, seed=args.seed)
        _emit(plan_to_json(baselines.selection_to_plan(selection, seq, cfg)),
              args.out)
    else:
        _emit(selection.to_json(), args.out)
    return 0


def cmd_curve(args) -> int:
    seq, query = read_container(args.input)
    if query is None:
        print("error: missing query embedding", file=sys.stderr)
        return 1
    _emit(curve_to_csv(relevancy_scores(seq, query)), args.out)
    return 0


def cmd_synth(args) -> int:
    curve = harness.synth_curve(args.n, args.events, args.amp, args.width,
                                args.noise, args.seed)
    seq, query = harness.synth_embeddings(curve, args.d, args.seed,
                                          args.src_height, args.src_width)
    write_container(seq, query, args.out)
    if args.gt:
        gt = harness.GroundTruth(tuple(sorted(args.events)), args.window)
        Path(args.gt).write_text(gt.to_json() + "\n", encoding="utf-8")
    return 0


def cmd_eval(args) -> int:
    if (args.plan is None) != (args.gt is None):
        print("error: --plan and --gt must be given together", file=sys.stderr)
        return 2
    if args.plan is not None:
        result = plan_from_json(Path(args.plan).read_text(encoding="utf-8"))
        gt = harness.GroundTruth.from_json(
            Path(args.gt).read_text(encoding="utf-8"))
        cov, rec = harness.coverage(result, gt)
        _emit(json.dumps({"event_coverage": cov, "anchor_recall": rec}),
              args.out)
        return 0
    shape = harness.SweepInstance(n=args.n, num_events=args.events,
                                  amp=args.amp, width=args.width,
                                  noise_sigma=args.noise,
                                  min_separation=args.sep, d=args.d,
                                  window=args.window)
    report = harness.sweep(args.policies, args.k, args.ratios, args.seeds,
                           shape)
    _emit(report.to_csv(), args.out)
    if args.json:
        Path(args.json).write_text(report.to_json() + "\n", encoding="utf-8")
    return 0


def cmd_tokens(args) -> int:
    paths = {}
    for named in args.plans:
        if "=" not in named:
            print(f"error: expected NAME=PATH, got {named!r}", file=sys.stderr)
            return 2
        name, path = named.split("=", 1)
        paths[name] = path
    if args.baseline not in paths:
        print(f"error: baseline {args.baseline!r} not among plans",
              file=sys.stderr)
        return 2
    plans = {name: plan_from_json(Path(path).read_text(encoding="utf-8"))
             for name, path in paths.items()}
    rows = harness.token_report(plans, args.baseline)
    _emit(harness.token_report_csv(rows), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="keyclips",
        description="Query-aware key-clip selection from frame embeddings.")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("select", help="plan key clips for one container")
    p.add_argument("input", help=".f2ce or .f2ce.json embedding container")
    p.add_argument("--out", help="write plan JSON here instead of stdout")
    _add_config_flags(p)
    p.set_defaults(func=cmd_select)

    p = subs.add_parser("baseline", help="run a frame-selection baseline")
    p.add_argument("input", help=".f2ce or .f2ce.json embedding container")
    p.add_argument("--method", required=True,
                   choices=("uniform", "topk", "its", "watershed"))
    p.add_argument("--k", type=_positive_int, default=16)
    p.add_argument("--alpha", type=_positive_float, default=DEFAULT_ITS_ALPHA,
                   help="inverse transform sharpening exponent")
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--clips", action="store_true",
                   help="emit a full-resolution clip plan instead of indices")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_baseline)

    p = subs.add_parser("curve", help="export the relevancy curve as CSV")
    p.add_argument("input", help=".f2ce or .f2ce.json embedding container")
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_curve)

    p = subs.add_parser("synth", help="generate a synthetic container")
    p.add_argument("--n", type=_positive_int, required=True,
                   help="number of frames")
    p.add_argument("--events", type=_int_list, default=(),
                   help="comma-separated event center indices")
    p.add_argument("--amp", type=_nonneg_float, default=0.6)
    p.add_argument("--width", type=_positive_float, default=10.0)
    p.add_argument("--noise", type=_nonneg_float, default=0.05)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--d", type=_positive_int, default=32,
                   help="embedding dimension")
    p.add_argument("--src-height", type=_positive_int, default=448)
    p.add_argument("--src-width", type=_positive_int, default=448)
    p.add_argument("--window", type=_nonneg_int, default=harness.DEFAULT_WINDOW)
    p.add_argument("--out", required=True, help="container path to write")
    p.add_argument("--gt", help="also write ground-truth JSON here")
    p.set_defaults(func=cmd_synth)

    p = subs.add_parser(
        "eval",
        help="score one plan against ground truth, or sweep policies")
    p.add_argument("--plan", help="plan JSON to score against --gt")
    p.add_argument("--gt", help="ground-truth JSON for --plan")
    p.add_argument("--policies", type=_policy_list,
                   default=("keyclips", "uniform"),
                   help=f"comma list from: {', '.join(harness.POLICIES)}")
    p.add_argument("--k", type=_int_list, default=(16,),
                   help="comma-separated budgets")
    p.add_argument("--ratios", type=_float_list, default=(1.0,),
                   help="comma-separated anchor/budget ratios")
    p.add_argument("--seeds", type=_seed_list, default=tuple(range(20)),
                   help="'a:b' range or comma list")
    p.add_argument("--n", type=_positive_int, default=1800)
    p.add_argument("--events", type=_positive_int, default=3,
                   help="planted events per instance")
    p.add_argument("--amp", type=_nonneg_float, default=0.6)
    p.add_argument("--width", type=_positive_float, default=10.0)
    p.add_argument("--noise", type=_nonneg_float, default=0.05)
    p.add_argument("--sep", type=_positive_int, default=120,
                   help="minimum frames between events")
    p.add_argument("--d", type=_positive_int, default=32)
    p.add_argument("--window", type=_nonneg_int, default=harness.DEFAULT_WINDOW)
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.add_argument("--json", help="also write the report as JSON here")
    p.set_defaults(func=cmd_eval)

    p = subs.add_parser("tokens", help="token accounting across plan files")
    p.add_argument("plans", nargs="+", metavar="NAME=PATH",
                   help="named plan JSON files")
    p.add_argument("--baseline", required=True,
                   help="plan name the deltas are measured against")
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_tokens)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ContainerError, BudgetViolation, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
