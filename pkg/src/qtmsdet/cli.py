"""Command-line surface: simulate, roc, compare, hist.

Every command is a pure function of its plan and flags; reruns with the same
seed produce bit-identical CSV files.  Exit codes: 0 success, 2 invalid
arguments, 3 numeric validity error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import disttheory, rocgen
from .detectors import ApproxValidityError, DetectorKind
from .disttheory import ExtremeTailError
from .experiment import (SimulationPlan, plan_from_config, simulate_score_pair,
                         simulate_scores, with_detector)
from .rocgen import ScorePair, default_pfa_grid, empirical_roc
from .sigmodel import RadarKind

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def parse_grid(spec: str) -> np.ndarray:
    """Grid spec `log:<lo>:<hi>:<k>` or `lin:<lo>:<hi>:<k>`; `default` for
    the standard log grid plus decade points."""
    if spec == "default":
        return default_pfa_grid()
    try:
        scale, lo, hi, k = spec.split(":")
        lo, hi, k = float(lo), float(hi), int(k)
    except ValueError as exc:
        raise ValueError(f"bad grid spec {spec!r}") from exc
    if scale == "log":
        grid = np.logspace(np.log10(lo), np.log10(hi), k, endpoint=hi < 1)
    elif scale == "lin":
        grid = np.linspace(lo, hi, k, endpoint=hi < 1)
    else:
        raise ValueError(f"bad grid scale {scale!r}")
    return np.unique(grid[(grid > 0) & (grid < 1)])


def add_plan_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", action="append", default=[],
                        help="plan config file (key = value lines); flags win")
    parser.add_argument("--n", type=int, help="samples integrated per trial")
    parser.add_argument("--rho", type=float, help="target correlation coefficient")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials per hypothesis")
    parser.add_argument("--seed", type=int, help="64-bit master seed")
    parser.add_argument("--detector", choices=[k.value for k in DetectorKind])
    parser.add_argument("--sigma1", type=float)
    parser.add_argument("--sigma2", type=float)
    parser.add_argument("--phi", type=float)
    parser.add_argument("--kind", choices=[k.value for k in RadarKind])
    parser.add_argument("--workers", type=int, default=1)


_DEFAULTS = {"trials": 1_000_000, "seed": 0}


def plans_from_args(args) -> list[SimulationPlan]:
    overrides = {name: getattr(args, name, None)
                 for name in ("n", "rho", "trials", "seed", "detector",
                              "sigma1", "sigma2", "phi", "kind")}
    configs = args.config or [None]
    plans = []
    for cfg in configs:
        text = ""
        if cfg is not None:
            with open(cfg) as handle:
                text = handle.read()
        merged = dict(_DEFAULTS)
        merged.update({k: v for k, v in overrides.items() if v is not None})
        plans.append(plan_from_config(text, **merged))
    return plans


def _svg_path(out: str) -> str:
    root, _ = os.path.splitext(out)
    return root + ".svg"


def _render_roc_svg(path, grid, columns: dict):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4.5))
    for name, col in columns.items():
        ax.semilogx(grid, col, label=name)
    ax.set_xlabel("probability of false alarm")
    ax.set_ylabel("probability of detection")
    ax.set_ylim(0, 1.02)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def _render_hist_svg(path, hist, overlay):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4.5))
    centers = (hist.bin_edges[:-1] + hist.bin_edges[1:]) / 2
    ax.bar(centers, hist.density, width=np.diff(hist.bin_edges), alpha=0.5,
           label="simulated")
    if overlay is not None:
        ax.plot(centers, overlay, "k-", label="theory")
    ax.set_xlabel("detector score")
    ax.set_ylabel("density")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def cmd_simulate(args) -> int:
    plan = plans_from_args(args)[0]
    scores, fallbacks = simulate_scores(plan, null=False, workers=args.workers)
    rocgen.write_scores_csv(args.out, scores)
    if args.null:
        null_scores, fb0 = simulate_scores(plan, null=True, workers=args.workers)
        root, ext = os.path.splitext(args.out)
        rocgen.write_scores_csv(root + "_null" + (ext or ".csv"), null_scores)
        fallbacks += fb0
    if plan.detector is DetectorKind.LR_APPROX:
        print(f"approx-detector fallbacks (p_tot <= 2): {fallbacks}")
    return EXIT_OK


def theory_curve(plan: SimulationPlan, grid) -> np.ndarray:
    if plan.detector is DetectorKind.D1:
        return disttheory.d1_detection_probability(plan.rho, plan.n, grid)
    return disttheory.lr_detection_probability(plan.rho, plan.n, grid)


def cmd_roc(args) -> int:
    plan = plans_from_args(args)[0]
    grid = parse_grid(args.grid)
    h0, h1, fallbacks = simulate_score_pair(plan, workers=args.workers)
    curve = empirical_roc(ScorePair(h0, h1), grid)
    columns = {"pd_empirical": curve.p_d}
    if args.theory:
        columns["pd_theory"] = theory_curve(plan, grid)
    rocgen.write_roc_csv(args.out, grid, columns)
    if args.svg:
        _render_roc_svg(_svg_path(args.out), grid, columns)
    if fallbacks:
        print(f"approx-detector fallbacks (p_tot <= 2): {fallbacks}")
    return EXIT_OK


def cmd_compare(args) -> int:
    plans = plans_from_args(args)
    if args.detectors:
        kinds = [DetectorKind(k) for k in args.detectors.split(",")]
        if len(plans) != 1:
            raise ValueError("--detectors expects a single base plan")
        plans = [with_detector(plans[0], k) for k in kinds]
    if len(plans) < 2:
        raise ValueError("compare needs at least two plans "
                         "(repeat --config or pass --detectors)")
    if not args.allow_mixed:
        if len({(p.n, p.rho) for p in plans}) != 1:
            raise ValueError("plans disagree on (n, rho); pass --allow-mixed to override")
    grid = parse_grid(args.grid)
    columns = {}
    for index, plan in enumerate(plans):
        h0, h1, _ = simulate_score_pair(plan, workers=args.workers, plan_index=index)
        curve = empirical_roc(ScorePair(h0, h1), grid)
        name = f"pd_{plan.detector.value}"
        while name in columns:
            name += "x"
        columns[name] = curve.p_d
    rocgen.write_roc_csv(args.out, grid, columns)
    if args.svg:
        _render_roc_svg(_svg_path(args.out), grid, columns)
    return EXIT_OK


def cmd_hist(args) -> int:
    plan = plans_from_args(args)[0]
    scores, _ = simulate_scores(plan, null=args.null, workers=args.workers)
    hist = rocgen.histogram(scores, args.bins)
    centers = (hist.bin_edges[:-1] + hist.bin_edges[1:]) / 2
    rho = 0.0 if args.null else plan.rho
    if plan.detector is DetectorKind.D1:
        mean = 2.0 * rho
        var = 2.0 * (1.0 + rho * rho) / plan.n
        overlay = np.exp(-((centers - mean) ** 2) / (2 * var)) / np.sqrt(2 * np.pi * var)
    else:
        overlay = disttheory.noncentral_chi2_1_pdf(centers, 2.0 * plan.n * rho * rho)
    rocgen.write_hist_csv(args.out, hist, overlay)
    if args.svg:
        _render_hist_svg(_svg_path(args.out), hist, overlay)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtmsdet",
        description="Likelihood-ratio and correlation detectors for QTMS/noise "
                    "radar: Monte Carlo score simulation and ROC curves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="emit detector score CSVs")
    add_plan_flags(p_sim)
    p_sim.add_argument("--out", required=True)
    p_sim.add_argument("--null", action="store_true",
                       help="also emit target-absent scores to <out>_null.csv")
    p_sim.set_defaults(func=cmd_simulate)

    p_roc = sub.add_parser("roc", help="empirical (and theoretical) ROC curve CSV")
    add_plan_flags(p_roc)
    p_roc.add_argument("--out", required=True)
    p_roc.add_argument("--grid", default="default")
    p_roc.add_argument("--theory", action="store_true")
    p_roc.add_argument("--svg", action="store_true")
    p_roc.set_defaults(func=cmd_roc)

    p_cmp = sub.add_parser("compare", help="multi-detector ROC comparison CSV")
    add_plan_flags(p_cmp)
    p_cmp.add_argument("--out", required=True)
    p_cmp.add_argument("--grid", default="default")
    p_cmp.add_argument("--detectors", help="comma list, e.g. lr,d1")
    p_cmp.add_argument("--allow-mixed", action="store_true")
    p_cmp.add_argument("--svg", action="store_true")
    p_cmp.set_defaults(func=cmd_compare)

    p_hist = sub.add_parser("hist", help="score histogram CSV with theory overlay")
    add_plan_flags(p_hist)
    p_hist.add_argument("--out", required=True)
    p_hist.add_argument("--bins", type=int, default=100)
    p_hist.add_argument("--null", action="store_true")
    p_hist.add_argument("--svg", action="store_true")
    p_hist.set_defaults(func=cmd_hist)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ApproxValidityError, ExtremeTailError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
