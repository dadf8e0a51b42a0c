"""Command-line interface: generate datasets, run the insertion experiment,
plot reports, and verify the solver against the exhaustive oracle."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .aco import CLOSED_TOUR, OPEN_PATH, oracle_comparison
from .clustering import KMeansConfig, kmeans, majority_vote_mapping
from .config import (
    LABEL_MODES,
    NORMALIZE_MODES,
    ZSCORE_MODES,
    ExperimentConfig,
    apply_overrides,
    config_from_file_text,
    parse_formats,
)
from .core import (
    InputError,
    LabeledDataset,
    LogicError,
    NumericError,
    RngSeed,
    zscore_normalize,
)
from .datagen import (
    dataset_summary,
    gen_dataset,
    list_presets,
    load_csv,
    load_preset,
    save_csv,
)
from .feature import (
    baseline_phase,
    generate_default_phases,
    read_report_json,
    run_experiment,
    write_report_csv,
    write_report_json,
)

# Dataset generation draws from this derived stream so that
# `generate --seed S` writes exactly the dataset `run --seed S` works on,
# without sharing a stream with the per-class solver seeds.
_DATASET_STREAM = 1048583
_KMEANS_STREAM = 1048589

# Tolerance separating real optimality gaps from float accumulation noise
# when comparing solver lengths against the exhaustive optimum.
EXACT_MATCH_TOL = 1e-9


def _dataset_seed(seed: int) -> RngSeed:
    return RngSeed(seed).derive(_DATASET_STREAM)


def cmd_generate(args) -> int:
    specs = load_preset(args.preset)
    ds = gen_dataset(specs, _dataset_seed(args.seed))
    out = args.out if args.out is not None else f"{args.preset}.csv"
    save_csv(ds, out, has_header=args.header)
    print(f"wrote {out}: {dataset_summary(ds)}")
    return 0


def _resolve_dataset(cfg: ExperimentConfig) -> tuple[LabeledDataset, bool]:
    """The configured dataset, plus whether it came from a CSV file."""
    if cfg.dataset in list_presets():
        specs = load_preset(cfg.dataset)
        return gen_dataset(specs, _dataset_seed(cfg.seed)), False
    if os.path.exists(cfg.dataset):
        return load_csv(cfg.dataset, cfg.has_header, cfg.label_column), True
    raise InputError(
        f"dataset {cfg.dataset!r} is neither a preset nor an existing file; "
        f"valid presets: {', '.join(list_presets())}"
    )


def _apply_labeling(ds: LabeledDataset, cfg: ExperimentConfig) -> LabeledDataset:
    if cfg.labels == "true":
        return ds
    k = cfg.k if cfg.k > 0 else ds.n_classes
    result = kmeans(
        ds.points, KMeansConfig(k=k, seed=RngSeed(cfg.seed).derive(_KMEANS_STREAM))
    )
    labels = result.labels
    if k == ds.n_classes:
        mapping = majority_vote_mapping(labels, ds.labels)
        labels = np.asarray([mapping[int(c)] for c in labels], dtype=np.int64)
    return LabeledDataset(ds.points, labels)


def _workers_from_env() -> int | None:
    raw = os.environ.get("ANTNET_THREADS")
    if raw is None or raw.strip() == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"ANTNET_THREADS must be an integer, got {raw!r}") from None
    if value < 0:
        raise InputError("ANTNET_THREADS must be >= 0 (0 = auto)")
    return value  # 0 means auto (cpu count)


def cmd_run(args) -> int:
    if args.config is not None:
        path = Path(args.config)
        if not path.is_file():
            raise InputError(f"config file not found: {args.config}")
        cfg = config_from_file_text(path.read_text(encoding="utf-8"), args.config)
    else:
        cfg = ExperimentConfig()
    overrides = {
        "dataset": args.dataset,
        "seed": args.seed,
        "alpha": args.alpha,
        "beta": args.beta,
        "rho": args.rho,
        "ants": args.ants,
        "iters": args.iters,
        "mode": args.mode,
        "reps": args.reps,
        "k": args.k,
        "labels": args.labels,
        "normalize": args.normalize,
        "out": args.out,
        "has_header": args.has_header,
        "label_column": args.label_column,
        "zscore": args.zscore,
        "target_class": args.target_class,
    }
    if args.formats is not None:
        overrides["formats"] = parse_formats(args.formats, "--formats")
    cfg = apply_overrides(cfg, overrides)

    ds, from_csv = _resolve_dataset(cfg)
    if cfg.zscore == "true" or (cfg.zscore == "auto" and from_csv):
        ds = zscore_normalize(ds)
    ds = _apply_labeling(ds, cfg)
    print(f"dataset {cfg.dataset}: {dataset_summary(ds)}")

    if not (0 <= cfg.target_class < ds.n_classes):
        raise InputError(
            f"target_class {cfg.target_class} out of range for "
            f"{ds.n_classes} classes"
        )

    params = cfg.to_aco_params()
    if cfg.phases == (1,):
        phases = [baseline_phase()]
    else:
        all_phases = generate_default_phases(
            ds, cfg.target_class, params.seed,
            cfg.insert_count, cfg.near_lo, cfg.near_hi,
        )
        phases = [p for p in all_phases if p.phase_id in cfg.phases]

    report = run_experiment(
        ds,
        params,
        repetitions=cfg.reps,
        target_class=cfg.target_class,
        phases=phases,
        normalize_per_edge=(cfg.normalize == "per-edge"),
        dataset_name=cfg.dataset,
        workers=_workers_from_env(),
        progress=lambda line: print(line, file=sys.stderr),
    )

    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if "json" in cfg.formats:
        path = out_dir / "report.json"
        write_report_json(report, path)
        print(f"wrote {path}")
    if "csv" in cfg.formats:
        path = out_dir / "samples.csv"
        write_report_csv(report, path)
        print(f"wrote {path}")
    if "svg" in cfg.formats:
        from .plotting import render_report

        path = out_dir / "boxplots.svg"
        render_report(report, path)
        print(f"wrote {path}")
    return 0


def cmd_plot(args) -> int:
    report = read_report_json(args.report)
    from .plotting import render_report

    render_report(report, args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_verify(args) -> int:
    rows = oracle_comparison(
        n_max=args.n_max, trials=args.trials, seed=RngSeed(args.seed)
    )
    print(f"{'n':>3} {'trial':>5} {'aco':>12} {'optimum':>12} {'gap':>12}")
    for row in rows:
        print(
            f"{row.n:>3} {row.trial:>5} {row.aco_length:>12.6f} "
            f"{row.optimum:>12.6f} {row.gap:>12.3e}"
        )
    below = [r for r in rows if r.aco_length < r.optimum - EXACT_MATCH_TOL]
    exact = sum(1 for r in rows if abs(r.gap) <= EXACT_MATCH_TOL)
    mean_rel_gap = sum(r.relative_gap for r in rows) / len(rows)
    print(
        f"exact optimum in {exact}/{len(rows)} instances "
        f"({100.0 * exact / len(rows):.1f}%), mean relative gap "
        f"{mean_rel_gap:.3e}"
    )
    if below:
        print(
            f"error: {len(below)} instances report lengths below the optimum "
            "(implementation bug)",
            file=sys.stderr,
        )
        return 1
    if mean_rel_gap > args.max_gap:
        print(
            f"error: mean relative gap {mean_rel_gap:.3e} exceeds the "
            f"threshold {args.max_gap}",
            file=sys.stderr,
        )
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antnet",
        description=(
            "Path-length network features via ant colony optimization, and "
            "insertion experiments measuring their class sensitivity."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="generate a preset dataset as CSV")
    p_gen.add_argument("preset", help=f"one of: {', '.join(list_presets())}")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default=None, help="output CSV path")
    p_gen.add_argument(
        "--header", action="store_true", help="write a header row"
    )
    p_gen.set_defaults(func=cmd_generate)

    p_run = sub.add_parser("run", help="run the insertion experiment")
    p_run.add_argument("--config", default=None, help="key-value config file")
    p_run.add_argument("--dataset", default=None, help="preset name or CSV path")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--ants", type=int, default=None, help="0 = auto")
    p_run.add_argument("--iters", type=int, default=None)
    p_run.add_argument("--alpha", type=float, default=None)
    p_run.add_argument("--beta", type=float, default=None)
    p_run.add_argument("--rho", type=float, default=None)
    p_run.add_argument("--mode", choices=(OPEN_PATH, CLOSED_TOUR), default=None)
    p_run.add_argument("--reps", type=int, default=None)
    p_run.add_argument("--k", type=int, default=None, help="0 = number of classes")
    p_run.add_argument("--labels", choices=LABEL_MODES, default=None)
    p_run.add_argument("--normalize", choices=NORMALIZE_MODES, default=None)
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.add_argument(
        "--formats", default=None, help="comma-separated subset of json,csv,svg"
    )
    p_run.add_argument(
        "--has-header", action=argparse.BooleanOptionalAction, default=None
    )
    p_run.add_argument("--label-column", type=int, default=None)
    p_run.add_argument("--zscore", choices=ZSCORE_MODES, default=None)
    p_run.add_argument("--target-class", type=int, default=None)
    p_run.set_defaults(func=cmd_run)

    p_plot = sub.add_parser("plot", help="render a report JSON as boxplots")
    p_plot.add_argument("report", help="path to report.json")
    p_plot.add_argument("--out", default="boxplots.svg")
    p_plot.set_defaults(func=cmd_plot)

    p_verify = sub.add_parser(
        "verify", help="compare the solver against the exhaustive optimum"
    )
    p_verify.add_argument("--n-max", type=int, default=8)
    p_verify.add_argument("--trials", type=int, default=20)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument(
        "--max-gap",
        type=float,
        default=0.01,
        help="largest acceptable mean relative gap",
    )
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (LogicError, NumericError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
