"""The path-length network feature, the multi-phase insertion experiment
measuring its sensitivity, and per-phase boxplot statistics."""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .aco import AcoParams, solve, with_seed
from .core import InputError, LabeledDataset, RngSeed, as_points, standard_normals
from .network import ClassNetwork, build_class_networks, insert_points

PHASE_DESCRIPTIONS = (
    "baseline",
    "same_class",
    "near",
    "intermediate",
    "far_or_other_class",
)

# substream tags keeping phase-point generation and member sampling apart
# from the per-class solver streams
_PHASE_GEN_STREAM = 97
_MEMBER_SAMPLE_STREAM = 93


@dataclass(frozen=True)
class PhaseSpec:
    """One experiment phase: which points get inserted before measuring."""

    phase_id: int
    description: str
    points: np.ndarray

    def __post_init__(self):
        if not (1 <= self.phase_id <= 5):
            raise InputError(f"phase_id must be in 1..5, got {self.phase_id}")
        if self.description not in PHASE_DESCRIPTIONS:
            raise InputError(
                f"description must be one of {PHASE_DESCRIPTIONS}, "
                f"got {self.description!r}"
            )
        pts = (
            as_points(self.points)
            if len(self.points)
            else np.zeros((0, 0), dtype=np.float64)
        )
        object.__setattr__(self, "points", pts)
        if self.description == "baseline" and len(pts):
            raise InputError("a baseline phase cannot insert points")
        if self.phase_id == 1 and len(pts):
            raise InputError("phase 1 is the baseline and cannot insert points")


def baseline_phase() -> PhaseSpec:
    return PhaseSpec(1, "baseline", np.zeros((0, 0)))


@dataclass(frozen=True)
class BoxplotStats:
    median: float
    q1: float
    q3: float
    iqr: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...]


def boxplot_stats(samples) -> BoxplotStats:
    """Median/quartiles by linear interpolation (inclusive convention) and
    Tukey 1.5*IQR whiskers clamped to the observed data."""
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 1 or len(x) == 0:
        raise InputError("samples must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(x)):
        raise InputError("samples contain NaN or infinite values")
    q1, median, q3 = (float(q) for q in np.quantile(x, [0.25, 0.5, 0.75]))
    iqr = q3 - q1
    fence_low = q1 - 1.5 * iqr
    fence_high = q3 + 1.5 * iqr
    inside = x[(x >= fence_low) & (x <= fence_high)]
    whisker_low = float(inside.min())
    whisker_high = float(inside.max())
    outliers = tuple(float(v) for v in np.sort(x[(x < fence_low) | (x > fence_high)]))
    return BoxplotStats(median, q1, q3, iqr, whisker_low, whisker_high, outliers)


@dataclass(frozen=True)
class PhaseReport:
    """Distribution summary of the feature over R repeated runs of one phase."""

    phase_id: int
    description: str
    samples: np.ndarray
    median: float
    q1: float
    q3: float
    iqr: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...]
    seeds: np.ndarray | None = None

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        object.__setattr__(self, "samples", samples)
        if len(samples) == 0:
            raise InputError("a phase report needs at least one sample")
        if not (self.q1 <= self.median <= self.q3):
            raise InputError("quartiles must satisfy q1 <= median <= q3")
        if abs(self.iqr - (self.q3 - self.q1)) > 1e-9 * max(1.0, abs(self.q3)):
            raise InputError("iqr must equal q3 - q1")
        if not (self.whisker_low <= self.whisker_high):
            raise InputError("whiskers out of order")
        if self.seeds is not None:
            seeds = np.asarray(self.seeds, dtype=np.uint64)
            if len(seeds) != len(samples):
                raise InputError("seeds must match samples one to one")
            object.__setattr__(self, "seeds", seeds)

    @classmethod
    def from_samples(
        cls,
        phase_id: int,
        description: str,
        samples,
        seeds=None,
    ) -> "PhaseReport":
        st = boxplot_stats(samples)
        return cls(
            phase_id,
            description,
            np.asarray(samples, dtype=np.float64),
            st.median,
            st.q1,
            st.q3,
            st.iqr,
            st.whisker_low,
            st.whisker_high,
            st.outliers,
            seeds,
        )


@dataclass(frozen=True)
class ExperimentReport:
    """Per-class phase reports for one insertion experiment."""

    dataset: str
    params: AcoParams
    repetitions: int
    target_class: int
    normalize: str  # "none" or "per-edge"
    class_reports: tuple[tuple[PhaseReport, ...], ...]

    def __post_init__(self):
        if not self.class_reports:
            raise InputError("experiment report needs at least one class")
        for phases in self.class_reports:
            for rep in phases:
                if len(rep.samples) != self.repetitions:
                    raise InputError(
                        f"phase {rep.phase_id} holds {len(rep.samples)} samples, "
                        f"expected {self.repetitions}"
                    )


def aco_feature(net: ClassNetwork, params: AcoParams) -> float:
    """The network's feature value: best path length of one seeded run."""
    return solve(net, params).length


def _validate_phases(phases: list[PhaseSpec]) -> None:
    if not phases:
        raise InputError("at least one phase is required")
    ids = [p.phase_id for p in phases]
    if len(set(ids)) != len(ids):
        raise InputError(f"phase ids must be unique, got {ids}")
    if not any(p.description == "baseline" for p in phases):
        raise InputError("a baseline phase is required")


def _phase_samples(
    net: ClassNetwork, phase: PhaseSpec, params: AcoParams, repetitions: int,
    normalize_per_edge: bool,
) -> tuple[np.ndarray, np.ndarray]:
    """R solver runs on the phase's perturbed network, one derived seed per
    repetition."""
    net_p = insert_points(net, phase.points)
    samples = np.empty(repetitions, dtype=np.float64)
    seeds = np.empty(repetitions, dtype=np.uint64)
    for rep in range(repetitions):
        child = params.seed.derive(phase.phase_id, rep)
        seeds[rep] = child.seed
        samples[rep] = solve(net_p, with_seed(params, child)).length
    if normalize_per_edge and len(net_p) > 1:
        samples /= len(net_p) - 1
    return samples, seeds


def run_insertion_protocol(
    net: ClassNetwork,
    phases: list[PhaseSpec],
    params: AcoParams,
    repetitions: int,
    normalize_per_edge: bool = False,
) -> list[PhaseReport]:
    """Measure the feature distribution per phase: insert the phase's points,
    run the solver `repetitions` times with seeds derived from
    (params.seed, phase_id, repetition), and summarize. The input network is
    never mutated."""
    if repetitions < 1:
        raise InputError("repetitions must be >= 1")
    _validate_phases(phases)
    reports = []
    for phase in phases:
        samples, seeds = _phase_samples(
            net, phase, params, repetitions, normalize_per_edge
        )
        reports.append(
            PhaseReport.from_samples(phase.phase_id, phase.description, samples, seeds)
        )
    return reports


def combine_scores(c: float, h: float, lam: float) -> float:
    """Convex combination (1-lam)*c + lam*h of a low-level and a high-level
    classification score."""
    for name, v in (("c", c), ("h", h), ("lambda", lam)):
        if not (0.0 <= v <= 1.0):
            raise InputError(f"{name} must lie in [0, 1], got {v}")
    return (1.0 - lam) * c + lam * h


def _class_stats(ds: LabeledDataset, class_id: int) -> tuple[np.ndarray, np.ndarray]:
    pts = ds.points[ds.labels == class_id]
    return pts.mean(axis=0), pts.std(axis=0)


def farthest_other_class(ds: LabeledDataset, target_class: int) -> int:
    """The class whose centroid lies farthest from the target's centroid."""
    if ds.n_classes < 2:
        raise InputError("need at least two classes")
    if not (0 <= target_class < ds.n_classes):
        raise InputError(f"target class {target_class} out of range")
    mu_t, _ = _class_stats(ds, target_class)
    best, best_d = -1, -1.0
    for c in range(ds.n_classes):
        if c == target_class:
            continue
        mu_c, _ = _class_stats(ds, c)
        d = float(np.sqrt(((mu_c - mu_t) ** 2).sum()))
        if d > best_d:
            best, best_d = c, d
    return best


def generate_default_phases(
    ds: LabeledDataset,
    target_class: int,
    seed: RngSeed,
    points_per_phase: int = 5,
    near_lo: float = 2.0,
    near_hi: float = 3.0,
) -> list[PhaseSpec]:
    """The five canonical phases for a target class, with insertion points
    derived from the data:

    1. baseline — nothing inserted;
    2. same_class — draws from the target class's fitted Gaussian;
    3. near — points at near_lo..near_hi class-scale units from the target
       centroid along random directions (class scale = RMS of per-dimension
       standard deviations);
    4. intermediate — the midpoint between the target centroid and the
       farthest other class's centroid, plus class-scale jitter;
    5. far_or_other_class — draws from the farthest other class's fitted
       Gaussian.

    Draw order is fixed (phase 2 normals, phase 3 directions then radii,
    phase 4 normals, phase 5 normals), so a seed fully determines the points.
    """
    if points_per_phase < 1:
        raise InputError("points_per_phase must be >= 1")
    if not (0.0 <= near_lo <= near_hi):
        raise InputError("need 0 <= near_lo <= near_hi")
    other = farthest_other_class(ds, target_class)
    mu_t, sigma_t = _class_stats(ds, target_class)
    mu_o, sigma_o = _class_stats(ds, other)
    scale_t = float(np.sqrt((sigma_t**2).mean()))
    d = ds.dim
    k = points_per_phase
    gen = seed.generator(_PHASE_GEN_STREAM, target_class)

    same = mu_t + standard_normals(gen, k * d).reshape(k, d) * sigma_t

    dirs = standard_normals(gen, k * d).reshape(k, d)
    norms = np.sqrt((dirs**2).sum(axis=1))
    norms[norms == 0.0] = 1.0
    dirs /= norms[:, None]
    radii = (near_lo + (near_hi - near_lo) * gen.random(k)) * scale_t
    near = mu_t + dirs * radii[:, None]

    mid = (mu_t + mu_o) / 2.0
    intermediate = mid + standard_normals(gen, k * d).reshape(k, d) * scale_t

    far = mu_o + standard_normals(gen, k * d).reshape(k, d) * sigma_o

    return [
        baseline_phase(),
        PhaseSpec(2, "same_class", same),
        PhaseSpec(3, "near", near),
        PhaseSpec(4, "intermediate", intermediate),
        PhaseSpec(5, "far_or_other_class", far),
    ]


def sample_class_members(
    ds: LabeledDataset, class_id: int, k: int, seed: RngSeed
) -> np.ndarray:
    """k member points of the class, sampled without replacement when the
    class is large enough (with replacement otherwise)."""
    if not (0 <= class_id < ds.n_classes):
        raise InputError(f"class {class_id} out of range")
    if k < 1:
        raise InputError("k must be >= 1")
    pts = ds.points[ds.labels == class_id]
    rng = seed.generator(_MEMBER_SAMPLE_STREAM, class_id)
    idx = rng.choice(len(pts), size=k, replace=k > len(pts))
    return pts[np.sort(idx)].copy()


def _strip_insertions(phases: list[PhaseSpec]) -> list[PhaseSpec]:
    return [PhaseSpec(p.phase_id, p.description, np.zeros((0, 0))) for p in phases]


def _experiment_job(args):
    class_index, phase_index, net, phase, params, repetitions, norm = args
    samples, seeds = _phase_samples(net, phase, params, repetitions, norm)
    return class_index, phase_index, samples, seeds


def run_experiment(
    ds: LabeledDataset,
    params: AcoParams,
    repetitions: int = 30,
    target_class: int = 0,
    phases: list[PhaseSpec] | None = None,
    points_per_phase: int = 5,
    near_lo: float = 2.0,
    near_hi: float = 3.0,
    normalize_per_edge: bool = False,
    dataset_name: str = "dataset",
    workers: int | None = None,
    progress=None,
) -> ExperimentReport:
    """The full insertion experiment over every class of the dataset.

    Insertions perturb only the target class's network; every other class is
    re-measured unperturbed in each phase, so its reports show the feature's
    run-to-run spread on an unchanged network. Per-class solver streams are
    independent (class c runs under seed.derive(c)), and each (class, phase,
    repetition) cell has its own derived seed, so reports are reproducible
    bit for bit regardless of `workers`.

    `progress`, if given, is called with a line of text as each (class,
    phase) cell completes.
    """
    if repetitions < 1:
        raise InputError("repetitions must be >= 1")
    networks = build_class_networks(ds)
    if phases is None:
        phases = generate_default_phases(
            ds, target_class, params.seed, points_per_phase, near_lo, near_hi
        )
    _validate_phases(phases)
    empty_phases = _strip_insertions(phases)

    jobs = []
    for ci, net in enumerate(networks):
        class_params = with_seed(params, params.seed.derive(ci))
        class_phases = phases if ci == target_class else empty_phases
        for pi, phase in enumerate(class_phases):
            jobs.append(
                (ci, pi, net, phase, class_params, repetitions, normalize_per_edge)
            )

    results: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}
    n_workers = _resolve_workers(workers)
    if n_workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            for ci, pi, samples, seeds in pool.map(_experiment_job, jobs):
                results[(ci, pi)] = (samples, seeds)
                if progress is not None:
                    progress(_progress_line(ci, pi, phases))
    else:
        for job in jobs:
            ci, pi, samples, seeds = _experiment_job(job)
            results[(ci, pi)] = (samples, seeds)
            if progress is not None:
                progress(_progress_line(ci, pi, phases))

    class_reports = []
    for ci in range(len(networks)):
        class_phases = phases if ci == target_class else empty_phases
        reports = tuple(
            PhaseReport.from_samples(
                phase.phase_id, phase.description, *results[(ci, pi)]
            )
            for pi, phase in enumerate(class_phases)
        )
        class_reports.append(reports)

    return ExperimentReport(
        dataset=dataset_name,
        params=params,
        repetitions=repetitions,
        target_class=target_class,
        normalize="per-edge" if normalize_per_edge else "none",
        class_reports=tuple(class_reports),
    )


def _progress_line(ci: int, pi: int, phases: list[PhaseSpec]) -> str:
    return f"class {ci}: phase {pi + 1}/{len(phases)} done"


def _resolve_workers(workers: int | None) -> int:
    if workers is None:
        return 1
    if workers < 0:
        raise InputError("workers must be >= 0")
    if workers == 0:
        return os.cpu_count() or 1
    return workers


# --- serialization -----------------------------------------------------------


def _params_to_dict(params: AcoParams) -> dict:
    return {
        "alpha": params.alpha,
        "beta": params.beta,
        "rho": params.rho,
        "n_ants": params.n_ants,
        "n_iters": params.n_iters,
        "tau0": params.tau0,
        "mode": params.mode,
        "seed": params.seed.seed,
    }


def _params_from_dict(d: dict) -> AcoParams:
    return AcoParams(
        alpha=d["alpha"],
        beta=d["beta"],
        rho=d["rho"],
        n_ants=d["n_ants"],
        n_iters=d["n_iters"],
        tau0=d["tau0"],
        mode=d["mode"],
        seed=RngSeed(d["seed"]),
    )


def report_to_dict(report: ExperimentReport) -> dict:
    return {
        "dataset": report.dataset,
        "params": _params_to_dict(report.params),
        "repetitions": report.repetitions,
        "target_class": report.target_class,
        "normalize": report.normalize,
        "classes": [
            {
                "class_id": ci,
                "phases": [
                    {
                        "phase_id": rep.phase_id,
                        "description": rep.description,
                        "samples": [float(v) for v in rep.samples],
                        "seeds": (
                            [int(s) for s in rep.seeds]
                            if rep.seeds is not None
                            else None
                        ),
                        "median": rep.median,
                        "q1": rep.q1,
                        "q3": rep.q3,
                        "iqr": rep.iqr,
                        "whisker_low": rep.whisker_low,
                        "whisker_high": rep.whisker_high,
                        "outliers": list(rep.outliers),
                    }
                    for rep in phases
                ],
            }
            for ci, phases in enumerate(report.class_reports)
        ],
    }


def report_from_dict(d: dict) -> ExperimentReport:
    try:
        classes = sorted(d["classes"], key=lambda c: c["class_id"])
        class_reports = tuple(
            tuple(
                PhaseReport(
                    phase_id=p["phase_id"],
                    description=p["description"],
                    samples=np.asarray(p["samples"], dtype=np.float64),
                    median=p["median"],
                    q1=p["q1"],
                    q3=p["q3"],
                    iqr=p["iqr"],
                    whisker_low=p["whisker_low"],
                    whisker_high=p["whisker_high"],
                    outliers=tuple(p["outliers"]),
                    seeds=(
                        np.asarray(p["seeds"], dtype=np.uint64)
                        if p.get("seeds") is not None
                        else None
                    ),
                )
                for p in c["phases"]
            )
            for c in classes
        )
        return ExperimentReport(
            dataset=d["dataset"],
            params=_params_from_dict(d["params"]),
            repetitions=d["repetitions"],
            target_class=d["target_class"],
            normalize=d.get("normalize", "none"),
            class_reports=class_reports,
        )
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed report JSON: {exc}") from exc


def write_report_json(report: ExperimentReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report_to_dict(report), fh, indent=2)
        fh.write("\n")


def read_report_json(path) -> ExperimentReport:
    with open(path, encoding="utf-8") as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: not valid JSON ({exc})") from exc
    return report_from_dict(d)


def write_report_csv(report: ExperimentReport, path) -> None:
    """Flat per-sample rows: class, phase, repetition, seed, length."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["class", "phase", "repetition", "seed", "length"])
        for ci, phases in enumerate(report.class_reports):
            for rep in phases:
                seeds = (
                    rep.seeds
                    if rep.seeds is not None
                    else np.zeros(len(rep.samples), dtype=np.uint64)
                )
                for r, (s, length) in enumerate(zip(seeds, rep.samples)):
                    writer.writerow([ci, rep.phase_id, r, int(s), repr(float(length))])
