"""Shared domain types: points, labeled datasets, distance matrices, seeded RNG."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class AntnetError(Exception):
    """Base class for every error this package raises on purpose."""


class InputError(AntnetError, ValueError):
    """Invalid caller-supplied data (bad shapes, ranges, files, flags)."""


class LogicError(AntnetError, RuntimeError):
    """An operation was invoked in a state it does not support."""


class NumericError(AntnetError, ArithmeticError):
    """A computation degenerated (zero/non-finite weights, zero-cost division)."""


def as_points(points) -> np.ndarray:
    """Coerce a sequence of points to a float64 (n, d) array and validate it.

    Every point must have the same dimensionality d >= 1 and all
    coordinates must be finite.
    """
    try:
        arr = np.asarray(points, dtype=np.float64)
    except (ValueError, TypeError) as exc:
        raise InputError(f"points are not a uniform numeric array: {exc}") from None
    if arr.ndim == 1:
        # single point
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise InputError(
            f"points must form an (n, d) array with d >= 1, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise InputError("points contain NaN or infinite coordinates")
    return arr


def euclidean_distance(a, b) -> float:
    """Euclidean distance between two points of equal dimensionality."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise InputError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise InputError("points contain NaN or infinite coordinates")
    return float(np.sqrt(np.sum((a - b) ** 2)))


def pairwise_distances(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """All Euclidean distances between rows of xs and rows of ys.

    The broadcasted (x-y)**2 formulation makes pairwise_distances(p, p)
    exactly symmetric with an exactly zero diagonal.
    """
    d2 = ((xs[:, None, :] - ys[None, :, :]) ** 2).sum(axis=-1)
    return np.sqrt(d2)


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric matrix of pairwise Euclidean distances with zero diagonal."""

    values: np.ndarray

    def __post_init__(self):
        v = self.values
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise InputError(f"distance matrix must be square, got {v.shape}")
        if np.any(np.diag(v) != 0.0):
            raise InputError("distance matrix diagonal must be zero")
        if not np.array_equal(v, v.T):
            raise InputError("distance matrix must be symmetric")
        if np.any(v < 0.0) or not np.all(np.isfinite(v)):
            raise InputError("distances must be finite and non-negative")

    @property
    def n(self) -> int:
        return self.values.shape[0]


def build_distance_matrix(points) -> DistanceMatrix:
    """Pairwise Euclidean distance matrix over a non-empty point set."""
    pts = as_points(points)
    if pts.shape[0] == 0:
        raise InputError("cannot build a distance matrix from zero points")
    return DistanceMatrix(pairwise_distances(pts, pts))


@dataclass(frozen=True)
class LabeledDataset:
    """Points in d-dimensional space with contiguous integer class labels.

    Labels must cover {0, ..., c-1} with every class non-empty.
    """

    points: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        pts = as_points(self.points)
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labels)
        if labels.ndim != 1 or len(labels) != len(pts):
            raise InputError(
                f"labels length {labels.shape} does not match {len(pts)} points"
            )
        if len(labels) == 0:
            raise InputError("dataset must contain at least one point")
        present = np.unique(labels)
        if present[0] != 0 or not np.array_equal(present, np.arange(len(present))):
            raise InputError(
                f"labels must be contiguous 0..c-1 with no empty class, got {present.tolist()}"
            )

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def n_classes(self) -> int:
        return int(self.labels.max()) + 1

    def class_counts(self) -> list[int]:
        return np.bincount(self.labels, minlength=self.n_classes).tolist()


def concat_datasets(fragments) -> LabeledDataset:
    """Stack dataset fragments; labels are taken as-is and must end up contiguous."""
    frags = list(fragments)
    if not frags:
        raise InputError("no fragments to concatenate")
    pts = np.vstack([f.points for f in frags])
    labels = np.concatenate([f.labels for f in frags])
    return LabeledDataset(pts, labels)


def zscore_normalize(ds: LabeledDataset) -> LabeledDataset:
    """Normalize every feature column to mean 0, population std 1.

    Constant columns map to all zeros. Labels are unchanged. Idempotent
    up to floating-point noise.
    """
    pts = ds.points
    mean = pts.mean(axis=0)
    std = pts.std(axis=0)  # population convention (divide by n)
    std_safe = np.where(std > 0.0, std, 1.0)
    out = (pts - mean) / std_safe
    out[:, std == 0.0] = 0.0
    return LabeledDataset(out, ds.labels.copy())


@dataclass(frozen=True)
class RngSeed:
    """64-bit base seed; every random stream in a run derives from one of these.

    Substreams are derived with numpy's SeedSequence spawn keys, so an
    identical seed plus identical inputs reproduces any run bit for bit.
    """

    seed: int = 0

    def __post_init__(self):
        if not (0 <= int(self.seed) < 2**64):
            raise InputError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        object.__setattr__(self, "seed", int(self.seed))

    def generator(self, *path: int) -> np.random.Generator:
        """A Generator for the substream addressed by `path`."""
        ss = np.random.SeedSequence(self.seed, spawn_key=tuple(int(p) for p in path))
        return np.random.default_rng(ss)

    def derive(self, *path: int) -> "RngSeed":
        """A child seed for the substream addressed by `path`."""
        ss = np.random.SeedSequence(self.seed, spawn_key=tuple(int(p) for p in path))
        return RngSeed(int(ss.generate_state(1, np.uint64)[0]))


def standard_normals(rng: np.random.Generator, count: int) -> np.ndarray:
    """Draw `count` standard normals via the Box-Muller transform.

    Spelled out (rather than rng.normal) so identical seeds give identical
    samples regardless of the platform's normal-variate algorithm.
    """
    if count <= 0:
        return np.zeros(0)
    pairs = (count + 1) // 2
    u1 = 1.0 - rng.random(pairs)  # (0, 1]: keeps log() finite
    u2 = rng.random(pairs)
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.empty(2 * pairs)
    z[0::2] = r * np.cos(2.0 * np.pi * u2)
    z[1::2] = r * np.sin(2.0 * np.pi * u2)
    return z[:count]
