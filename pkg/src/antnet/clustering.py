"""Lloyd's k-means with k-means++ seeding, used to label instances before
network construction."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import InputError, RngSeed, as_points


@dataclass(frozen=True)
class KMeansConfig:
    k: int
    max_iters: int = 300
    tol: float = 1e-6
    seed: RngSeed = RngSeed(0)

    def __post_init__(self):
        if self.k < 1:
            raise InputError("k must be >= 1")
        if self.max_iters < 1:
            raise InputError("max_iters must be >= 1")
        if self.tol < 0:
            raise InputError("tol must be non-negative")


@dataclass(frozen=True)
class KMeansResult:
    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    iterations_run: int
    # inertia after each assignment step, for monotonicity checks
    inertia_history: tuple[float, ...] = field(default=())


def _plusplus_seeding(pts: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++: first centroid uniform, the rest proportional to squared
    distance from the nearest chosen centroid."""
    n = len(pts)
    chosen = np.zeros(n, dtype=bool)
    idx = int(rng.integers(n))
    centers = [idx]
    chosen[idx] = True
    d2 = ((pts - pts[idx]) ** 2).sum(axis=1)
    for _ in range(k - 1):
        total = d2.sum()
        if total > 0.0:
            idx = int(rng.choice(n, p=d2 / total))
            if chosen[idx]:  # duplicate coordinates; fall back to an unchosen index
                idx = int(np.flatnonzero(~chosen)[0])
        else:
            idx = int(np.flatnonzero(~chosen)[0])
        centers.append(idx)
        chosen[idx] = True
        d2 = np.minimum(d2, ((pts - pts[idx]) ** 2).sum(axis=1))
    return pts[np.array(centers)].copy()


def _assign(pts: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d2 = ((pts[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=-1)
    labels = np.argmin(d2, axis=1)
    return labels, d2[np.arange(len(pts)), labels]


def _repair_empty(labels: np.ndarray, point_d2: np.ndarray, k: int) -> np.ndarray:
    """Give every empty cluster the point currently farthest from its
    centroid, never raiding a singleton cluster."""
    labels = labels.copy()
    d2 = point_d2.copy()
    counts = np.bincount(labels, minlength=k)
    for empty in np.flatnonzero(counts == 0):
        movable = counts[labels] > 1
        if not movable.any():
            continue
        cand = np.where(movable, d2, -np.inf)
        mover = int(np.argmax(cand))
        counts[labels[mover]] -= 1
        counts[empty] += 1
        labels[mover] = empty
        d2[mover] = -np.inf
    return labels


def kmeans(points, cfg: KMeansConfig) -> KMeansResult:
    """Lloyd's algorithm; stops when the largest centroid shift drops below
    cfg.tol or after cfg.max_iters iterations."""
    pts = as_points(points)
    n = len(pts)
    if cfg.k > n:
        raise InputError(f"k={cfg.k} exceeds the {n} available points")

    rng = cfg.seed.generator()
    centroids = _plusplus_seeding(pts, cfg.k, rng)
    history: list[float] = []
    labels = np.zeros(n, dtype=np.int64)
    iterations = 0

    for _ in range(cfg.max_iters):
        labels, point_d2 = _assign(pts, centroids)
        labels = _repair_empty(labels, point_d2, cfg.k)
        diffs = pts - centroids[labels]
        history.append(float((diffs * diffs).sum()))
        new_centroids = np.stack(
            [pts[labels == j].mean(axis=0) for j in range(cfg.k)]
        )
        shift = float(np.sqrt(((new_centroids - centroids) ** 2).sum(axis=1)).max())
        centroids = new_centroids
        iterations += 1
        if shift < cfg.tol:
            break

    # final assignment so every label points at its nearest centroid
    labels, point_d2 = _assign(pts, centroids)
    labels = _repair_empty(labels, point_d2, cfg.k)
    diffs = pts - centroids[labels]
    inertia = float((diffs * diffs).sum())
    history.append(inertia)

    return KMeansResult(
        labels=labels,
        centroids=centroids,
        inertia=inertia,
        iterations_run=iterations,
        inertia_history=tuple(history),
    )


def majority_vote_mapping(cluster_labels, true_labels) -> dict[int, int]:
    """Bijective cluster-to-class relabeling by overlap counts, largest first.

    Reporting aid only (it never changes which network a point lands in);
    requires as many clusters as classes so the relabeling stays contiguous.
    Clusters left without a majority match pair up with the unused classes
    in ascending order.
    """
    cl = np.asarray(cluster_labels, dtype=np.int64)
    tl = np.asarray(true_labels, dtype=np.int64)
    k = int(cl.max()) + 1
    if int(tl.max()) + 1 != k:
        raise InputError(
            f"majority-vote relabeling needs equal counts, got {k} clusters "
            f"vs {int(tl.max()) + 1} classes"
        )
    pairs = []
    for c in range(k):
        classes, counts = np.unique(tl[cl == c], return_counts=True)
        for cls, cnt in zip(classes, counts):
            pairs.append((int(cnt), c, int(cls)))
    pairs.sort(key=lambda t: (-t[0], t[1], t[2]))
    mapping: dict[int, int] = {}
    used: set[int] = set()
    for _, c, cls in pairs:
        if c in mapping or cls in used:
            continue
        mapping[c] = cls
        used.add(cls)
    leftovers = iter(sorted(set(range(k)) - used))
    for c in range(k):
        if c not in mapping:
            mapping[c] = next(leftovers)
    return mapping
