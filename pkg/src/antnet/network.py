"""Per-class complete networks over a labeled dataset, with point insertion."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DistanceMatrix,
    InputError,
    LabeledDataset,
    as_points,
    pairwise_distances,
)


@dataclass(frozen=True)
class ClassNetwork:
    """Complete weighted graph over one class's instances.

    Every distinct member pair carries one edge weighted by Euclidean
    distance. Immutable: insertions return new networks.
    """

    class_id: int
    members: np.ndarray
    dist: DistanceMatrix

    def __post_init__(self):
        if self.dist.n != len(self.members):
            raise InputError(
                f"distance matrix size {self.dist.n} does not match "
                f"{len(self.members)} members"
            )

    def __len__(self) -> int:
        return len(self.members)

    @classmethod
    def from_points(cls, class_id: int, points) -> "ClassNetwork":
        pts = as_points(points)
        if len(pts) == 0:
            raise InputError("a class network needs at least one member")
        return cls(class_id, pts, DistanceMatrix(pairwise_distances(pts, pts)))


def build_class_networks(ds: LabeledDataset) -> list[ClassNetwork]:
    """One complete network per class, ordered by class id."""
    return [
        ClassNetwork.from_points(c, ds.points[ds.labels == c])
        for c in range(ds.n_classes)
    ]


def insert_points(net: ClassNetwork, new_points) -> ClassNetwork:
    """A new network whose members are the originals followed by new_points.

    The original distance block is copied unchanged; only the new rows and
    columns are computed. Inserted points connect to everything, including
    each other (complete-graph semantics).
    """
    new = as_points(new_points) if len(new_points) else np.zeros((0, net.members.shape[1]))
    if new.shape[0] == 0:
        return ClassNetwork(net.class_id, net.members.copy(), net.dist)
    if new.shape[1] != net.members.shape[1]:
        raise InputError(
            f"dimension mismatch: network is {net.members.shape[1]}-d, "
            f"points are {new.shape[1]}-d"
        )
    n, k = len(net), len(new)
    values = np.zeros((n + k, n + k))
    values[:n, :n] = net.dist.values
    cross = pairwise_distances(new, net.members)
    values[n:, :n] = cross
    values[:n, n:] = cross.T
    values[n:, n:] = pairwise_distances(new, new)
    members = np.vstack([net.members, new])
    return ClassNetwork(net.class_id, members, DistanceMatrix(values))
