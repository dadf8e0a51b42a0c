"""Synthetic dataset generators (Gaussian blobs, lines, circles, polygons)
and CSV load/save for labeled tabular data."""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass

import numpy as np

from .core import (
    InputError,
    LabeledDataset,
    RngSeed,
    as_points,
    concat_datasets,
    standard_normals,
)

LINE = "line"
CIRCLE_BLOB = "circle_blob"
POLYGON = "polygon"
SHAPE_KINDS = (LINE, CIRCLE_BLOB, POLYGON)


@dataclass(frozen=True)
class Fragment:
    """One generated class's worth of points, before assembly into a dataset.

    Unlike LabeledDataset, a fragment may carry any single label value (a
    class-2 fragment on its own is fine); concatenating fragments for every
    class yields a valid LabeledDataset.
    """

    points: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        pts = as_points(self.points)
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labels)
        if labels.ndim != 1 or len(labels) != len(pts):
            raise InputError("labels must match points one to one")
        if len(labels) and labels.min() < 0:
            raise InputError("labels must be non-negative")


@dataclass(frozen=True)
class GaussianBlobSpec:
    """An axis-aligned Gaussian cloud: coordinate j ~ Normal(mu[j], sigma[j])."""

    mu: tuple[float, ...]
    sigma: tuple[float, ...]
    n: int
    label: int

    def __post_init__(self):
        object.__setattr__(self, "mu", tuple(float(x) for x in self.mu))
        object.__setattr__(self, "sigma", tuple(float(s) for s in self.sigma))
        if len(self.mu) < 1:
            raise InputError("mu must have at least one coordinate")
        if len(self.sigma) != len(self.mu):
            raise InputError(
                f"sigma has {len(self.sigma)} entries for a {len(self.mu)}-dim mu"
            )
        if any(s < 0 for s in self.sigma):
            raise InputError("sigma entries must be non-negative")
        if self.n < 1:
            raise InputError("n must be positive")
        if self.label < 0:
            raise InputError("label must be a non-negative integer")


def _as_xy(value, what: str) -> tuple[float, float]:
    coords = tuple(float(x) for x in value)
    if len(coords) != 2:
        raise InputError(f"{what} must be a 2-d point, got {len(coords)} coordinates")
    return coords


@dataclass(frozen=True)
class ShapeSpec:
    """A noisy 2-d geometric pattern: points uniform along a line segment,
    inside a disk, or along a polygon perimeter, plus isotropic Gaussian
    noise."""

    kind: str
    n: int
    label: int
    noise_sigma: float = 0.0
    start: tuple[float, float] | None = None  # line
    end: tuple[float, float] | None = None  # line
    center: tuple[float, float] | None = None  # circle_blob
    radius: float | None = None  # circle_blob
    vertices: tuple[tuple[float, float], ...] | None = None  # polygon

    def __post_init__(self):
        if self.kind not in SHAPE_KINDS:
            raise InputError(f"kind must be one of {SHAPE_KINDS}, got {self.kind!r}")
        if self.n < 1:
            raise InputError("n must be positive")
        if self.label < 0:
            raise InputError("label must be a non-negative integer")
        if self.noise_sigma < 0:
            raise InputError("noise_sigma must be non-negative")
        if self.kind == LINE:
            if self.start is None or self.end is None:
                raise InputError("line needs start and end points")
            object.__setattr__(self, "start", _as_xy(self.start, "start"))
            object.__setattr__(self, "end", _as_xy(self.end, "end"))
            if self.start == self.end:
                raise InputError("line endpoints must be distinct")
        elif self.kind == CIRCLE_BLOB:
            if self.center is None or self.radius is None:
                raise InputError("circle_blob needs center and radius")
            object.__setattr__(self, "center", _as_xy(self.center, "center"))
            if self.radius <= 0:
                raise InputError("radius must be positive")
        else:
            if self.vertices is None or len(self.vertices) < 3:
                raise InputError("polygon needs at least 3 vertices")
            object.__setattr__(
                self,
                "vertices",
                tuple(_as_xy(v, "vertex") for v in self.vertices),
            )


def gen_gaussian_blob(spec: GaussianBlobSpec, seed: RngSeed) -> Fragment:
    """n independent draws from the blob's per-coordinate normals."""
    rng = seed.generator()
    d = len(spec.mu)
    z = standard_normals(rng, spec.n * d).reshape(spec.n, d)
    pts = np.asarray(spec.mu) + z * np.asarray(spec.sigma)
    return Fragment(pts, np.full(spec.n, spec.label, dtype=np.int64))


def _perimeter_points(
    vertices: np.ndarray, positions: np.ndarray
) -> np.ndarray:
    """Map arc-length positions (in [0, perimeter)) onto the closed polyline."""
    closed = np.vstack([vertices, vertices[:1]])
    seg = closed[1:] - closed[:-1]
    seg_len = np.sqrt((seg**2).sum(axis=1))
    if not np.all(seg_len > 0):
        raise InputError("polygon has a zero-length edge")
    cum = np.concatenate(([0.0], np.cumsum(seg_len)))
    idx = np.minimum(np.searchsorted(cum, positions, side="right") - 1, len(seg) - 1)
    frac = (positions - cum[idx]) / seg_len[idx]
    return closed[idx] + frac[:, None] * seg[idx]


def gen_shape(spec: ShapeSpec, seed: RngSeed) -> Fragment:
    """Sample the shape uniformly, then add isotropic noise of noise_sigma.

    Draw order under one generator: shape-placement uniforms first, noise
    normals second, so identical seeds give identical datasets.
    """
    rng = seed.generator()
    if spec.kind == LINE:
        p0 = np.asarray(spec.start)
        p1 = np.asarray(spec.end)
        t = rng.random(spec.n)
        pts = p0 + t[:, None] * (p1 - p0)
    elif spec.kind == CIRCLE_BLOB:
        # uniform over the disk: radius ~ R*sqrt(u), angle ~ 2*pi*u
        r = spec.radius * np.sqrt(rng.random(spec.n))
        theta = 2.0 * math.pi * rng.random(spec.n)
        pts = np.asarray(spec.center) + np.column_stack(
            [r * np.cos(theta), r * np.sin(theta)]
        )
    else:
        verts = np.asarray(spec.vertices)
        closed = np.vstack([verts, verts[:1]])
        perimeter = float(np.sqrt(((closed[1:] - closed[:-1]) ** 2).sum(axis=1)).sum())
        positions = rng.random(spec.n) * perimeter
        pts = _perimeter_points(verts, positions)
    if spec.noise_sigma > 0:
        noise = standard_normals(rng, spec.n * 2).reshape(spec.n, 2)
        pts = pts + spec.noise_sigma * noise
    return Fragment(pts, np.full(spec.n, spec.label, dtype=np.int64))


def gen_dataset(
    specs: list[GaussianBlobSpec | ShapeSpec], seed: RngSeed
) -> LabeledDataset:
    """Generate every fragment (each from its own derived seed, by position)
    and concatenate them into one dataset."""
    if not specs:
        raise InputError("no generator specs given")
    frags = []
    for i, spec in enumerate(specs):
        sub = seed.derive(i)
        if isinstance(spec, GaussianBlobSpec):
            frags.append(gen_gaussian_blob(spec, sub))
        else:
            frags.append(gen_shape(spec, sub))
    return concat_datasets(frags)


def _parse_label_cell(cell: str) -> int | str:
    try:
        return int(cell)
    except ValueError:
        return cell.strip()


def load_csv(
    path: str | os.PathLike,
    has_header: bool = False,
    label_column: int | str = -1,
) -> LabeledDataset:
    """Read a delimited table of feature columns plus one label column.

    String labels map to contiguous integers in first-appearance order;
    integer labels map by ascending numeric value (so a saved dataset loads
    back with identical labels). The label column is an index (negative
    allowed) or, with a header, a column name.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    if not rows:
        raise InputError(f"{path}: empty file")

    header: list[str] | None = None
    if has_header:
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
        if not rows:
            raise InputError(f"{path}: header but no data rows")

    width = len(rows[0])
    if width < 2:
        raise InputError(f"{path}: need at least 1 feature column plus a label")

    if isinstance(label_column, str):
        if header is None:
            raise InputError(
                f"{path}: label column named {label_column!r} needs has_header=True"
            )
        try:
            label_idx = header.index(label_column)
        except ValueError:
            raise InputError(
                f"{path}: no column named {label_column!r} in header {header}"
            ) from None
    else:
        label_idx = label_column if label_column >= 0 else width + label_column
        if not (0 <= label_idx < width):
            raise InputError(
                f"{path}: label column {label_column} out of range for width {width}"
            )

    feats: list[list[float]] = []
    raw_labels: list[int | str] = []
    data_start = 2 if has_header else 1  # 1-based row numbers in error messages
    for r, row in enumerate(rows):
        rowno = r + data_start
        if len(row) != width:
            raise InputError(
                f"{path}: row {rowno} has {len(row)} cells, expected {width}"
            )
        vals = []
        for c, cell in enumerate(row):
            if c == label_idx:
                continue
            try:
                vals.append(float(cell))
            except ValueError:
                raise InputError(
                    f"{path}: row {rowno}, column {c + 1}: "
                    f"non-numeric feature value {cell!r}"
                ) from None
        feats.append(vals)
        raw_labels.append(_parse_label_cell(row[label_idx]))

    if all(isinstance(lab, int) for lab in raw_labels):
        order = sorted(set(raw_labels))
    else:
        raw_labels = [str(lab) for lab in raw_labels]
        order = list(dict.fromkeys(raw_labels))
    mapping = {lab: i for i, lab in enumerate(order)}
    labels = np.array([mapping[lab] for lab in raw_labels], dtype=np.int64)
    return LabeledDataset(np.asarray(feats, dtype=np.float64), labels)


def save_csv(
    ds: LabeledDataset, path: str | os.PathLike, has_header: bool = False
) -> None:
    """Write feature columns then the integer label, one row per instance.

    Floats are written with repr (shortest exact round-trip), so
    load_csv(save_csv(ds)) reproduces the dataset bit for bit.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if has_header:
            writer.writerow([f"x{j}" for j in range(ds.dim)] + ["label"])
        for point, label in zip(ds.points, ds.labels):
            writer.writerow([repr(float(x)) for x in point] + [int(label)])


def dataset_summary(ds: LabeledDataset) -> str:
    counts = ", ".join(
        f"class {c}: {n}" for c, n in enumerate(ds.class_counts())
    )
    return f"{len(ds.labels)} rows, dim {ds.dim}, {ds.n_classes} classes ({counts})"


# --- presets ------------------------------------------------------------------


def parse_dataset_spec(
    text: str, source: str = "<preset>"
) -> list[GaussianBlobSpec | ShapeSpec]:
    """Parse the preset key-value format into generator specs.

    Expected keys: `classes = <count>`, then per class i the block
    `class<i>.kind` plus kind-specific keys — blob: mu, sigma, n;
    line: start, end, n, noise; circle_blob: center, radius, n, noise;
    polygon: vertices (semicolon-separated "x y" pairs), n, noise.
    """
    from .config import KvReader, parse_floats, parse_kv_text

    reader = KvReader(parse_kv_text(text, source), source)
    reader.get_str("name", None)  # optional descriptive name
    n_classes = reader.get_int("classes")
    if n_classes is None or n_classes < 1:
        raise InputError(f"{source}: classes must be >= 1")
    specs: list[GaussianBlobSpec | ShapeSpec] = []
    for i in range(n_classes):
        p = f"class{i}."
        kind = reader.get_str(p + "kind", choices=("blob",) + SHAPE_KINDS)
        n = reader.get_int(p + "n", 30)
        if kind == "blob":
            mu = reader.get_floats(p + "mu")
            sigma = reader.get_floats(p + "sigma")
            specs.append(GaussianBlobSpec(mu=mu, sigma=sigma, n=n, label=i))
            continue
        noise = reader.get_float(p + "noise", 0.0)
        if kind == LINE:
            start = reader.get_floats(p + "start")
            end = reader.get_floats(p + "end")
            specs.append(
                ShapeSpec(kind=LINE, n=n, label=i, noise_sigma=noise,
                          start=start, end=end)
            )
        elif kind == CIRCLE_BLOB:
            center = reader.get_floats(p + "center")
            radius = reader.get_float(p + "radius")
            specs.append(
                ShapeSpec(kind=CIRCLE_BLOB, n=n, label=i, noise_sigma=noise,
                          center=center, radius=radius)
            )
        else:
            raw = reader.get_str(p + "vertices")
            vertices = tuple(
                tuple(parse_floats(part, f"{source}: {p}vertices"))
                for part in raw.split(";")
                if part.strip()
            )
            specs.append(
                ShapeSpec(kind=POLYGON, n=n, label=i, noise_sigma=noise,
                          vertices=vertices)
            )
    reader.reject_unknown()
    return specs


def list_presets() -> list[str]:
    """Names of the dataset presets shipped with the package."""
    from importlib import resources

    root = resources.files(__package__) / "presets"
    return sorted(
        p.name.removesuffix(".preset")
        for p in root.iterdir()
        if p.name.endswith(".preset")
    )


def load_preset(name: str) -> list[GaussianBlobSpec | ShapeSpec]:
    """Generator specs for a shipped preset, by name."""
    from importlib import resources

    path = resources.files(__package__) / "presets" / f"{name}.preset"
    if not path.is_file():
        raise InputError(
            f"unknown preset {name!r}; valid presets: {', '.join(list_presets())}"
        )
    return parse_dataset_spec(path.read_text(encoding="utf-8"), f"preset {name}")
