"""Flat key-value configuration: the text format shared by experiment config
files and dataset presets, plus the resolved experiment configuration."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

from .aco import CLOSED_TOUR, OPEN_PATH, AcoParams
from .core import InputError, RngSeed

OUTPUT_FORMATS = ("json", "csv", "svg")
LABEL_MODES = ("true", "kmeans")
NORMALIZE_MODES = ("none", "per-edge")
ZSCORE_MODES = ("auto", "true", "false")


def parse_kv_text(text: str, source: str = "<config>") -> dict[str, str]:
    """Parse `key = value` lines. '#' starts a comment anywhere; blank lines
    are skipped; duplicate keys are an error."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{source}, line {lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key:
            raise InputError(f"{source}, line {lineno}: empty key")
        if key in out:
            raise InputError(f"{source}, line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def parse_floats(value: str, source: str = "<value>") -> tuple[float, ...]:
    """A list of reals separated by commas and/or whitespace."""
    parts = [p for p in value.replace(",", " ").split() if p]
    if not parts:
        raise InputError(f"{source}: expected at least one number")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from None


def parse_bool(value: str, source: str = "<value>") -> bool:
    low = value.strip().lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise InputError(f"{source}: expected a boolean, got {value!r}")


class _Required:
    pass


_REQUIRED = _Required()


class KvReader:
    """Typed access over a parsed key-value dict, tracking consumed keys so
    typos can be reported. Getters without an explicit default treat the key
    as required."""

    def __init__(self, kv: dict[str, str], source: str = "<config>"):
        self.kv = dict(kv)
        self.source = source
        self.consumed: set[str] = set()

    def has(self, key: str) -> bool:
        return key in self.kv

    def _raw(self, key: str, default):
        self.consumed.add(key)
        if key not in self.kv:
            if default is _REQUIRED:
                raise InputError(f"{self.source}: missing required key {key!r}")
            return None
        return self.kv[key]

    def get_str(self, key: str, default=_REQUIRED, choices=None):
        raw = self._raw(key, default)
        value = default if raw is None else raw
        if value is not None and choices is not None and value not in choices:
            raise InputError(
                f"{self.source}: {key} must be one of {choices}, got {value!r}"
            )
        return value

    def get_int(self, key: str, default=_REQUIRED):
        raw = self._raw(key, default)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise InputError(
                f"{self.source}: {key} must be an integer, got {raw!r}"
            ) from None

    def get_float(self, key: str, default=_REQUIRED):
        raw = self._raw(key, default)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            raise InputError(
                f"{self.source}: {key} must be a number, got {raw!r}"
            ) from None

    def get_bool(self, key: str, default=_REQUIRED):
        raw = self._raw(key, default)
        if raw is None:
            return default
        return parse_bool(raw, f"{self.source}: {key}")

    def get_floats(self, key: str, default=_REQUIRED):
        raw = self._raw(key, default)
        if raw is None:
            return default
        return parse_floats(raw, f"{self.source}: {key}")

    def reject_unknown(self) -> None:
        unknown = sorted(set(self.kv) - self.consumed)
        if unknown:
            raise InputError(f"{self.source}: unknown keys {unknown}")


def parse_formats(value: str, source: str = "<config>") -> tuple[str, ...]:
    parts = [p.strip() for p in value.replace(",", " ").split() if p.strip()]
    if not parts:
        raise InputError(f"{source}: at least one output format is required")
    seen: list[str] = []
    for p in parts:
        if p not in OUTPUT_FORMATS:
            raise InputError(
                f"{source}: unknown format {p!r}, valid formats: {OUTPUT_FORMATS}"
            )
        if p not in seen:
            seen.append(p)
    return tuple(seen)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything cmd_run needs, resolved from defaults, a config file, and
    command-line flags (flags win, then file, then defaults)."""

    dataset: str = "dataset1"
    has_header: bool = False
    label_column: int = -1
    labels: str = "true"  # "true" (use dataset labels) or "kmeans"
    k: int = 0  # kmeans cluster count; 0 = number of dataset classes
    zscore: str = "auto"  # auto: z-score CSV data, leave generated data raw
    seed: int = 0
    alpha: float = 1.0
    beta: float = 2.0
    rho: float = 0.1
    ants: int = 0  # 0 = auto (min(n, 20))
    iters: int = 200
    tau0: float = 0.0  # 0 = auto (1 / (n * nearest-neighbor length))
    mode: str = OPEN_PATH
    reps: int = 30
    target_class: int = 0
    insert_count: int = 5
    near_lo: float = 2.0
    near_hi: float = 3.0
    normalize: str = "none"
    phases: tuple[int, ...] = (1, 2, 3, 4, 5)
    out: str = "out"
    formats: tuple[str, ...] = ("json", "csv", "svg")

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple(int(p) for p in self.phases))
        if len(set(self.phases)) != len(self.phases):
            raise InputError("phases must be unique")
        if any(not (1 <= p <= 5) for p in self.phases):
            raise InputError("phase ids must lie in 1..5")
        if 1 not in self.phases:
            raise InputError("the baseline phase (1) is required")
        if self.labels not in LABEL_MODES:
            raise InputError(f"labels must be one of {LABEL_MODES}")
        if self.zscore not in ZSCORE_MODES:
            raise InputError(f"zscore must be one of {ZSCORE_MODES}")
        if self.normalize not in NORMALIZE_MODES:
            raise InputError(f"normalize must be one of {NORMALIZE_MODES}")
        if self.mode not in (OPEN_PATH, CLOSED_TOUR):
            raise InputError(f"mode must be {OPEN_PATH!r} or {CLOSED_TOUR!r}")
        if not self.formats:
            raise InputError("at least one output format is required")
        for f in self.formats:
            if f not in OUTPUT_FORMATS:
                raise InputError(f"unknown output format {f!r}")
        if self.k < 0:
            raise InputError("k must be >= 0 (0 = number of classes)")
        if self.reps < 1:
            raise InputError("reps must be >= 1")
        if self.target_class < 0:
            raise InputError("target_class must be >= 0")

    def to_aco_params(self) -> AcoParams:
        return AcoParams(
            alpha=self.alpha,
            beta=self.beta,
            rho=self.rho,
            n_ants=self.ants if self.ants > 0 else None,
            n_iters=self.iters,
            tau0=self.tau0 if self.tau0 > 0 else None,
            mode=self.mode,
            seed=RngSeed(self.seed),
        )


def config_from_file_text(text: str, source: str = "<config>") -> ExperimentConfig:
    """Build an ExperimentConfig from config-file text; missing keys keep
    their defaults, unknown keys are an error."""
    reader = KvReader(parse_kv_text(text, source), source)
    base = ExperimentConfig()
    values = {
        "dataset": reader.get_str("dataset", base.dataset),
        "has_header": reader.get_bool("has_header", base.has_header),
        "label_column": reader.get_int("label_column", base.label_column),
        "labels": reader.get_str("labels", base.labels),
        "k": reader.get_int("k", base.k),
        "zscore": reader.get_str("zscore", base.zscore),
        "seed": reader.get_int("seed", base.seed),
        "alpha": reader.get_float("alpha", base.alpha),
        "beta": reader.get_float("beta", base.beta),
        "rho": reader.get_float("rho", base.rho),
        "ants": reader.get_int("ants", base.ants),
        "iters": reader.get_int("iters", base.iters),
        "tau0": reader.get_float("tau0", base.tau0),
        "mode": reader.get_str("mode", base.mode),
        "reps": reader.get_int("reps", base.reps),
        "target_class": reader.get_int("target_class", base.target_class),
        "insert_count": reader.get_int("insert_count", base.insert_count),
        "near_lo": reader.get_float("near_lo", base.near_lo),
        "near_hi": reader.get_float("near_hi", base.near_hi),
        "normalize": reader.get_str("normalize", base.normalize),
        "out": reader.get_str("out", base.out),
    }
    if reader.has("formats"):
        values["formats"] = parse_formats(reader.get_str("formats"), source)
    if reader.has("phases"):
        raw = reader.get_str("phases")
        try:
            values["phases"] = tuple(
                sorted(int(p) for p in raw.replace(",", " ").split())
            )
        except ValueError:
            raise InputError(
                f"{source}: phases must be integers, got {raw!r}"
            ) from None
    reader.reject_unknown()
    return ExperimentConfig(**values)


def apply_overrides(cfg: ExperimentConfig, overrides: dict) -> ExperimentConfig:
    """Return cfg with every non-None override applied (flags beat file)."""
    known = {f.name for f in fields(ExperimentConfig)}
    clean = {}
    for key, value in overrides.items():
        if key not in known:
            raise InputError(f"unknown config field {key!r}")
        if value is not None:
            clean[key] = value
    return replace(cfg, **clean) if clean else cfg
