"""Window heuristics deciding ``< inf`` claims on finite sample sequences."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

BOUNDED = "bounded"
DIVERGING = "diverging"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class GrowthConfig:
    tol: float = 0.05
    min_slope: float = 0.01
    min_ratio: float = 2.0
    window: float = 0.25
    min_samples: int = 8

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict | None) -> "GrowthConfig":
        return cls(**data) if data else cls()


DEFAULT_GROWTH = GrowthConfig()


@dataclass(frozen=True)
class GrowthClass:
    kind: str
    estimate: float | None
    slope: float | None
    early_max: float
    late_max: float
    ratio: float
    window: int

    @property
    def bounded(self) -> bool:
        return self.kind == BOUNDED

    @property
    def diverging(self) -> bool:
        return self.kind == DIVERGING

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "GrowthClass":
        return cls(**data)


def _late_slope(late: np.ndarray, start: int) -> float:
    idx = np.arange(start, start + late.size, dtype=float)
    pos = late > 0
    if pos.sum() < 2:
        return math.nan
    x, y = idx[pos], np.log(late[pos])
    x = x - x.mean()
    return float((x * (y - y.mean())).sum() / (x * x).sum())


def classify_growth(samples, config: GrowthConfig = DEFAULT_GROWTH) -> GrowthClass:
    """Classify an ordered sequence of nonnegative values.

    The last quarter of the samples (at least two) forms the late window.
    ``Bounded`` when the late maximum stays within ``1 + tol`` of the early
    maximum; ``Diverging`` when the least-squares slope of ``log(value)``
    against the sample index over the late window exceeds ``min_slope`` and
    the late/early ratio of maxima is at least ``min_ratio``; otherwise
    ``Inconclusive``.
    """
    s = np.asarray(samples, dtype=float).ravel()
    if s.size < max(config.min_samples, 3):
        raise ValueError(f"need at least {max(config.min_samples, 3)} samples, got {s.size}")
    if (s < 0).any() or np.isnan(s).any():
        raise ValueError("samples must be nonnegative numbers")
    w = max(2, math.ceil(s.size * config.window))
    w = min(w, s.size - 1)
    early, late = s[:-w], s[-w:]
    early_max, late_max = float(early.max()), float(late.max())
    if early_max > 0:
        ratio = late_max / early_max
    else:
        ratio = math.inf if late_max > 0 else 1.0
    if math.isinf(late_max):
        return GrowthClass(DIVERGING, None, math.inf, early_max, late_max, ratio, w)
    if late_max <= (1 + config.tol) * early_max:
        return GrowthClass(BOUNDED, late_max, None, early_max, late_max, ratio, w)
    slope = _late_slope(late, s.size - w)
    if not math.isnan(slope) and slope > config.min_slope and ratio >= config.min_ratio:
        return GrowthClass(DIVERGING, None, slope, early_max, late_max, ratio, w)
    return GrowthClass(INCONCLUSIVE, None, None if math.isnan(slope) else slope, early_max, late_max, ratio, w)
