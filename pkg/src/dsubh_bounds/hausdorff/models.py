from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from dsubh_bounds.core.enums import CoverKind
from dsubh_bounds.core.gauge import Gauge
from dsubh_bounds.measures.models import GridLebesgue


@dataclass(frozen=True, eq=False)
class Cover:
    """
    A finite family of closed balls.

    Uniform covers below the raster level are implicit: `level`, `count` and `radius`
    describe them and `centers` stays empty.
    """

    kind: CoverKind
    cost: float
    count: int
    radius: float
    level: int | None = None
    centers: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    radii: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def explicit(self) -> bool:
        return len(self.radii) == self.count


@dataclass(frozen=True, eq=False)
class ContentEstimate:
    gauge: Gauge
    t: float
    upper: float
    lower: float = 0.0
    cover: Cover | None = None
    frostman: GridLebesgue | None = None
    frostman_constant: float = math.nan

    def __post_init__(self) -> None:
        if self.lower > self.upper * (1.0 + 1e-12):
            raise ValueError(f"content bounds inverted: {self.lower} > {self.upper}")


@dataclass(frozen=True)
class MonotonicityReport:
    ts: tuple[float, ...]
    uppers: tuple[float, ...]
    violations: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.violations
