from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from dsubh_bounds.core.constants import require_dimension
from dsubh_bounds.core.gauge import Gauge, gauge_inverse, require_admissible
from dsubh_bounds.utils.errors import DomainError

_NOISE = 1e-12


@dataclass(frozen=True)
class LemmaGridReport:
    points: int
    worst_drop: float
    first_drop_at: float | None = None

    @property
    def ok(self) -> bool:
        return self.first_drop_at is None


def substitution_map(h: Gauge, d: int, r: float):
    """
    x ↦ x·ln(e·r·e^{s_h}/h⁻¹(x)) in the plane, x ↦ x/(h⁻¹(x))^(d-2) otherwise.

    These are the maps through which the total mass enters the gauge-form bounds, so a
    larger mass estimate can only enlarge the bound when they are non-decreasing.
    """
    require_dimension(d)
    s = require_admissible(h, d)
    if d == 2:
        log_top = 1.0 + math.log(r) + s

        def phi(x: float) -> float:
            return 0.0 if x == 0.0 else x * (log_top - math.log(gauge_inverse(h, x)))

    else:

        def phi(x: float) -> float:
            return 0.0 if x == 0.0 else x / gauge_inverse(h, x) ** (d - 2)

    return phi


def lemma_monotonicity_grid(h: Gauge, d: int, r: float, *, n: int = 1000) -> LemmaGridReport:
    if not r > 0:
        raise DomainError(f"lemma grid needs r > 0, got {r!r}")
    top = h(r)
    xs = np.linspace(0.0, top, n + 1)[1:]
    phi = substitution_map(h, d, r)
    values = np.array([phi(float(x)) for x in xs])

    drops = values[:-1] - values[1:]
    allowed = _NOISE * np.abs(values[:-1])
    bad = np.flatnonzero(drops > allowed)
    worst = float(np.max(drops / np.maximum(np.abs(values[:-1]), 1e-300))) if n > 1 else 0.0
    first = float(xs[bad[0] + 1]) if bad.size else None
    return LemmaGridReport(points=n, worst_drop=max(worst, 0.0), first_drop_at=first)
