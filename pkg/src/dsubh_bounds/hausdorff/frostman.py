from __future__ import annotations

import itertools
import logging
import math

import numpy as np

from dsubh_bounds.core.constants import c_p
from dsubh_bounds.core.enums import GaugeKind
from dsubh_bounds.core.gauge import Gauge
from dsubh_bounds.hausdorff.models import ContentEstimate
from dsubh_bounds.hausdorff.sets import CompactSet
from dsubh_bounds.measures.models import GridLebesgue

logger = logging.getLogger(__name__)

_TAIL_DECADES = 9
_TAIL_POINTS_PER_DECADE = 40


def frostman_lower(S: CompactSet, h: Gauge) -> ContentEstimate:
    """
    What it does:
    - Builds a measure on the occupied cells of S whose modulus is at most C·h and returns
      μ(S)/C as a lower bound of the h-content.

    Behavior:
    - Every finest cell of S starts with mass h(s/2), s its side; going up one level at a
      time, each cell whose mass exceeds h(side/2) is scaled down to exactly that.
    - The mass is spread uniformly inside each finest cell (a GridLebesgue measure), so the
      measure lives on S itself and never on a coarser raster.
    - C is the supremum over t of the dyadic block bound: a ball of radius t <= s_j/2
      meets at most 2^d cells of level j.
    - Point sets get lower bound 0.
    """
    if S.is_points:
        return ContentEstimate(gauge=h, t=math.inf, upper=math.inf, lower=0.0)

    k = S.resolution
    cells = S.cells
    side_k = S.cell_side(k)

    mass = np.full(len(cells), h(side_k / 2.0))
    for j in range(k - 1, -1, -1):
        _, group = np.unique(cells >> (k - j), axis=0, return_inverse=True)
        group = group.ravel()
        sums = np.bincount(group, weights=mass)
        limit = h(S.cell_side(j) / 2.0)
        scale = np.minimum(1.0, np.divide(limit, sums, out=np.ones_like(sums), where=sums > 0))
        mass *= scale[group]

    constant = _block_constant(S, h, cells, mass)
    total = float(mass.sum())
    if not (math.isfinite(constant) and constant > 0 and total > 0):
        logger.info("frostman constant %g: no positive lower bound", constant)
        return ContentEstimate(
            gauge=h, t=math.inf, upper=math.inf, lower=0.0, frostman_constant=constant
        )

    density = mass / constant / side_k**S.dim
    measure = GridLebesgue(
        cell=side_k,
        cells=tuple(map(tuple, cells.tolist())),
        densities=tuple(density.tolist()),
        origin=tuple(S.origin.tolist()),
    )
    return ContentEstimate(
        gauge=h,
        t=math.inf,
        upper=math.inf,
        lower=total / constant,
        frostman=measure,
        frostman_constant=constant,
    )


def _block_max(cells: np.ndarray, mass: np.ndarray, shift: int, dim: int) -> float:
    """Largest mass of a 2x..x2 block of adjacent cells at the level `shift` steps coarser."""
    keys, group = np.unique(cells >> shift, axis=0, return_inverse=True)
    sums = np.bincount(group.ravel(), weights=mass)
    # a parent p sits in the blocks whose lower corner is p - o, o in {0, 1}^d
    offsets = np.array(list(itertools.product((0, 1), repeat=dim)), dtype=np.int64)
    corners = (keys[None, :, :] - offsets[:, None, :]).reshape(-1, dim)
    _, block = np.unique(corners, axis=0, return_inverse=True)
    return float(np.bincount(block.ravel(), weights=np.tile(sums, len(offsets))).max())


def _block_constant(S: CompactSet, h: Gauge, cells: np.ndarray, mass: np.ndarray) -> float:
    """sup_t sup_y μ(B̄_y(t)) / h(t) for the cell measure, bounded scale by scale."""
    k = S.resolution
    total = float(mass.sum())
    first = h(S.cell_side(1) / 2.0)
    if first <= 0:
        return math.inf
    constant = total / first

    for j in range(1, k + 1):
        low = h(S.cell_side(j + 1) / 2.0)
        if low <= 0:
            return math.inf
        constant = max(constant, _block_max(cells, mass, k - j, S.dim) / low)

    # below a quarter cell only the density bound μ(B̄_y(t)) <= ρ·c_d·t^d is used
    rho = float(mass.max()) / S.cell_side(k) ** S.dim
    top = S.cell_side(k + 1) / 2.0
    n = _TAIL_DECADES * _TAIL_POINTS_PER_DECADE
    grid = top * np.logspace(-_TAIL_DECADES, 0, n + 1)
    vol = c_p(S.dim)
    for a, b in itertools.pairwise(grid):
        ha = h(a)
        if ha <= 0:
            return math.inf
        constant = max(constant, rho * vol * b**S.dim / ha)
    if not _tail_ratio_bounded(h, S.dim, grid[0]):
        return math.inf
    return constant


def _tail_ratio_bounded(h: Gauge, d: int, t0: float) -> bool:
    """Whether t^d / h(t) on (0, t0] stays below its value at t0."""
    if h.kind is GaugeKind.POWER:
        return h.p <= d
    if h.kind is GaugeKind.POWER_LOG:
        if h.p > d:
            return False
        if h.q >= 0:
            return True
        # d log(t^(d-p) / log(er/t)^q) / d log t = (d-p) + q / log(er/t) on (0, t0]
        return (d - h.p) + h.q / math.log(math.e * h.radius / min(t0, h.radius)) >= 0
    if h.kind is GaugeKind.TABULATED:
        return True
    return False
