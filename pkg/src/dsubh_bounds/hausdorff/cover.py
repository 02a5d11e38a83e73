from __future__ import annotations

import heapq
import logging
import math

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import cKDTree

from dsubh_bounds.config.settings import settings
from dsubh_bounds.core.enums import CoverKind
from dsubh_bounds.core.gauge import Gauge
from dsubh_bounds.hausdorff.models import ContentEstimate, Cover
from dsubh_bounds.hausdorff.sets import CompactSet
from dsubh_bounds.measures.geometry import box_distance_range
from dsubh_bounds.utils.errors import DomainError

logger = logging.getLogger(__name__)

_INFLATE = 1.0 + 1e-12


def content_upper(S: CompactSet, h: Gauge, t: float = math.inf) -> ContentEstimate:
    """
    What it does:
    - Finds a cheap feasible cover of S by closed balls of radii < t and returns its cost
      Σ h(r_j), an upper bound for the h-content of radius t.

    Why it matters:
    - Content factors replace the total mass on the right-hand side of the gauge
      inequalities, so they have to be feasible covers, never estimates.

    Behavior:
    - Candidates: zero-radius balls on point sets, the smallest enclosing ball, uniform
      dyadic covers from level 0 down to twice the raster level, and a greedy cover.
    - The greedy cover is rerun for every admissible radius cap and the cheapest run is
      kept, so the result never increases as t grows.
    """
    if not t > 0:
        raise DomainError(f"cover radius bound must be > 0, got {t!r}")

    candidates: list[Cover] = []
    if S.is_points:
        candidates.append(_points_cover(S, h))
    single = _single_ball(S, h, t)
    if single is not None:
        candidates.append(single)
    candidates.append(_best_uniform(S, h, t))
    if not S.is_points:
        greedy = _best_greedy(S, h, t)
        if greedy is not None:
            candidates.append(greedy)

    best = min(candidates, key=lambda c: c.cost)
    logger.debug("content upper t=%g: %s cover, cost %g", t, best.kind, best.cost)
    return ContentEstimate(gauge=h, t=t, upper=best.cost, cover=best)


def _points_cover(S: CompactSet, h: Gauge) -> Cover:
    n = len(S.points)
    return Cover(
        kind=CoverKind.POINTS,
        cost=n * h(0.0),
        count=n,
        radius=0.0,
        centers=S.points.copy(),
        radii=np.zeros(n),
    )


def enclosing_ball(points: np.ndarray) -> tuple[np.ndarray, float]:
    """A closed ball containing every point: minimax center by Nelder-Mead, exact radius."""
    lo, hi = points.min(axis=0), points.max(axis=0)
    box_center = 0.5 * (lo + hi)
    box_radius = float(np.linalg.norm(points - box_center, axis=1).max())
    if len(points) == 1:
        return points[0].copy(), 0.0

    res = minimize(
        lambda c: float(np.linalg.norm(points - c, axis=1).max()),
        box_center,
        method="Nelder-Mead",
        options={"xatol": 1e-12 * max(box_radius, 1e-300), "fatol": 1e-14, "maxiter": 4000},
    )
    center = np.asarray(res.x, dtype=float)
    radius = float(np.linalg.norm(points - center, axis=1).max())
    if radius >= box_radius:
        center, radius = box_center, box_radius
    return center, radius * _INFLATE


def _single_ball(S: CompactSet, h: Gauge, t: float) -> Cover | None:
    center, radius = enclosing_ball(S.hull_points)
    if not radius < t:
        return None
    return Cover(
        kind=CoverKind.SINGLE,
        cost=h(radius),
        count=1,
        radius=radius,
        centers=center[None, :],
        radii=np.array([radius]),
    )


def _uniform_radius(S: CompactSet, level: int) -> float:
    return S.cell_side(level) * math.sqrt(S.dim) / 2.0 * _INFLATE


def _best_uniform(S: CompactSet, h: Gauge, t: float) -> Cover:
    """Circumscribed balls of the occupied cells at one dyadic level; cheapest level wins."""
    k = S.resolution
    deepest = 2 * k
    while not _uniform_radius(S, deepest) < t:
        deepest += 1

    base = len(S.cells)
    best: Cover | None = None
    for level in range(deepest + 1):
        radius = _uniform_radius(S, level)
        if not radius < t:
            continue
        if level <= k:
            count = len(S.cells_at(level))
        else:
            count = base * 2 ** (S.dim * (level - k))
        cost = count * h(radius)
        if best is None or cost < best.cost:
            best = Cover(kind=CoverKind.UNIFORM, cost=cost, count=count, radius=radius, level=level)

    if best.level <= k and best.count <= 100_000:
        centers = S.lower_corners(best.level) + 0.5 * S.cell_side(best.level)
        best = Cover(
            kind=CoverKind.UNIFORM,
            cost=best.cost,
            count=best.count,
            radius=best.radius,
            level=best.level,
            centers=centers,
            radii=np.full(best.count, best.radius),
        )
    return best


class _GreedyCandidates:
    """
    Balls centred at occupied cells of the coarse levels, with dyadic radii.

    Radius class m has radius s·√d/2·2^m, s the side of a greedy-level cell; its centres
    are the occupied cells of the levels kg-m .. kg-m+2.
    """

    def __init__(self, S: CompactSet) -> None:
        self.level = min(settings.greedy_resolution, S.resolution)
        self.side = S.cell_side(self.level)
        targets = S.cells_at(self.level)
        self.lower = S.lower_corners(self.level, targets)
        self.n_targets = len(targets)
        tree = cKDTree(self.lower + 0.5 * self.side)
        half_diag = self.side * math.sqrt(S.dim) / 2.0

        self.radius_class: list[int] = []
        self.radii: list[float] = []
        self.centers: list[np.ndarray] = []
        self.covered: list[np.ndarray] = []
        for m in range(self.level + 1):
            rho = half_diag * 2**m * _INFLATE
            for lvl in range(max(self.level - m, 0), min(self.level, self.level - m + 2) + 1):
                centers = S.lower_corners(lvl) + 0.5 * S.cell_side(lvl)
                hits = tree.query_ball_point(centers, rho + half_diag)
                for c, idx in zip(centers, hits, strict=True):
                    idx = np.asarray(sorted(idx), dtype=np.int64)
                    if idx.size == 0:
                        continue
                    _, far = box_distance_range(self.lower[idx], self.side, c)
                    inside = idx[far <= rho]
                    if inside.size == 0:
                        continue
                    self.radius_class.append(m)
                    self.radii.append(rho)
                    self.centers.append(c)
                    self.covered.append(inside)

    def run(self, h: Gauge, cap: int) -> Cover:
        """Lazy greedy set cover by cost per newly covered cell; ties go to the earlier ball."""
        costs = [h(r) for r in self.radii]
        heap = [
            (costs[i] / len(self.covered[i]), i)
            for i in range(len(self.radii))
            if self.radius_class[i] <= cap
        ]
        heapq.heapify(heap)
        done = np.zeros(self.n_targets, dtype=bool)
        remaining = self.n_targets
        chosen: list[int] = []
        while remaining and heap:
            _, i = heapq.heappop(heap)
            fresh = int(np.count_nonzero(~done[self.covered[i]]))
            if fresh == 0:
                continue
            key = (costs[i] / fresh, i)
            if heap and key > heap[0]:
                heapq.heappush(heap, key)
                continue
            chosen.append(i)
            done[self.covered[i]] = True
            remaining -= fresh

        radii = np.array([self.radii[i] for i in chosen])
        return Cover(
            kind=CoverKind.GREEDY,
            cost=float(sum(costs[i] for i in chosen)),
            count=len(chosen),
            radius=float(radii.max()),
            level=self.level,
            centers=np.array([self.centers[i] for i in chosen]),
            radii=radii,
        )


def _best_greedy(S: CompactSet, h: Gauge, t: float) -> Cover | None:
    pool = _GreedyCandidates(S)
    caps = sorted({m for m, r in zip(pool.radius_class, pool.radii, strict=True) if r < t})
    best: Cover | None = None
    for cap in caps:
        cover = pool.run(h, cap)
        if best is None or cover.cost < best.cost:
            best = cover
    return best


def cover_is_feasible(S: CompactSet, cover: Cover) -> bool:
    """Exact check that every occupied cell (or point) of S lies in one ball of the cover."""
    if cover.kind is CoverKind.UNIFORM:
        if cover.level is None or cover.radius < S.cell_side(cover.level) * math.sqrt(S.dim) / 2:
            return False
        if cover.level <= S.resolution:
            needed = len(S.cells_at(cover.level))
        else:
            needed = len(S.cells) * 2 ** (S.dim * (cover.level - S.resolution))
        return cover.count >= needed
    if not cover.explicit:
        return False

    if cover.kind is CoverKind.POINTS:
        gap = np.linalg.norm(S.points[:, None, :] - cover.centers[None, :, :], axis=2)
        return bool(np.all((gap <= cover.radii[None, :]).any(axis=1)))
    if cover.kind is CoverKind.SINGLE:
        gap = np.linalg.norm(S.hull_points - cover.centers[0], axis=1)
        return bool(np.all(gap <= cover.radii[0]))

    side = S.cell_side(cover.level)
    lower = S.lower_corners(cover.level)
    inside = np.zeros(len(lower), dtype=bool)
    for c, r in zip(cover.centers, cover.radii, strict=True):
        _, far = box_distance_range(lower, side, c)
        inside |= far <= r
    return bool(inside.all())
