"""
Compact sets as unions of closed dyadic cells.

A set lives in a cube [origin, origin + side]^d split into 2^k cells per axis. Analytic
primitives are rasterized exactly: a cell is occupied iff the closed cell meets the set.
The cube is shifted by half a cell so that primitive edges do not run along grid lines.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import cKDTree

from dsubh_bounds.config.settings import settings
from dsubh_bounds.core.enums import SetKind
from dsubh_bounds.measures.ball_mass import support_sample
from dsubh_bounds.measures.geometry import box_distance_range
from dsubh_bounds.measures.models import (
    Atomic,
    CantorSelfSimilar,
    GridLebesgue,
    MeasureRep,
    PolylineLength,
    TriangulatedArea,
)
from dsubh_bounds.utils.errors import DomainError

logger = logging.getLogger(__name__)

_MAX_RESOLUTION_3D = 6


def default_resolution(dim: int) -> int:
    if dim == 2:
        return settings.dyadic_resolution
    if dim == 3:
        return min(settings.dyadic_resolution, _MAX_RESOLUTION_3D)
    raise DomainError(f"rasterization supports d in (2, 3), got {dim}")


@dataclass(frozen=True, eq=False)
class CompactSet:
    kind: SetKind
    origin: np.ndarray
    side: float
    resolution: int
    cells: np.ndarray
    points: np.ndarray | None = None
    label: str = ""

    def __post_init__(self) -> None:
        if len(self.cells) == 0:
            raise DomainError("compact set must be nonempty")
        if self.resolution < 0 or self.resolution > 30:
            raise DomainError(f"resolution must be in [0, 30], got {self.resolution}")

    @property
    def dim(self) -> int:
        return int(self.origin.size)

    @property
    def cell(self) -> float:
        return self.side / 2**self.resolution

    @property
    def is_points(self) -> bool:
        return self.points is not None

    def cell_side(self, level: int) -> float:
        return self.side / 2**level

    def cells_at(self, level: int) -> np.ndarray:
        """Occupied cells at a coarser level (lexicographically sorted)."""
        if level > self.resolution:
            raise DomainError(f"level {level} is finer than the raster ({self.resolution})")
        if level == self.resolution:
            return self.cells
        return np.unique(self.cells >> (self.resolution - level), axis=0)

    def lower_corners(self, level: int, idx: np.ndarray | None = None) -> np.ndarray:
        idx = self.cells_at(level) if idx is None else idx
        return self.origin + idx * self.cell_side(level)

    @cached_property
    def hull_points(self) -> np.ndarray:
        """Corners of the first and last occupied cell of every grid row (or the points)."""
        if self.points is not None:
            return self.points
        rest, row = np.unique(self.cells[:, 1:], axis=0, return_inverse=True)
        row = row.ravel()
        first = np.full(len(rest), np.iinfo(np.int64).max)
        last = np.full(len(rest), np.iinfo(np.int64).min)
        np.minimum.at(first, row, self.cells[:, 0])
        np.maximum.at(last, row, self.cells[:, 0])
        ends = np.vstack([np.column_stack([first, rest]), np.column_stack([last, rest])])
        lower = self.origin + ends.astype(float) * self.cell
        corners = np.array(list(itertools.product((0.0, 1.0), repeat=self.dim))) * self.cell
        return np.unique((lower[:, None, :] + corners[None, :, :]).reshape(-1, self.dim), axis=0)

    # --- constructors ---

    @classmethod
    def from_points(cls, points, *, resolution: int | None = None) -> CompactSet:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        frame = _Frame.around(pts.min(axis=0), pts.max(axis=0), resolution)
        cells = frame.point_cells(pts)
        return frame.build(SetKind.POINTS, cells, points=pts)

    @classmethod
    def segment(cls, a, b, *, resolution: int | None = None) -> CompactSet:
        return cls.polyline([a, b], resolution=resolution, kind=SetKind.SEGMENT)

    @classmethod
    def polyline(
        cls,
        vertices,
        *,
        closed: bool = False,
        resolution: int | None = None,
        kind: SetKind = SetKind.POLYLINE,
    ) -> CompactSet:
        pts = np.asarray(vertices, dtype=float)
        if len(pts) < 2:
            raise DomainError("polyline set needs at least two vertices")
        ends = np.vstack([pts, pts[:1]]) if closed else pts
        frame = _Frame.around(pts.min(axis=0), pts.max(axis=0), resolution)
        parts = [frame.segment_cells(p, q) for p, q in itertools.pairwise(ends)]
        return frame.build(kind, np.vstack(parts))

    @classmethod
    def disk(cls, center, radius: float, *, resolution: int | None = None) -> CompactSet:
        return cls.annulus(center, 0.0, radius, resolution=resolution, kind=SetKind.DISK)

    @classmethod
    def annulus(
        cls,
        center,
        inner: float,
        outer: float,
        *,
        resolution: int | None = None,
        kind: SetKind = SetKind.ANNULUS,
    ) -> CompactSet:
        c = np.asarray(center, dtype=float)
        if not (0.0 <= inner <= outer and outer > 0):
            raise DomainError(f"annulus needs 0 <= inner <= outer, outer > 0; got {inner}, {outer}")
        frame = _Frame.around(c - outer, c + outer, resolution)
        idx, lower = frame.all_cells()
        near, far = box_distance_range(lower, frame.cell, c)
        keep = (near <= outer) & (far >= inner)
        return frame.build(kind, idx[keep])

    @classmethod
    def box(cls, lower, upper, *, resolution: int | None = None) -> CompactSet:
        lo = np.asarray(lower, dtype=float)
        hi = np.asarray(upper, dtype=float)
        if np.any(hi < lo):
            raise DomainError("box needs lower <= upper on every axis")
        frame = _Frame.around(lo, hi, resolution)
        idx, corner = frame.all_cells()
        keep = np.all((corner <= hi) & (corner + frame.cell >= lo), axis=1)
        return frame.build(SetKind.BOX, idx[keep])

    @classmethod
    def quarter_arc(
        cls, radius: float, *, center=(0.0, 0.0), resolution: int | None = None
    ) -> CompactSet:
        """The arc center + radius·(cos θ, sin θ), θ in [0, π/2]."""
        c = np.asarray(center, dtype=float)
        if not radius > 0:
            raise DomainError(f"arc radius must be > 0, got {radius!r}")
        frame = _Frame.around(c, c + radius, resolution)
        theta = np.linspace(0.0, math.pi / 2.0, max(8, math.ceil(2.0 * radius / frame.cell)) + 1)
        samples = c + radius * np.stack([np.cos(theta), np.sin(theta)], axis=1)
        idx = frame.neighbourhood(samples)
        lo = np.maximum(frame.origin + idx * frame.cell, c)
        hi = frame.origin + (idx + 1) * frame.cell
        ok = np.all(hi >= lo, axis=1)
        near = np.linalg.norm(np.clip(c, lo, hi) - c, axis=1)
        far = np.linalg.norm(np.maximum(np.abs(lo - c), np.abs(hi - c)), axis=1)
        keep = ok & (near <= radius) & (far >= radius)
        return frame.build(SetKind.ARC, idx[keep])

    @classmethod
    def cantor(
        cls,
        level: int | None = None,
        *,
        base: str = "interval",
        origin=(0.0, 0.0),
        length: float = 1.0,
        resolution: int | None = None,
    ) -> CompactSet:
        level = settings.cantor_level if level is None else level
        shape = CantorSelfSimilar(level=level, base=base, origin=tuple(origin), length=length)
        o = np.asarray(origin, dtype=float)
        hi = o.copy()
        hi[0] += length
        if base == "square":
            hi[1] += length
        frame = _Frame.around(o, hi, resolution)

        lefts = o[0] + length * shape.left_ends
        piece = length * 3.0**-level
        n = 2**frame.resolution
        ticks = frame.origin[0] + np.arange(n) * frame.cell
        first = np.searchsorted(lefts + piece, ticks, side="left")
        hit = first < lefts.size
        hit[hit] = lefts[first[hit]] <= ticks[hit] + frame.cell
        xs = np.flatnonzero(hit)

        axes: list[np.ndarray] = [xs]
        for a in range(1, frame.dim):
            if base == "square" and a == 1:
                shifted = lefts - o[0] + o[1]
                ticks_a = frame.origin[1] + np.arange(n) * frame.cell
                first = np.searchsorted(shifted + piece, ticks_a, side="left")
                hit = first < shifted.size
                hit[hit] = shifted[first[hit]] <= ticks_a[hit] + frame.cell
                axes.append(np.flatnonzero(hit))
            else:
                axes.append(frame.point_axis(a, o[a]))
        grids = np.meshgrid(*axes, indexing="ij")
        cells = np.stack([g.ravel() for g in grids], axis=1)
        return frame.build(SetKind.CANTOR, cells)

    @classmethod
    def from_cells(cls, origin, cell: float, cells) -> CompactSet:
        """An explicit union of closed cells [origin + i·cell, origin + (i+1)·cell]."""
        idx = np.asarray(cells, dtype=np.int64)
        if idx.ndim != 2 or len(idx) == 0:
            raise DomainError("cell list must be a nonempty list of index tuples")
        if not cell > 0:
            raise DomainError(f"cell side must be > 0, got {cell!r}")
        shift = idx.min(axis=0)
        idx = idx - shift
        k = max(1, math.ceil(math.log2(int(idx.max()) + 1)))
        o = np.asarray(origin, dtype=float) + shift * cell
        return CompactSet(
            kind=SetKind.CELLS,
            origin=o,
            side=cell * 2**k,
            resolution=k,
            cells=np.unique(idx, axis=0),
        )

    @classmethod
    def from_measure(cls, mu: MeasureRep, *, resolution: int | None = None) -> CompactSet:
        """The support of a measure: exact for every kind except triangulated surfaces."""
        if isinstance(mu, Atomic):
            return cls.from_points(mu.xyz, resolution=resolution)
        if isinstance(mu, GridLebesgue):
            return cls.from_cells(mu.origin, mu.cell, mu.cells)
        if isinstance(mu, PolylineLength):
            return cls.polyline(mu.vertices, closed=mu.closed, resolution=resolution)
        if isinstance(mu, CantorSelfSimilar):
            return cls.cantor(
                mu.level,
                base=mu.base,
                origin=mu.origin,
                length=mu.length,
                resolution=resolution,
            )
        if isinstance(mu, TriangulatedArea):
            pts = mu.triangles.reshape(-1, 3)
            frame = _Frame.around(pts.min(axis=0), pts.max(axis=0), resolution)
            spacing = frame.cell / 2.0
            samples = support_sample(mu, spacing)
            idx = frame.neighbourhood(samples)
            lower = frame.origin + idx * frame.cell
            # a cell is kept if it meets the spacing-ball of some sample
            tree = cKDTree(samples)
            reach = frame.cell * math.sqrt(3.0) / 2.0 + spacing
            hits = tree.query_ball_point(lower + 0.5 * frame.cell, reach)
            owner = np.repeat(np.arange(len(idx)), [len(h) for h in hits])
            nearby = np.fromiter(itertools.chain.from_iterable(hits), dtype=np.int64)
            gap = np.clip(samples[nearby], lower[owner], lower[owner] + frame.cell)
            near = np.linalg.norm(gap - samples[nearby], axis=1)
            keep = np.bincount(owner[near <= spacing], minlength=len(idx)) > 0
            return frame.build(SetKind.SAMPLED, idx[keep])
        raise DomainError(f"cannot rasterize {type(mu).__name__}")


@dataclass(frozen=True)
class _Frame:
    origin: np.ndarray
    side: float
    resolution: int

    @property
    def dim(self) -> int:
        return int(self.origin.size)

    @property
    def cell(self) -> float:
        return self.side / 2**self.resolution

    @classmethod
    def around(cls, lo: np.ndarray, hi: np.ndarray, resolution: int | None) -> _Frame:
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        k = default_resolution(lo.size) if resolution is None else resolution
        extent = float(np.max(hi - lo))
        if extent <= 0:
            extent = 1.0
        cell = extent / (2**k - 1) if k > 0 else extent * 2.0
        return cls(origin=lo - 0.5 * cell, side=cell * 2**k, resolution=k)

    def build(self, kind: SetKind, cells: np.ndarray, *, points=None) -> CompactSet:
        n = 2**self.resolution
        cells = np.asarray(cells, dtype=np.int64).reshape(-1, self.dim)
        cells = cells[np.all((cells >= 0) & (cells < n), axis=1)]
        cells = np.unique(cells, axis=0)
        logger.debug("rasterized %s at level %d: %d cells", kind, self.resolution, len(cells))
        return CompactSet(
            kind=kind,
            origin=self.origin,
            side=self.side,
            resolution=self.resolution,
            cells=cells,
            points=points,
        )

    def all_cells(self) -> tuple[np.ndarray, np.ndarray]:
        n = 2**self.resolution
        grids = np.meshgrid(*([np.arange(n)] * self.dim), indexing="ij")
        idx = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
        return idx, self.origin + idx * self.cell

    def point_axis(self, axis: int, value: float) -> np.ndarray:
        u = (value - self.origin[axis]) / self.cell
        lo = math.floor(u)
        return np.array(sorted({lo, lo - 1} if u == lo else {lo}), dtype=np.int64)

    def point_cells(self, pts: np.ndarray) -> np.ndarray:
        out = []
        for p in pts:
            axes = [self.point_axis(a, p[a]) for a in range(self.dim)]
            out.extend(itertools.product(*axes))
        return np.asarray(out, dtype=np.int64)

    def neighbourhood(self, samples: np.ndarray) -> np.ndarray:
        """Cells of the samples together with all their neighbours."""
        base = np.unique(np.floor((samples - self.origin) / self.cell).astype(np.int64), axis=0)
        shifts = np.array(list(itertools.product((-1, 0, 1), repeat=self.dim)), dtype=np.int64)
        idx = (base[:, None, :] + shifts[None, :, :]).reshape(-1, self.dim)
        n = 2**self.resolution
        idx = idx[np.all((idx >= 0) & (idx < n), axis=1)]
        return np.unique(idx, axis=0)

    def segment_cells(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        """Cells whose closed box meets the closed segment p-q (Liang-Barsky clipping)."""
        steps = max(1, math.ceil(4.0 * float(np.linalg.norm(q - p)) / self.cell))
        s = np.linspace(0.0, 1.0, steps + 1)[:, None]
        idx = self.neighbourhood(p + s * (q - p))
        lo = self.origin + idx * self.cell
        hi = lo + self.cell

        enter = np.zeros(len(idx))
        leave = np.ones(len(idx))
        inside = np.ones(len(idx), dtype=bool)
        for a in range(self.dim):
            step = q[a] - p[a]
            if step == 0.0:
                inside &= (lo[:, a] <= p[a]) & (p[a] <= hi[:, a])
                continue
            s0 = (lo[:, a] - p[a]) / step
            s1 = (hi[:, a] - p[a]) / step
            enter = np.maximum(enter, np.minimum(s0, s1))
            leave = np.minimum(leave, np.maximum(s0, s1))
        return idx[inside & (enter <= leave)]
