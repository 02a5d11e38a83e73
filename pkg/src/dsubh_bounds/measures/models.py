"""Immutable measure representations and the modulus result type."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from dsubh_bounds.core.enums import MeasureKind, ModulusMode
from dsubh_bounds.utils.errors import DomainError, GeometryError


def _as_points(points, dim: int) -> np.ndarray:
    arr = np.asarray(points, dtype=float).reshape(-1, dim)
    if not np.all(np.isfinite(arr)):
        raise DomainError("points must be finite")
    return arr


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a, b, c) -> bool:
    """c collinear with a-b lies within the closed segment a-b."""
    return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(
        a[1], b[1]
    )


def segments_intersect(p1, p2, q1, q2) -> bool:
    """Exact closed-segment intersection test in the plane."""
    o1 = _orient(p1, p2, q1)
    o2 = _orient(p1, p2, q2)
    o3 = _orient(q1, q2, p1)
    o4 = _orient(q1, q2, p2)

    if ((o1 > 0 and o2 < 0) or (o1 < 0 and o2 > 0)) and (
        (o3 > 0 and o4 < 0) or (o3 < 0 and o4 > 0)
    ):
        return True
    if o1 == 0 and _on_segment(p1, p2, q1):
        return True
    if o2 == 0 and _on_segment(p1, p2, q2):
        return True
    if o3 == 0 and _on_segment(q1, q2, p1):
        return True
    return o4 == 0 and _on_segment(q1, q2, p2)


@dataclass(frozen=True)
class Atomic:
    points: tuple[tuple[float, ...], ...]
    masses: tuple[float, ...]
    dim: int = 2
    bounding_radius: float | None = None

    kind = MeasureKind.ATOMIC

    def __post_init__(self) -> None:
        if len(self.points) != len(self.masses):
            raise DomainError("atomic measure needs one mass per point")
        if any(not (m > 0 and math.isfinite(m)) for m in self.masses):
            raise DomainError("atomic masses must be finite and > 0")
        _as_points(self.points, self.dim)

    @cached_property
    def xyz(self) -> np.ndarray:
        return _as_points(self.points, self.dim)

    @cached_property
    def weights(self) -> np.ndarray:
        return np.asarray(self.masses, dtype=float)


@dataclass(frozen=True)
class GridLebesgue:
    """Lebesgue measure (times a per-cell density) on a union of axis-aligned cells."""

    cell: float
    cells: tuple[tuple[int, ...], ...]
    densities: tuple[float, ...] | None = None
    origin: tuple[float, ...] = (0.0, 0.0)
    bounding_radius: float | None = None

    kind = MeasureKind.GRID_LEBESGUE

    def __post_init__(self) -> None:
        if not self.cell > 0:
            raise DomainError(f"cell side must be > 0, got {self.cell!r}")
        if not self.cells:
            raise DomainError("grid measure needs at least one cell")
        if any(len(c) != len(self.origin) for c in self.cells):
            raise DomainError("cell indices must match the origin dimension")
        if len(set(self.cells)) != len(self.cells):
            raise DomainError("cell indices must be distinct")
        if self.densities is not None:
            if len(self.densities) != len(self.cells):
                raise DomainError("one density per cell is required")
            if any(not (w > 0 and math.isfinite(w)) for w in self.densities):
                raise DomainError("cell densities must be finite and > 0")

    @property
    def dim(self) -> int:
        return len(self.origin)

    @cached_property
    def lower_corners(self) -> np.ndarray:
        idx = np.asarray(self.cells, dtype=float).reshape(-1, self.dim)
        return np.asarray(self.origin, dtype=float) + idx * self.cell

    @cached_property
    def centers(self) -> np.ndarray:
        return self.lower_corners + 0.5 * self.cell

    @cached_property
    def cell_masses(self) -> np.ndarray:
        dens = np.ones(len(self.cells)) if self.densities is None else np.asarray(self.densities)
        return dens * self.cell**self.dim


@dataclass(frozen=True)
class PolylineLength:
    """
    Length measure (times `weight`) on a simple polyline in the plane.

    `lip` / `lip_inv` are set only for graph curves, where they hold the constants of the
    x-parametrisation instead of the arclength one.
    """

    vertices: tuple[tuple[float, float], ...]
    closed: bool = False
    weight: float = 1.0
    lip: float | None = None
    lip_inv: float | None = None
    bounding_radius: float | None = None

    kind = MeasureKind.POLYLINE_LENGTH
    dim = 2

    def __post_init__(self) -> None:
        pts = _as_points(self.vertices, 2)
        if len(pts) < 2:
            raise GeometryError("polyline needs at least two vertices")
        if not (self.weight > 0 and math.isfinite(self.weight)):
            raise DomainError("polyline weight must be finite and > 0")
        if self.closed and len(pts) < 3:
            raise GeometryError("closed polyline needs at least three vertices")

        seg = self._segment_array(pts)
        if np.any(np.linalg.norm(seg[:, 1] - seg[:, 0], axis=1) == 0):
            raise GeometryError("consecutive polyline vertices must be distinct")
        self._check_simple(seg)

    def _segment_array(self, pts: np.ndarray) -> np.ndarray:
        ends = np.vstack([pts, pts[:1]]) if self.closed else pts
        return np.stack([ends[:-1], ends[1:]], axis=1)

    def _check_simple(self, seg: np.ndarray) -> None:
        n = len(seg)
        for i in range(n):
            for j in range(i + 1, n):
                adjacent = j == i + 1 or (self.closed and i == 0 and j == n - 1)
                p1, p2 = seg[i]
                q1, q2 = seg[j]
                if not adjacent:
                    if segments_intersect(p1, p2, q1, q2):
                        raise GeometryError(f"polyline self-intersects (segments {i} and {j})")
                    continue
                # adjacent segments share one vertex; reject folding back over each other
                shared = p2 if j == i + 1 else p1
                other_p = p1 if j == i + 1 else p2
                other_q = q2 if j == i + 1 else q1
                if _orient(other_p, shared, other_q) == 0 and np.dot(
                    other_p - shared, other_q - shared
                ) > 0:
                    raise GeometryError(f"polyline folds back (segments {i} and {j})")

    @cached_property
    def segments(self) -> np.ndarray:
        return self._segment_array(_as_points(self.vertices, 2))

    @cached_property
    def segment_lengths(self) -> np.ndarray:
        return np.linalg.norm(self.segments[:, 1] - self.segments[:, 0], axis=1)

    @property
    def length(self) -> float:
        return float(self.segment_lengths.sum())

    @cached_property
    def is_straight(self) -> bool:
        """Open polyline whose vertices march along one line in one direction."""
        if self.closed:
            return False
        d = self.segments[:, 1] - self.segments[:, 0]
        unit = d / self.segment_lengths[:, None]
        return bool(np.allclose(unit, unit[0], rtol=0.0, atol=1e-12))


@dataclass(frozen=True)
class TriangulatedArea:
    """Area measure (times `weight`) on a triangulated surface in R^3."""

    vertices: tuple[tuple[float, float, float], ...]
    faces: tuple[tuple[int, int, int], ...]
    weight: float = 1.0
    reference: tuple[tuple[float, float], ...] | None = None
    bounding_radius: float | None = None

    kind = MeasureKind.TRIANGULATED_AREA
    dim = 3

    def __post_init__(self) -> None:
        pts = _as_points(self.vertices, 3)
        if not self.faces:
            raise GeometryError("surface needs at least one triangle")
        faces = np.asarray(self.faces, dtype=int)
        if faces.ndim != 2 or faces.shape[1] != 3 or faces.min() < 0 or faces.max() >= len(pts):
            raise GeometryError("faces must be vertex index triples")
        if not (self.weight > 0 and math.isfinite(self.weight)):
            raise DomainError("surface weight must be finite and > 0")
        if self.reference is not None and len(self.reference) != len(pts):
            raise GeometryError("reference parameterisation needs one point per vertex")

        tri = pts[faces]
        areas = 0.5 * np.linalg.norm(np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0]), axis=1)
        scale = max(float(np.ptp(pts, axis=0).max()), 1.0)
        bad = np.flatnonzero(areas <= 1e-14 * scale**2)
        if bad.size:
            raise GeometryError(f"degenerate triangle at face {int(bad[0])}")

    @cached_property
    def triangles(self) -> np.ndarray:
        return _as_points(self.vertices, 3)[np.asarray(self.faces, dtype=int)]

    @cached_property
    def areas(self) -> np.ndarray:
        t = self.triangles
        return 0.5 * np.linalg.norm(np.cross(t[:, 1] - t[:, 0], t[:, 2] - t[:, 0]), axis=1)


@dataclass(frozen=True)
class CantorSelfSimilar:
    """
    Middle-thirds construction at a finite level, mass spread uniformly over the level pieces.

    base "interval": pieces of [0, length] placed along the first axis from `origin`.
    base "square": product of two such constructions in the first two axes.
    """

    level: int = 12
    base: str = "interval"
    origin: tuple[float, ...] = (0.0, 0.0)
    length: float = 1.0
    mass: float = 1.0
    bounding_radius: float | None = None

    kind = MeasureKind.CANTOR

    def __post_init__(self) -> None:
        if self.level < 0 or self.level > 20:
            raise DomainError(f"Cantor level must be in [0, 20], got {self.level}")
        if self.base not in ("interval", "square"):
            raise DomainError(f"Invalid Cantor base '{self.base}'. Allowed: ['interval', 'square']")
        if self.base == "square" and len(self.origin) < 2:
            raise DomainError("square base needs at least two dimensions")
        if not (self.length > 0 and self.mass > 0):
            raise DomainError("Cantor length and mass must be > 0")

    @property
    def dim(self) -> int:
        return len(self.origin)

    @property
    def exponent(self) -> float:
        """Similarity dimension of the limit set."""
        pieces = 2 if self.base == "interval" else 4
        return math.log(pieces) / math.log(3)

    @cached_property
    def left_ends(self) -> np.ndarray:
        """Left end points of the level intervals on [0, 1]."""
        ends = np.zeros(1)
        for j in range(self.level):
            ends = np.concatenate([ends, ends + 2.0 * 3.0 ** -(j + 1)])
        return np.sort(ends)


MeasureRep = Atomic | GridLebesgue | PolylineLength | TriangulatedArea | CantorSelfSimilar


@dataclass(frozen=True)
class ModulusBound:
    t: float
    lower: float
    upper: float
    mode: ModulusMode

    def __post_init__(self) -> None:
        if self.upper < self.lower:
            raise DomainError(f"modulus bound inverted at t={self.t}: {self.lower} > {self.upper}")
