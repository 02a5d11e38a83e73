from __future__ import annotations

import math

import numpy as np

from dsubh_bounds.core.constants import c_p
from dsubh_bounds.measures.geometry import (
    box_distance_range,
    cantor_cdf,
    disk_polygon_areas,
    segment_chord_lengths,
    square_polygons,
)
from dsubh_bounds.measures.models import (
    Atomic,
    CantorSelfSimilar,
    GridLebesgue,
    MeasureRep,
    PolylineLength,
    TriangulatedArea,
)
from dsubh_bounds.utils.errors import DomainError


def total_mass(mu: MeasureRep) -> float:
    if isinstance(mu, Atomic):
        return float(mu.weights.sum())
    if isinstance(mu, GridLebesgue):
        return float(mu.cell_masses.sum())
    if isinstance(mu, PolylineLength):
        return mu.weight * mu.length
    if isinstance(mu, TriangulatedArea):
        return mu.weight * float(mu.areas.sum())
    return mu.mass


def support_radius(mu: MeasureRep) -> float:
    """Radius of the smallest closed ball about the origin containing supp μ."""
    if isinstance(mu, Atomic):
        return float(np.linalg.norm(mu.xyz, axis=1).max()) if len(mu.masses) else 0.0
    if isinstance(mu, GridLebesgue):
        _, far = box_distance_range(mu.lower_corners, mu.cell, np.zeros(mu.dim))
        return float(far.max())
    if isinstance(mu, PolylineLength):
        return float(np.linalg.norm(mu.segments.reshape(-1, 2), axis=1).max())
    if isinstance(mu, TriangulatedArea):
        return float(np.linalg.norm(mu.triangles.reshape(-1, 3), axis=1).max())
    return float(np.linalg.norm(_cantor_base_corners(mu), axis=1).max())


def bounding_radius(mu: MeasureRep) -> float:
    declared = mu.bounding_radius
    actual = support_radius(mu)
    if declared is None:
        return actual
    if declared < actual * (1.0 - 1e-12):
        raise DomainError(f"support reaches radius {actual}, beyond the declared {declared}")
    return float(declared)


def _cantor_base_corners(mu: CantorSelfSimilar) -> np.ndarray:
    """Corners of the base interval or square; every construction level contains them."""
    steps = [(0.0, 0.0), (mu.length, 0.0)]
    if mu.base == "square":
        steps += [(0.0, mu.length), (mu.length, mu.length)]
    pts = np.tile(np.asarray(mu.origin, dtype=float), (len(steps), 1))
    pts[:, :2] += np.asarray(steps)
    return pts


# --- single-center ball masses ---


def ball_mass_bounds(
    mu: MeasureRep, y, t: float, *, within: float | None = None
) -> tuple[float, float]:
    """
    What it does:
    - Returns (lower, upper) for μ(B̄_y(t)), optionally for μ restricted to B̄(0, within).

    Behavior:
    - Exact (lower == upper) for atoms, polylines, Cantor intervals, planar grids and
      triangulated surfaces without restriction.
    - Cell-layer bounds for 3-d grids, Cantor squares and restricted grids/surfaces.
    """
    if t < 0:
        raise DomainError(f"ball radius must be >= 0, got {t!r}")
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size != mu.dim:
        raise DomainError(f"center has dimension {y.size}, measure has {mu.dim}")

    if isinstance(mu, Atomic):
        return _atomic_mass(mu, y, t, within)
    if isinstance(mu, PolylineLength):
        s = segment_chord_lengths(mu.segments[:, 0], mu.segments[:, 1], y, t, within=within)
        value = mu.weight * float(s.sum())
        return value, value
    if isinstance(mu, GridLebesgue):
        return _grid_mass(mu, y, t, within)
    if isinstance(mu, TriangulatedArea):
        return _surface_mass(mu, y, t, within)
    return _cantor_mass(mu, y, t, within)


def ball_mass(mu: MeasureRep, y, t: float, *, within: float | None = None) -> float:
    lo, hi = ball_mass_bounds(mu, y, t, within=within)
    return 0.5 * (lo + hi)


def ball_mass_bounds_many(
    mu: MeasureRep, centers: np.ndarray, t: float, *, within: float | None = None
) -> tuple[np.ndarray, np.ndarray]:
    centers = np.asarray(centers, dtype=float).reshape(-1, mu.dim)
    if isinstance(mu, Atomic) and within is None:
        lo = np.empty(len(centers))
        for start in range(0, len(centers), 2048):
            block = centers[start : start + 2048]
            dist = np.linalg.norm(block[:, None, :] - mu.xyz[None, :, :], axis=2)
            lo[start : start + 2048] = (dist <= t) @ mu.weights
        return lo, lo.copy()

    pairs = [ball_mass_bounds(mu, c, t, within=within) for c in centers]
    if not pairs:
        return np.zeros(0), np.zeros(0)
    arr = np.asarray(pairs)
    return arr[:, 0], arr[:, 1]


def _atomic_mass(mu: Atomic, y: np.ndarray, t: float, within: float | None):
    if not mu.masses:
        return 0.0, 0.0
    mask = np.linalg.norm(mu.xyz - y, axis=1) <= t
    if within is not None:
        mask &= np.linalg.norm(mu.xyz, axis=1) <= within
    value = float(mu.weights[mask].sum())
    return value, value


def _grid_mass(mu: GridLebesgue, y: np.ndarray, t: float, within: float | None):
    near, far = box_distance_range(mu.lower_corners, mu.cell, y)
    touch = near <= t
    inside = far <= t
    if within is not None:
        near0, far0 = box_distance_range(mu.lower_corners, mu.cell, np.zeros(mu.dim))
        touch &= near0 <= within
        inside &= far0 <= within

    masses = mu.cell_masses
    lower = float(masses[inside].sum())
    upper = float(masses[touch].sum())
    if mu.dim != 2 or within is not None:
        return lower, upper

    partial = touch & ~inside
    if not partial.any():
        return lower, lower
    polys = square_polygons(mu.lower_corners[partial], mu.cell)
    areas = disk_polygon_areas(polys, y, t)
    value = lower + float((areas * masses[partial] / mu.cell**2).sum())
    return value, value


def _plane_frames(mu: TriangulatedArea):
    tri = mu.triangles
    e1 = tri[:, 1] - tri[:, 0]
    e1 = e1 / np.linalg.norm(e1, axis=1)[:, None]
    normal = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
    normal = normal / np.linalg.norm(normal, axis=1)[:, None]
    e2 = np.cross(normal, e1)
    rel = tri - tri[:, :1, :]
    flat = np.stack(
        [np.einsum("nkj,nj->nk", rel, e1), np.einsum("nkj,nj->nk", rel, e2)], axis=2
    )
    # counter-clockwise in the local frame by construction of e2
    return tri[:, 0], e1, e2, normal, flat


def _surface_mass(mu: TriangulatedArea, y: np.ndarray, t: float, within: float | None):
    base, e1, e2, normal, flat = _plane_frames(mu)
    rel = y - base
    height = np.einsum("nj,nj->n", rel, normal)
    rho2 = t * t - height * height
    hit = rho2 >= 0
    local = np.stack([np.einsum("nj,nj->n", rel, e1), np.einsum("nj,nj->n", rel, e2)], axis=1)
    rho = np.sqrt(np.maximum(rho2, 0.0))
    areas = np.where(hit, disk_polygon_areas(flat, local, rho), 0.0)
    areas = np.minimum(areas, mu.areas)
    if within is None:
        value = mu.weight * float(areas.sum())
        return value, value

    dist = np.linalg.norm(mu.triangles, axis=2)
    fully = dist.max(axis=1) <= within
    lower = mu.weight * float(areas[fully].sum())
    meets = _triangle_min_distance(mu.triangles) <= within
    upper = mu.weight * float(areas[meets].sum())
    return lower, upper


def _triangle_min_distance(tri: np.ndarray) -> np.ndarray:
    """Lower bound of the distance from the origin to each triangle (vertex/plane based)."""
    normal = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
    normal = normal / np.linalg.norm(normal, axis=1)[:, None]
    plane = np.abs(np.einsum("nj,nj->n", tri[:, 0], normal))
    return plane


def _cantor_mass(mu: CantorSelfSimilar, y: np.ndarray, t: float, within: float | None):
    origin = np.asarray(mu.origin, dtype=float)
    if mu.base == "interval":
        lo, hi = _line_window(y - origin, t)
        if within is not None:
            lo0, hi0 = _line_window(-origin, within)
            lo, hi = max(lo, lo0), min(hi, hi0)
        if hi < lo:
            return 0.0, 0.0
        cdf = cantor_cdf(np.array([lo, hi]) / mu.length, mu.level)
        value = mu.mass * float(cdf[1] - cdf[0])
        return value, value
    return _cantor_square_mass(mu, y - origin, t, within, -origin)


def _line_window(rel: np.ndarray, t: float) -> tuple[float, float]:
    """Coordinates along the first axis of the segment line ∩ B̄(rel, t); empty when lo > hi."""
    perp2 = float(np.dot(rel[1:], rel[1:]))
    if perp2 > t * t:
        return 1.0, 0.0
    w = math.sqrt(t * t - perp2)
    return float(rel[0]) - w, float(rel[0]) + w


def _cantor_square_mass(
    mu: CantorSelfSimilar, rel: np.ndarray, t: float, within: float | None, rel0: np.ndarray
):
    """Descends the square construction, pruning pieces fully inside or outside the ball."""
    extra = float(np.dot(rel[2:], rel[2:]))
    if extra > t * t:
        return 0.0, 0.0
    radius = math.sqrt(t * t - extra)
    center = rel[:2]
    radius0 = center0 = None
    if within is not None:
        extra0 = float(np.dot(rel0[2:], rel0[2:]))
        if extra0 > within * within:
            return 0.0, 0.0
        radius0 = math.sqrt(within * within - extra0)
        center0 = rel0[:2]

    corners = np.zeros((1, 2))
    side = mu.length
    piece_mass = mu.mass
    lower = 0.0
    for level in range(mu.level + 1):
        near, far = box_distance_range(corners, side, center)
        keep = near <= radius
        full = far <= radius
        if center0 is not None:
            near0, far0 = box_distance_range(corners, side, center0)
            keep &= near0 <= radius0
            full &= far0 <= radius0
        lower += piece_mass * float(full.sum())
        partial = corners[keep & ~full]
        if level == mu.level or partial.size == 0:
            return lower, lower + piece_mass * len(partial)
        side /= 3.0
        piece_mass /= 4.0
        offsets = np.array([[0.0, 0.0], [2 * side, 0.0], [0.0, 2 * side], [2 * side, 2 * side]])
        corners = (partial[:, None, :] + offsets[None, :, :]).reshape(-1, 2)
    return lower, lower


# --- cheap rigorous majorants ---


def local_power(mu: MeasureRep) -> tuple[float, float]:
    """(b, p) with h_μ(t) <= b·t^p for every t > 0."""
    if isinstance(mu, Atomic):
        return total_mass(mu), 0.0
    if isinstance(mu, PolylineLength):
        return 2.0 * mu.weight * len(mu.segments), 1.0
    if isinstance(mu, GridLebesgue):
        dens = mu.cell_masses / mu.cell**mu.dim
        return float(dens.max()) * c_p(mu.dim), float(mu.dim)
    if isinstance(mu, TriangulatedArea):
        return mu.weight * math.pi * len(mu.faces), 2.0
    p = mu.exponent
    pieces_per_axis = 4.0 if mu.base == "interval" else 16.0
    return mu.mass * pieces_per_axis * (2.0 / mu.length) ** p, p


_MAX_LOCAL_PIECES = 1000


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    """Flip each row so its first non-negligible component is positive."""
    lead = np.argmax(np.abs(v) > 1e-12, axis=1)
    sign = np.sign(v[np.arange(len(v)), lead])
    return v * np.where(sign == 0, 1.0, sign)[:, None]


def _flat_keys(direction: np.ndarray, offset: np.ndarray) -> np.ndarray:
    """Group ids of pieces sharing one supporting line or plane."""
    key = np.round(np.hstack([_canonical_sign(direction), offset]), 9) + 0.0
    _, groups = np.unique(key, axis=0, return_inverse=True)
    return groups.ravel()


def _local_sum(
    mids: np.ndarray,
    radii: np.ndarray,
    sizes: np.ndarray,
    groups: np.ndarray,
    cap: float,
    t: float,
) -> float:
    """
    Max over pieces i of the mass a t-ball can see among pieces near i.

    A ball meeting pieces i and j forces |m_i - m_j| <= 2t + ρ_i + ρ_j; pieces on one line
    (or plane) contribute at most `cap` together.
    """
    gap = np.linalg.norm(mids[:, None, :] - mids[None, :, :], axis=2)
    near = gap <= 2.0 * t + radii[:, None] + radii[None, :]
    n_groups = int(groups.max()) + 1
    best = 0.0
    for row in near:
        per_group = np.bincount(groups[row], weights=sizes[row], minlength=n_groups)
        best = max(best, float(np.minimum(per_group, cap).sum()))
    return best


def _polyline_majorant(mu: PolylineLength, t: float) -> float:
    seg = mu.segments
    lengths = mu.segment_lengths
    if len(seg) > _MAX_LOCAL_PIECES:
        return float(np.minimum(2.0 * t, lengths).sum())
    unit = (seg[:, 1] - seg[:, 0]) / lengths[:, None]
    unit = _canonical_sign(unit)
    foot = seg[:, 0] - np.einsum("nj,nj->n", seg[:, 0], unit)[:, None] * unit
    groups = _flat_keys(unit, foot)
    mids = seg.mean(axis=1)
    return _local_sum(mids, 0.5 * lengths, lengths, groups, 2.0 * t, t)


def _surface_majorant(mu: TriangulatedArea, t: float) -> float:
    tri = mu.triangles
    disk = math.pi * t * t
    if len(tri) > _MAX_LOCAL_PIECES:
        return float(np.minimum(disk, mu.areas).sum())
    normal = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
    normal = _canonical_sign(normal / np.linalg.norm(normal, axis=1)[:, None])
    offset = np.einsum("nj,nj->n", tri[:, 0], normal)[:, None]
    groups = _flat_keys(normal, offset)
    mids = tri.mean(axis=1)
    radii = np.linalg.norm(tri - mids[:, None, :], axis=2).max(axis=1)
    return _local_sum(mids, radii, mu.areas, groups, disk, t)


def modulus_majorant(mu: MeasureRep, t: float) -> float:
    """A rigorous upper bound for h_μ(t) that needs no search over centers."""
    mass = total_mass(mu)
    if isinstance(mu, PolylineLength):
        return min(mass, mu.weight * _polyline_majorant(mu, t))
    if isinstance(mu, TriangulatedArea):
        return min(mass, mu.weight * _surface_majorant(mu, t))
    b, p = local_power(mu)
    return min(mass, b * t**p)


# --- support sampling ---


def support_sample(mu: MeasureRep, spacing: float) -> np.ndarray:
    """Points of supp μ such that every support point lies within `spacing` of one of them."""
    if not spacing > 0:
        raise DomainError(f"spacing must be > 0, got {spacing!r}")

    if isinstance(mu, Atomic):
        return mu.xyz.copy()
    if isinstance(mu, PolylineLength):
        chunks = []
        for (a, b), length in zip(mu.segments, mu.segment_lengths, strict=True):
            n = max(1, math.ceil(length / spacing))
            s = np.linspace(0.0, 1.0, n + 1)[:, None]
            chunks.append(a + s * (b - a))
        return np.vstack(chunks)
    if isinstance(mu, GridLebesgue):
        m = max(1, math.ceil(mu.cell * math.sqrt(mu.dim) / (2.0 * spacing)))
        ticks = (np.arange(m) + 0.5) * (mu.cell / m)
        grid = np.stack(np.meshgrid(*([ticks] * mu.dim), indexing="ij"), axis=-1)
        return (mu.lower_corners[:, None, :] + grid.reshape(1, -1, mu.dim)).reshape(-1, mu.dim)
    if isinstance(mu, TriangulatedArea):
        tri = mu.triangles
        longest = float(np.linalg.norm(tri - np.roll(tri, 1, axis=1), axis=2).max())
        m = max(1, math.ceil(longest / spacing))
        ij = [(i, j) for i in range(m + 1) for j in range(m + 1 - i)]
        bary = np.array([(1.0 - (i + j) / m, i / m, j / m) for i, j in ij])
        return np.einsum("bk,nkj->nbj", bary, tri).reshape(-1, 3)

    level = 0
    half = mu.length / 2.0 * (1.0 if mu.base == "interval" else math.sqrt(2.0))
    while level < mu.level and half * 3.0**-level > spacing:
        level += 1
    coarse = CantorSelfSimilar(
        level=level, base=mu.base, origin=mu.origin, length=mu.length, mass=mu.mass
    )
    centers = coarse.left_ends * mu.length + 0.5 * mu.length * 3.0**-level
    origin = np.asarray(mu.origin, dtype=float)
    if mu.base == "interval":
        pts = np.tile(origin, (centers.size, 1))
        pts[:, 0] += centers
        return pts
    xs, ys = np.meshgrid(centers, centers)
    pts = np.tile(origin, (xs.size, 1))
    pts[:, 0] += xs.ravel()
    pts[:, 1] += ys.ravel()
    return pts


def sample_count(mu: MeasureRep, spacing: float) -> int:
    """Number of points `support_sample(mu, spacing)` would return, without building them."""
    if not spacing > 0:
        raise DomainError(f"spacing must be > 0, got {spacing!r}")

    if isinstance(mu, Atomic):
        return len(mu.masses)
    if isinstance(mu, PolylineLength):
        per = np.maximum(1, np.ceil(mu.segment_lengths / spacing)) + 1
        return int(per.sum())
    if isinstance(mu, GridLebesgue):
        m = max(1, math.ceil(mu.cell * math.sqrt(mu.dim) / (2.0 * spacing)))
        return len(mu.lower_corners) * m**mu.dim
    if isinstance(mu, TriangulatedArea):
        tri = mu.triangles
        longest = float(np.linalg.norm(tri - np.roll(tri, 1, axis=1), axis=2).max())
        m = max(1, math.ceil(longest / spacing))
        return len(tri) * (m + 1) * (m + 2) // 2

    level = 0
    half = mu.length / 2.0 * (1.0 if mu.base == "interval" else math.sqrt(2.0))
    while level < mu.level and half * 3.0**-level > spacing:
        level += 1
    return 2**level if mu.base == "interval" else 4**level
