"""Vectorised ball-clipping kernels shared by the measure representations."""

from __future__ import annotations

import numpy as np


def segment_ball_parameters(
    starts: np.ndarray, ends: np.ndarray, center: np.ndarray, radius: float
) -> tuple[np.ndarray, np.ndarray]:
    """
    Parameter interval [s_lo, s_hi] (clipped to [0, 1]) of each segment inside B̄(center, radius).

    Empty intersections come back with s_lo >= s_hi.
    """
    d = ends - starts
    f = starts - center
    a = np.einsum("ij,ij->i", d, d)
    b = np.einsum("ij,ij->i", f, d)
    c = np.einsum("ij,ij->i", f, f) - radius * radius
    disc = b * b - a * c
    root = np.sqrt(np.maximum(disc, 0.0))
    lo = np.clip((-b - root) / a, 0.0, 1.0)
    hi = np.clip((-b + root) / a, 0.0, 1.0)
    miss = disc < 0
    lo = np.where(miss, 1.0, lo)
    hi = np.where(miss, 0.0, hi)
    return lo, hi


def segment_chord_lengths(
    starts: np.ndarray,
    ends: np.ndarray,
    center: np.ndarray,
    radius: float,
    *,
    within: float | None = None,
) -> np.ndarray:
    """Length of each segment inside B̄(center, radius), optionally also inside B̄(0, within)."""
    lengths = np.linalg.norm(ends - starts, axis=1)
    if radius < 0:
        return np.zeros_like(lengths)
    lo, hi = segment_ball_parameters(starts, ends, center, radius)
    if within is not None:
        lo0, hi0 = segment_ball_parameters(starts, ends, np.zeros_like(center), within)
        lo = np.maximum(lo, lo0)
        hi = np.minimum(hi, hi0)
    return lengths * np.maximum(hi - lo, 0.0)


def _angle(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    cross = u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]
    dot = np.einsum("...i,...i->...", u, v)
    return np.arctan2(cross, dot)


def _edge_disk_area(a: np.ndarray, b: np.ndarray, radius: np.ndarray) -> np.ndarray:
    """
    Signed area of disk(0, radius) ∩ triangle(0, a, b) for arrays of edges a->b.

    Summing over the edges of a polygon (relative to the disk center) gives the signed
    area of disk ∩ polygon.
    """
    r2 = radius * radius
    d = b - a
    qa = np.einsum("...i,...i->...", d, d)
    qb = np.einsum("...i,...i->...", a, d)
    qc = np.einsum("...i,...i->...", a, a) - r2
    disc = qb * qb - qa * qc
    safe_a = np.where(qa > 0, qa, 1.0)
    root = np.sqrt(np.maximum(disc, 0.0))
    s1 = (-qb - root) / safe_a
    s2 = (-qb + root) / safe_a

    sector = 0.5 * r2 * _angle(a, b)
    p1 = a + np.clip(s1, 0.0, 1.0)[..., None] * d
    p2 = a + np.clip(s2, 0.0, 1.0)[..., None] * d
    cross = p1[..., 0] * p2[..., 1] - p1[..., 1] * p2[..., 0]
    clipped = 0.5 * r2 * _angle(a, p1) + 0.5 * cross + 0.5 * r2 * _angle(p2, b)

    hit = (qa > 0) & (disc > 0) & (s1 < 1.0) & (s2 > 0.0)
    out = np.where(hit, clipped, sector)
    return np.where(qa > 0, out, 0.0)


def disk_polygon_areas(polygons: np.ndarray, center: np.ndarray, radius) -> np.ndarray:
    """
    Area of B̄(center, radius) ∩ polygon for a stack of planar polygons.

    polygons: (n, k, 2) vertex arrays; radius: scalar or (n,) array.
    """
    rel = polygons - center[..., None, :] if np.ndim(center) == 2 else polygons - center
    nxt = np.roll(rel, -1, axis=1)
    rad = np.broadcast_to(np.asarray(radius, dtype=float), rel.shape[:1])[:, None]
    rad = np.broadcast_to(rad, rel.shape[:2])
    total = _edge_disk_area(rel, nxt, rad).sum(axis=1)
    return np.abs(total)


def box_distance_range(
    lower: np.ndarray, side: float, point: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Nearest and farthest distance from `point` to each closed box [lower, lower + side]."""
    upper = lower + side
    nearest = np.clip(point, lower, upper) - point
    far = np.maximum(np.abs(lower - point), np.abs(upper - point))
    return np.linalg.norm(nearest, axis=1), np.linalg.norm(far, axis=1)


def square_polygons(lower: np.ndarray, side: float) -> np.ndarray:
    """Counter-clockwise corner arrays (n, 4, 2) of planar squares."""
    offsets = np.array([[0.0, 0.0], [side, 0.0], [side, side], [0.0, side]])
    return lower[:, None, :] + offsets[None, :, :]


def cantor_cdf(x: np.ndarray, level: int) -> np.ndarray:
    """Distribution function of the uniform measure on the level-`level` middle-thirds pieces."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    out = np.zeros_like(x)
    scale = np.ones_like(x)
    done = np.zeros(x.shape, dtype=bool)
    for _ in range(level):
        left = x < 1.0 / 3.0
        right = x > 2.0 / 3.0
        middle = ~(left | right) & ~done
        out = np.where(middle, out + 0.5 * scale, out)
        done |= middle
        out = np.where(right & ~done, out + 0.5 * scale, out)
        x = np.where(right, 3.0 * x - 2.0, 3.0 * x)
        x = np.clip(x, 0.0, 1.0)
        scale = 0.5 * scale
    return np.where(done, out, out + scale * x)
