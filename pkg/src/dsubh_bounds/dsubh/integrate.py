from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from dsubh_bounds.config.settings import settings
from dsubh_bounds.dsubh.function import DeltaSubharmonic, evaluate_many, positive_part
from dsubh_bounds.measures.geometry import segment_ball_parameters
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

_SQRT15 = math.sqrt(15.0)
# 7-point degree-5 rule on a triangle: barycentric nodes and weights (sum 1)
_TRI_NODES = np.array(
    [
        [1 / 3, 1 / 3, 1 / 3],
        [(6 - _SQRT15) / 21, (6 - _SQRT15) / 21, (9 + 2 * _SQRT15) / 21],
        [(6 - _SQRT15) / 21, (9 + 2 * _SQRT15) / 21, (6 - _SQRT15) / 21],
        [(9 + 2 * _SQRT15) / 21, (6 - _SQRT15) / 21, (6 - _SQRT15) / 21],
        [(6 + _SQRT15) / 21, (6 + _SQRT15) / 21, (9 - 2 * _SQRT15) / 21],
        [(6 + _SQRT15) / 21, (9 - 2 * _SQRT15) / 21, (6 + _SQRT15) / 21],
        [(9 - 2 * _SQRT15) / 21, (6 + _SQRT15) / 21, (6 + _SQRT15) / 21],
    ]
)
_TRI_WEIGHTS = np.array(
    [9 / 40] + [(155 - _SQRT15) / 1200] * 3 + [(155 + _SQRT15) / 1200] * 3
)
_MAX_SURFACE_SPLITS = 4
_MAX_CANTOR_SQUARE_LEVEL = 8
_FLAG_POLE = "atom-at-pole"
_FLAG_UNCONVERGED = "unconverged"
_FLAG_NODE_ON_POLE = "node-on-pole"


@dataclass(frozen=True)
class PlusIntegral:
    value: float
    error: float
    flags: tuple[str, ...] = ()

    @property
    def upper(self) -> float:
        return self.value + self.error


def integrate_plus_against(
    U: DeltaSubharmonic, mu: MeasureRep, *, within: float | None = None
) -> PlusIntegral:
    """
    What it does:
    - ∫ U⁺ dμ, over B̄(within) only when `within` is given.

    Why it matters:
    - This is the left-hand side of every inequality; the verification compares
      value + error against the right-hand side.

    Behavior:
    - Atomic: exact sum; an atom on a net negative charge gives +inf with a flag.
    - Polyline: adaptive quadrature per segment with breakpoints at the charges.
    - Grid: midpoint rule on 1, 2, 4 subdivisions per axis with Richardson extrapolation;
      a midpoint that falls on a pole is replaced by the mean over its quarter points.
    - Triangles: a 7-point degree-5 rule, refined by 4-way splits until stable.
    - Cantor: level-piece midpoints with a gradient bound on U⁺ as the error.
    """
    if U.dim != mu.dim:
        raise DomainError(f"function lives in d={U.dim}, measure in d={mu.dim}")
    if within is not None and not within > 0:
        raise DomainError(f"restriction radius must be > 0, got {within!r}")

    if isinstance(mu, Atomic):
        return _atomic(U, mu, within)
    if isinstance(mu, PolylineLength):
        return _polyline(U, mu, within)
    if isinstance(mu, GridLebesgue):
        return _grid(U, mu, within)
    if isinstance(mu, TriangulatedArea):
        return _surface(U, mu, within)
    return _cantor(U, mu, within)


def _atomic(U: DeltaSubharmonic, mu: Atomic, within: float | None) -> PlusIntegral:
    pts, m = mu.xyz, mu.weights
    if within is not None:
        keep = np.linalg.norm(pts, axis=1) <= within
        pts, m = pts[keep], m[keep]
    if not len(m):
        return PlusIntegral(0.0, 0.0)
    vals = positive_part(evaluate_many(U, pts))
    if np.any(np.isinf(vals)):
        return PlusIntegral(math.inf, 0.0, (_FLAG_POLE,))
    return PlusIntegral(float(np.dot(m, vals)), 0.0)


def _polyline(U: DeltaSubharmonic, mu: PolylineLength, within: float | None) -> PlusIntegral:
    starts, ends = mu.segments[:, 0], mu.segments[:, 1]
    lo = np.zeros(len(starts))
    hi = np.ones(len(starts))
    if within is not None:
        lo, hi = segment_ball_parameters(starts, ends, np.zeros(2), within)

    locs, _ = U.charges
    total, error = 0.0, 0.0
    flags: set[str] = set()
    for a, b, s0, s1, length in zip(starts, ends, lo, hi, mu.segment_lengths, strict=True):
        if s1 <= s0:
            continue
        step = b - a

        def f(s: float, a=a, step=step) -> float:
            v = evaluate_many(U, (a + s * step)[None, :])[0]
            return max(v, 0.0) if math.isfinite(v) else (math.inf if v > 0 else 0.0)

        # closest approach of the segment to each charge
        if len(locs):
            proj = ((locs - a) @ step) / float(step @ step)
            points = sorted({float(p) for p in proj if s0 < p < s1})
        else:
            points = []
        value, err, *rest = quad(
            f,
            float(s0),
            float(s1),
            points=points or None,
            epsabs=1e-14,
            epsrel=settings.integral_rtol,
            limit=400,
            full_output=1,
        )
        if len(rest) > 1:
            flags.add(_FLAG_UNCONVERGED)
        total += value * length
        error += err * length
    return PlusIntegral(mu.weight * total, mu.weight * error, tuple(sorted(flags)))


def _grid(U: DeltaSubharmonic, mu: GridLebesgue, within: float | None) -> PlusIntegral:
    d = mu.dim
    results = []
    flags: set[str] = set()
    for m in (1, 2, 4):
        ticks = (np.arange(m) + 0.5) / m
        sub = np.stack(np.meshgrid(*([ticks] * d), indexing="ij"), axis=-1).reshape(-1, d)
        pts = (mu.lower_corners[:, None, :] + mu.cell * sub[None, :, :]).reshape(-1, d)
        w = np.repeat(mu.cell_masses / m**d, m**d)
        if within is not None:
            keep = np.linalg.norm(pts, axis=1) <= within
            pts, w = pts[keep], w[keep]
        vals = positive_part(evaluate_many(U, pts)) if len(pts) else np.zeros(0)
        hit = np.isinf(vals)
        if hit.any():
            vals[hit] = _off_node_mean(U, pts[hit], mu.cell / m)
            flags.add(_FLAG_NODE_ON_POLE)
        if np.any(np.isinf(vals)):
            return PlusIntegral(math.inf, 0.0, (_FLAG_POLE,))
        results.append(float(np.dot(w, vals)))
    _, coarse, fine = results
    extrapolated = (4.0 * fine - coarse) / 3.0
    error = abs(extrapolated - fine) + abs(fine - coarse) / 3.0
    return PlusIntegral(extrapolated, error, tuple(sorted(flags)))


def _off_node_mean(U: DeltaSubharmonic, nodes: np.ndarray, side: float) -> np.ndarray:
    """Mean of U⁺ over the 2^d quarter points of each sub-cell whose midpoint is a pole."""
    d = nodes.shape[1]
    offsets = np.array(list(itertools.product((-0.25, 0.25), repeat=d))) * side
    around = (nodes[:, None, :] + offsets[None, :, :]).reshape(-1, d)
    return positive_part(evaluate_many(U, around)).reshape(len(nodes), -1).mean(axis=1)


def _split(tri: np.ndarray) -> np.ndarray:
    a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
    ab, bc, ca = (a + b) / 2, (b + c) / 2, (c + a) / 2
    return np.concatenate(
        [
            np.stack([a, ab, ca], axis=1),
            np.stack([ab, b, bc], axis=1),
            np.stack([ca, bc, c], axis=1),
            np.stack([ab, bc, ca], axis=1),
        ]
    )


def _triangle_rule(U: DeltaSubharmonic, tri: np.ndarray, within: float | None) -> float:
    areas = 0.5 * np.linalg.norm(np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0]), axis=1)
    pts = np.einsum("qk,nkj->nqj", _TRI_NODES, tri).reshape(-1, 3)
    vals = positive_part(evaluate_many(U, pts)).reshape(len(tri), -1)
    if within is not None:
        vals = np.where(np.linalg.norm(pts, axis=1).reshape(len(tri), -1) <= within, vals, 0.0)
    return float(np.sum(areas * (vals @ _TRI_WEIGHTS)))


def _surface(U: DeltaSubharmonic, mu: TriangulatedArea, within: float | None) -> PlusIntegral:
    tri = mu.triangles
    previous = _triangle_rule(U, tri, within)
    for _ in range(_MAX_SURFACE_SPLITS):
        tri = _split(tri)
        current = _triangle_rule(U, tri, within)
        err = abs(current - previous)
        if math.isinf(current):
            return PlusIntegral(math.inf, 0.0, (_FLAG_POLE,))
        if err <= 1e-6 * max(abs(current), 1e-300):
            return PlusIntegral(mu.weight * current, mu.weight * err)
        previous = current
    logger.info("surface integral still moving after %d splits", _MAX_SURFACE_SPLITS)
    return PlusIntegral(mu.weight * previous, mu.weight * err, (_FLAG_UNCONVERGED,))


def _gradient_bound(U: DeltaSubharmonic, pts: np.ndarray, reach: float) -> np.ndarray:
    """sup of |∇U| over B̄(pt, reach) for each point; inf if a charge is within reach."""
    locs, signed = U.charges
    if not len(locs):
        return np.zeros(len(pts))
    dist = np.linalg.norm(pts[:, None, :] - locs[None, :, :], axis=2) - reach
    with np.errstate(divide="ignore"):
        per = np.where(dist > 0, np.abs(signed) * max(1, U.dim - 2) / dist ** (U.dim - 1), np.inf)
    return per.sum(axis=1)


def _cantor(U: DeltaSubharmonic, mu: CantorSelfSimilar, within: float | None) -> PlusIntegral:
    level = mu.level if mu.base == "interval" else min(mu.level, _MAX_CANTOR_SQUARE_LEVEL)
    piece = mu.length * 3.0**-level
    coarse = CantorSelfSimilar(level=level, base=mu.base, origin=mu.origin, length=mu.length)
    mids = coarse.left_ends * mu.length + 0.5 * piece
    origin = np.asarray(mu.origin, dtype=float)
    if mu.base == "interval":
        pts = np.tile(origin, (mids.size, 1))
        pts[:, 0] += mids
        reach = 0.5 * piece
    else:
        xs, ys = np.meshgrid(mids, mids)
        pts = np.tile(origin, (xs.size, 1))
        pts[:, 0] += xs.ravel()
        pts[:, 1] += ys.ravel()
        reach = 0.5 * piece * math.sqrt(2.0)
    w = np.full(len(pts), mu.mass / len(pts))

    vals = positive_part(evaluate_many(U, pts))
    if np.any(np.isinf(vals)):
        return PlusIntegral(math.inf, 0.0, (_FLAG_POLE,))
    slack = _gradient_bound(U, pts, reach) * reach
    if within is None:
        return PlusIntegral(float(np.dot(w, vals)), float(np.dot(w, slack)))

    r = np.linalg.norm(pts, axis=1)
    inside = r + reach <= within
    straddle = ~inside & (r - reach <= within)
    value = float(np.dot(w[inside], vals[inside]) + 0.5 * np.dot(w[straddle], vals[straddle]))
    error = float(
        np.dot(w[inside], slack[inside])
        + np.dot(w[straddle], 0.5 * vals[straddle] + slack[straddle])
    )
    return PlusIntegral(value, error)
