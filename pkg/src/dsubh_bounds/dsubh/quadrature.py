from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from dsubh_bounds.config.settings import settings
from dsubh_bounds.dsubh.function import DeltaSubharmonic, evaluate_many, positive_part
from dsubh_bounds.utils.errors import DomainError, QuadratureRefusedError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SphereMean:
    value: float
    nodes: int
    converged: bool
    stochastic: bool = False


def check_exclusion(U: DeltaSubharmonic, R: float) -> None:
    """Refuse spheres passing within exclusion_fraction·R of a charge."""
    locs, _ = U.charges
    if not len(locs):
        return
    gap = float(np.abs(np.linalg.norm(locs, axis=1) - R).min())
    if gap < settings.exclusion_fraction * R:
        raise QuadratureRefusedError(
            f"charge at distance {gap:.3g} from the sphere |x| = {R:g}", distance=gap
        )


def _circle_nodes(R: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    theta = 2.0 * math.pi * np.arange(n) / n
    pts = R * np.stack([np.cos(theta), np.sin(theta)], axis=1)
    return pts, np.full(n, 1.0 / n)


def _sphere_nodes(R: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre in cos(polar angle) with n/2 nodes times an n-point azimuth rule."""
    u, w = np.polynomial.legendre.leggauss(max(2, n // 2))
    phi = 2.0 * math.pi * np.arange(n) / n
    sin_polar = np.sqrt(1.0 - u * u)
    pts = np.stack(
        [
            np.outer(sin_polar, np.cos(phi)).ravel(),
            np.outer(sin_polar, np.sin(phi)).ravel(),
            np.repeat(u, n),
        ],
        axis=1,
    )
    weights = np.repeat(w / 2.0, n) / n
    return R * pts, weights


def sphere_mean(U: DeltaSubharmonic, R: float, *, positive_part_only: bool = True) -> SphereMean:
    """
    What it does:
    - Mean of U⁺ (or of U) over the sphere |x| = R.

    Behavior:
    - d=2: periodic trapezoid rule; d=3: Gauss-Legendre × trapezoid; both double the
      node count until two successive values agree to `sphere_rtol`.
    - d>=4: Monte Carlo with `monte_carlo_samples` points and `seed`; flagged stochastic.
    - A charge within `exclusion_fraction`·R of the sphere raises QuadratureRefusedError.
    """
    if not R > 0:
        raise DomainError(f"sphere radius must be > 0, got {R!r}")
    check_exclusion(U, R)

    def mean(pts: np.ndarray, weights: np.ndarray) -> float:
        vals = evaluate_many(U, pts)
        if positive_part_only:
            vals = positive_part(vals)
        return float(np.dot(weights, vals))

    if U.dim >= 4:
        rng = np.random.default_rng(settings.seed)
        g = rng.standard_normal((settings.monte_carlo_samples, U.dim))
        pts = R * g / np.linalg.norm(g, axis=1, keepdims=True)
        n = len(pts)
        return SphereMean(
            value=mean(pts, np.full(n, 1.0 / n)), nodes=n, converged=True, stochastic=True
        )

    nodes_for = _circle_nodes if U.dim == 2 else _sphere_nodes
    cap = settings.sphere_max_nodes_2d if U.dim == 2 else settings.sphere_max_nodes_3d
    n = settings.sphere_initial_nodes
    previous = mean(*nodes_for(R, n))
    while n < cap:
        n *= 2
        current = mean(*nodes_for(R, n))
        if abs(current - previous) <= settings.sphere_rtol * max(abs(current), 1e-300):
            return SphereMean(value=current, nodes=n, converged=True)
        previous = current

    logger.warning("sphere mean at R=%g stopped at %d nodes without converging", R, n)
    return SphereMean(value=previous, nodes=n, converged=False)


def sphere_mean_plus(U: DeltaSubharmonic, R: float) -> float:
    return sphere_mean(U, R).value
