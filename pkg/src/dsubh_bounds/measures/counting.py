from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad

from dsubh_bounds.config.settings import settings
from dsubh_bounds.core.constants import hat_d, require_dimension
from dsubh_bounds.measures.ball_mass import ball_mass, local_power
from dsubh_bounds.measures.models import Atomic, MeasureRep
from dsubh_bounds.utils.errors import DomainError

_NEAR_ZERO = 1e-12


def radial_counting_N(
    mu: MeasureRep, y, x: float, d: int, *, within: float | None = None
) -> float:
    """
    N_y^μ(x) = ĥd·∫_0^x μ(B̄_y(t)) / t^(d-1) dt.

    Atomic measures use the closed form per atom; everything else integrates the ball
    mass in the log variable and bounds the piece below x·1e-12 by the local power law.
    Returns +inf when an atom sits at y. `within` restricts μ to the closed ball B̄(within).
    """
    require_dimension(d)
    if not x > 0:
        raise DomainError(f"radial_counting_N needs x > 0, got {x!r}")
    y = np.asarray(y, dtype=float)

    if isinstance(mu, Atomic):
        return _atomic_counting(mu, y, x, d, within)

    t0 = x * _NEAR_ZERO
    head = _head_bound(mu, y, t0, d, within)
    if math.isinf(head):
        return math.inf

    def integrand(u: float) -> float:
        t = math.exp(u)
        return ball_mass(mu, y, t, within=within) * t ** (2 - d)

    body, _ = quad(
        integrand, math.log(t0), math.log(x), epsrel=settings.integral_rtol, limit=400
    )
    return hat_d(d) * (body + head)


def _atomic_counting(
    mu: Atomic, y: np.ndarray, x: float, d: int, within: float | None
) -> float:
    if not len(mu.masses):
        return 0.0
    dist = np.linalg.norm(mu.xyz - y, axis=1)
    inside = dist <= x
    if within is not None:
        inside &= np.linalg.norm(mu.xyz, axis=1) <= within
    if np.any(dist[inside] == 0.0):
        return math.inf
    a, m = dist[inside], mu.weights[inside]
    if d == 2:
        return float(np.sum(m * np.log(x / a)))
    return float(hat_d(d) * np.sum(m * (a ** (2 - d) - x ** (2 - d))) / (d - 2))


def _head_bound(
    mu: MeasureRep, y: np.ndarray, t0: float, d: int, within: float | None
) -> float:
    """Upper bound of ∫_0^t0 μ(B̄_y(t)) / t^(d-1) dt."""
    if ball_mass(mu, y, t0, within=within) == 0.0:
        return 0.0
    b, p = local_power(mu)
    if p <= d - 2:
        return math.inf
    return b * t0 ** (p + 2 - d) / (p + 2 - d)
