"""
Dimension-dependent kernels and normalising constants.

The kernel convention is K(t) = ln t in the plane and K(t) = -t^(2-d) for d > 2, so
that a positive charge q at a contributes q·K(|x-a|) to a potential and K is strictly
increasing in t for every d.
"""

from __future__ import annotations

import math
from collections.abc import Iterable

from scipy.special import gamma

from dsubh_bounds.utils.errors import DomainError


def require_dimension(d: int, *, quadrature: bool = False) -> int:
    if isinstance(d, bool) or not isinstance(d, int) or d < 2:
        raise DomainError(f"Dimension must be an integer >= 2, got {d!r}")
    if quadrature and d not in (2, 3):
        raise DomainError(f"Quadrature-backed operations need d in (2, 3), got {d}")
    return d


def kernel_K(d: int, t: float) -> float:
    require_dimension(d)
    if not t > 0:
        raise DomainError(f"kernel_K needs t > 0, got {t!r}")
    if d == 2:
        return math.log(t)
    return -(t ** (2 - d))


def constant_A(d: int, r: float, R: float) -> float:
    """5·max{1, d-2}·((R+r)/(R-r))^(d-1)·max{1, (R-r)^(d-2)}."""
    require_dimension(d)
    if not r > 0:
        raise DomainError(f"constant_A needs r > 0, got {r!r}")
    if not R > r:
        raise DomainError(f"constant_A needs R > r, got r={r!r}, R={R!r}")
    gap = R - r
    return 5.0 * max(1, d - 2) * ((R + r) / gap) ** (d - 1) * max(1.0, gap ** (d - 2))


def hat_d(d: int) -> int:
    require_dimension(d)
    return max(1, d - 1)


def c_p(p: float) -> float:
    """Volume of the unit ball in dimension p, pi^(p/2) / Gamma(p/2 + 1)."""
    if not p > 0:
        raise DomainError(f"c_p needs p > 0, got {p!r}")
    return float(math.pi ** (p / 2.0) / gamma(p / 2.0 + 1.0))


def xmul(a: float, b: float) -> float:
    """Product on the extended line with 0·(±inf) = 0."""
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


def xprod(factors: Iterable[float]) -> float:
    out = 1.0
    for f in factors:
        out = xmul(out, f)
    return out
