from __future__ import annotations

import itertools
import math
from collections.abc import Sequence

from dsubh_bounds.core.constants import c_p
from dsubh_bounds.core.gauge import Gauge
from dsubh_bounds.hausdorff.cover import content_upper
from dsubh_bounds.hausdorff.frostman import frostman_lower
from dsubh_bounds.hausdorff.models import ContentEstimate, MonotonicityReport
from dsubh_bounds.hausdorff.sets import CompactSet
from dsubh_bounds.utils.errors import DomainError


def h_content(S: CompactSet, h: Gauge, t: float = math.inf) -> ContentEstimate:
    """Both sides of the h-content of radius t: a feasible cover and a Frostman measure."""
    upper = content_upper(S, h, t)
    lower = frostman_lower(S, h)
    return ContentEstimate(
        gauge=h,
        t=t,
        upper=upper.upper,
        lower=lower.lower,
        cover=upper.cover,
        frostman=lower.frostman,
        frostman_constant=lower.frostman_constant,
    )


def p_content(S: CompactSet, p: float, t: float = math.inf) -> ContentEstimate:
    """h-content for the normalised power gauge c_p·x^p."""
    if not p > 0:
        raise DomainError(f"p-content needs p > 0, got {p!r}")
    return h_content(S, Gauge.power(c_p(p), p), t)


def content_monotonicity_check(
    S: CompactSet, h: Gauge, ts: Sequence[float], *, rtol: float = 1e-9
) -> MonotonicityReport:
    """Upper bounds along a decreasing list of radii must not decrease."""
    ts = tuple(float(t) for t in ts)
    if any(b >= a for a, b in itertools.pairwise(ts)):
        raise DomainError("content_monotonicity_check needs a strictly decreasing t list")
    uppers = tuple(content_upper(S, h, t).upper for t in ts)
    violations = tuple(
        i + 1
        for i, (a, b) in enumerate(itertools.pairwise(uppers))
        if b < a * (1.0 - rtol)
    )
    return MonotonicityReport(ts=ts, uppers=uppers, violations=violations)
