from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from dsubh_bounds.config.settings import settings
from dsubh_bounds.core.constants import require_dimension
from dsubh_bounds.core.enums import GaugeKind
from dsubh_bounds.utils.errors import DomainError, InadmissibleGaugeError, OutOfRangeError

GRID_APPROXIMATE = "grid-approximate"


def _normalize_gauge_kind(kind: GaugeKind | str) -> GaugeKind:
    if isinstance(kind, GaugeKind):
        return kind

    allowed = {k.value for k in GaugeKind}
    if kind not in allowed:
        raise ValueError(f"Invalid gauge kind '{kind}'. Allowed: {sorted(allowed)}")
    return GaugeKind(kind)


@dataclass(frozen=True)
class Gauge:
    """
    What it does:
    - Holds an increasing weight function h with h(0) = 0 on [0, radius].

    Why it matters:
    - Contents, slope constants and the gauge-based inequalities all read h through
      this one object, so every kind behaves the same at the edges.

    Behavior:
    - Beyond `radius` the gauge is continued by the constant h(radius).
    - `derivative` is the right derivative (exact for power kinds).
    - The MODULUS kind wraps a measure's exact modulus; it may jump and is only
      used as a covering weight.
    """

    kind: GaugeKind
    radius: float = math.inf
    b: float = 1.0
    p: float = 1.0
    q: float = 0.0
    xs: tuple[float, ...] = ()
    hs: tuple[float, ...] = ()
    evaluator: Callable[[float], float] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", _normalize_gauge_kind(self.kind))
        if not self.radius > 0:
            raise DomainError(f"Gauge radius must be > 0, got {self.radius!r}")

        if self.kind in (GaugeKind.POWER, GaugeKind.POWER_LOG):
            if not (self.b > 0 and self.p > 0):
                raise DomainError(f"Gauge needs b > 0 and p > 0, got b={self.b}, p={self.p}")
        if self.kind is GaugeKind.POWER_LOG:
            if not math.isfinite(self.radius):
                raise DomainError("power_log gauge needs a finite radius")
            if self.p - max(self.q, 0.0) <= 0:
                raise DomainError("power_log gauge is not increasing on (0, radius]")
        if self.kind is GaugeKind.TABULATED:
            xs = np.asarray(self.xs, dtype=float)
            hs = np.asarray(self.hs, dtype=float)
            if xs.size < 2 or xs.shape != hs.shape:
                raise DomainError("tabulated gauge needs matching xs/hs with >= 2 samples")
            if xs[0] != 0.0 or hs[0] != 0.0:
                raise DomainError("tabulated gauge must start at (0, 0)")
            if np.any(np.diff(xs) <= 0) or np.any(np.diff(hs) <= 0):
                raise DomainError("tabulated gauge must be strictly increasing")
            object.__setattr__(self, "radius", float(xs[-1]))
        if self.kind is GaugeKind.MODULUS and self.evaluator is None:
            raise DomainError("modulus gauge needs an evaluator")

    # --- constructors ---

    @classmethod
    def power(cls, b: float, p: float, *, radius: float = math.inf) -> Gauge:
        return cls(kind=GaugeKind.POWER, b=float(b), p=float(p), radius=radius)

    @classmethod
    def power_log(cls, b: float, p: float, q: float, *, radius: float) -> Gauge:
        return cls(kind=GaugeKind.POWER_LOG, b=float(b), p=float(p), q=float(q), radius=radius)

    @classmethod
    def tabulated(cls, xs, hs) -> Gauge:
        return cls(
            kind=GaugeKind.TABULATED,
            xs=tuple(float(x) for x in xs),
            hs=tuple(float(h) for h in hs),
        )

    @classmethod
    def from_modulus(cls, evaluator: Callable[[float], float], *, radius: float) -> Gauge:
        return cls(kind=GaugeKind.MODULUS, evaluator=evaluator, radius=radius)

    # --- evaluation ---

    def __call__(self, x: float) -> float:
        if x < 0:
            raise DomainError(f"Gauge argument must be >= 0, got {x!r}")
        x = min(float(x), self.radius)

        if self.kind is GaugeKind.POWER:
            return self.b * x**self.p
        if self.kind is GaugeKind.POWER_LOG:
            if x == 0.0:
                return 0.0
            return self.b * x**self.p * math.log(math.e * self.radius / x) ** self.q
        if self.kind is GaugeKind.TABULATED:
            return float(np.interp(x, self.xs, self.hs))
        return float(self.evaluator(x))

    def derivative(self, x: float) -> float:
        if not x > 0:
            raise DomainError(f"Gauge derivative needs x > 0, got {x!r}")
        if x >= self.radius:
            return 0.0

        if self.kind is GaugeKind.POWER:
            return self.b * self.p * x ** (self.p - 1.0)
        if self.kind is GaugeKind.POWER_LOG:
            log_term = math.log(math.e * self.radius / x)
            return (
                self.b
                * x ** (self.p - 1.0)
                * log_term ** (self.q - 1.0)
                * (self.p * log_term - self.q)
            )
        if self.kind is GaugeKind.TABULATED:
            xs = np.asarray(self.xs)
            i = min(int(np.searchsorted(xs, x, side="right")) - 1, xs.size - 2)
            return (self.hs[i + 1] - self.hs[i]) / (self.xs[i + 1] - self.xs[i])
        raise DomainError("modulus gauge has no derivative")

    @property
    def at_radius(self) -> float:
        return self(self.radius) if math.isfinite(self.radius) else math.inf


def slope_s(h: Gauge, d: int) -> float:
    """
    s_h = 1 / (inf t·h'(t)/h(t) - (d - 2)), or +inf when the infimum does not exceed d - 2.

    Tabulated gauges take the infimum over both ends of every linear piece, which is
    exact for piecewise-linear h but still only as good as the table.
    """
    require_dimension(d)

    if h.kind is GaugeKind.POWER:
        lowest = h.p
    elif h.kind is GaugeKind.POWER_LOG:
        lowest = h.p - max(h.q, 0.0)
    elif h.kind is GaugeKind.TABULATED:
        xs = np.asarray(h.xs)
        hs = np.asarray(h.hs)
        slopes = np.diff(hs) / np.diff(xs)
        left = np.where(hs[:-1] > 0, xs[:-1] * slopes / np.where(hs[:-1] > 0, hs[:-1], 1.0), 1.0)
        right = xs[1:] * slopes / hs[1:]
        lowest = float(min(left.min(), right.min()))
    else:
        return math.inf

    excess = lowest - (d - 2)
    return 1.0 / excess if excess > 0 else math.inf


def slope_caveats(h: Gauge) -> tuple[str, ...]:
    """Notes that travel with s_h into a record; a tabulated s_h is only as good as its grid."""
    return (GRID_APPROXIMATE,) if h.kind is GaugeKind.TABULATED else ()


def require_admissible(h: Gauge, d: int) -> float:
    s = slope_s(h, d)
    if not math.isfinite(s):
        raise InadmissibleGaugeError(
            f"Gauge {h.kind.value} fails the slope condition inf t·h'(t)/h(t) > d-2 for d={d}"
        )
    return s


def log_slope_infimum(h: Gauge, d: int, *, n: int = 2000, lower: float = 1e-8) -> float:
    """Numeric counterpart of slope_s on a log grid of (radius·lower, radius)."""
    top = h.radius if math.isfinite(h.radius) else 1.0
    ts = np.geomspace(top * lower, top, n, endpoint=False)
    ratios = [t * h.derivative(t) / h(t) for t in ts]
    excess = min(ratios) - (d - 2)
    return 1.0 / excess if excess > 0 else math.inf


def gauge_inverse(h: Gauge, M: float) -> float:
    """
    What it does:
    - Returns the unique x in [0, radius] with h(x) = M.

    Behavior:
    - Closed form (M/b)^(1/p) for power gauges, exact piecewise inverse for tables,
      bisection to relative `settings.bisection_rtol` otherwise.
    - M above h(radius) (beyond rounding) raises OutOfRangeError.
    """
    if M < 0:
        raise DomainError(f"gauge_inverse needs M >= 0, got {M!r}")
    if h.kind is GaugeKind.MODULUS:
        raise DomainError("modulus gauge is not invertible")
    if M == 0:
        return 0.0

    top = h.at_radius
    if M > top * (1.0 + 1e-12):
        raise OutOfRangeError(f"M={M!r} exceeds h(r)={top!r}")
    if M >= top:
        return h.radius

    if h.kind is GaugeKind.POWER:
        return min((M / h.b) ** (1.0 / h.p), h.radius)
    if h.kind is GaugeKind.TABULATED:
        return float(np.interp(M, h.hs, h.xs))

    return float(
        optimize.bisect(
            lambda x: h(x) - M,
            0.0,
            h.radius,
            xtol=1e-300,
            rtol=max(settings.bisection_rtol, 4 * np.finfo(float).eps),
            maxiter=settings.bisection_max_iter,
            disp=False,
        )
    )


def _power_tail(h: Gauge, d: int, x: float) -> float:
    """∫ from radius to x of h(radius)/t^(d-1) dt, zero when x <= radius."""
    r = h.radius
    if x <= r:
        return 0.0
    if d == 2:
        return h(r) * math.log(x / r)
    return h(r) * (r ** (2 - d) - x ** (2 - d)) / (d - 2)


def dini_integral(h: Gauge, d: int, x: float) -> float:
    """∫_0^x h(t)/t^(d-1) dt; +inf when the integral diverges at 0."""
    require_dimension(d)
    if not x > 0:
        raise DomainError(f"dini_integral needs x > 0, got {x!r}")

    head = min(x, h.radius)
    tail = _power_tail(h, d, x)

    if h.kind is GaugeKind.POWER:
        e = h.p - d + 2
        if e <= 0:
            return math.inf
        return h.b * head**e / e + tail

    if h.kind is GaugeKind.TABULATED:
        xs = np.asarray(h.xs)
        hs = np.asarray(h.hs)
        knots = np.concatenate([xs[xs < head], [head]])
        values = np.interp(knots, xs, hs)
        total = 0.0
        for a, bnd, ha, hb in zip(knots[:-1], knots[1:], values[:-1], values[1:], strict=True):
            beta = (hb - ha) / (bnd - a)
            alpha = ha - beta * a
            if a == 0.0 and d >= 3 and beta > 0:
                return math.inf
            total += _linear_piece(alpha, beta, a, bnd, d)
        return total + tail

    if h.kind is GaugeKind.POWER_LOG:
        if h.p < d - 2 or (h.p == d - 2 and h.q >= -1):
            return math.inf
        value, _ = integrate.quad(
            lambda u: h(math.exp(u)) * math.exp((2 - d) * u),
            -np.inf,
            math.log(head),
            limit=200,
        )
        return value + tail

    raise DomainError("dini_integral is not defined for modulus gauges")


def _linear_piece(alpha: float, beta: float, a: float, b: float, d: int) -> float:
    """∫_a^b (alpha + beta·t)/t^(d-1) dt for 0 <= a < b."""
    if d == 2:
        const = alpha * math.log(b / a) if alpha != 0.0 else 0.0
        return const + beta * (b - a)
    if d == 3:
        const = alpha * (1.0 / a - 1.0 / b) if alpha != 0.0 else 0.0
        return const + beta * math.log(b / a)
    const = alpha * (a ** (2 - d) - b ** (2 - d)) / (d - 2) if alpha != 0.0 else 0.0
    return const + beta * (a ** (3 - d) - b ** (3 - d)) / (d - 3)


def dini_bound(h: Gauge, d: int, x: float) -> float:
    """s_h·h(x)/x^(d-2), the majorant of dini_integral for admissible gauges."""
    s = slope_s(h, d)
    if not math.isfinite(s):
        return math.inf
    return s * h(x) / x ** (d - 2)
