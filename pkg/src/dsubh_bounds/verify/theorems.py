"""
Both sides of every inequality, evaluated on one case.

Each `verify_*` function checks the hypotheses of its inequality, integrates U⁺ for the
left side and multiplies the right side out of named factors. Hypotheses that fail
raise CaseRejected; `run_case` turns that, and any ValueError or ArithmeticError, into
a rejected record.
"""

from __future__ import annotations

import dataclasses
import functools
import logging
import math
from collections.abc import Callable

import numpy as np

from dsubh_bounds.config.settings import settings
from dsubh_bounds.core.constants import c_p, constant_A, hat_d, xmul
from dsubh_bounds.core.enums import RecordStatus, TheoremId
from dsubh_bounds.core.gauge import Gauge, gauge_inverse, slope_caveats, slope_s
from dsubh_bounds.dsubh.characteristic import CharacteristicFunctional, NevanlinnaCharacteristic
from dsubh_bounds.dsubh.function import DeltaSubharmonic
from dsubh_bounds.dsubh.integrate import PlusIntegral, integrate_plus_against
from dsubh_bounds.hausdorff.cover import content_upper
from dsubh_bounds.hausdorff.sets import CompactSet
from dsubh_bounds.measures.ball_mass import (
    ball_mass_bounds,
    bounding_radius,
    local_power,
    support_radius,
    support_sample,
    total_mass,
)
from dsubh_bounds.measures.counting import radial_counting_N
from dsubh_bounds.measures.curves import jacobian_violations, lipschitz_constants
from dsubh_bounds.measures.geometry import box_distance_range
from dsubh_bounds.measures.models import (
    GridLebesgue,
    MeasureRep,
    PolylineLength,
    TriangulatedArea,
)
from dsubh_bounds.measures.modulus import modulus_of_continuity, modulus_profile
from dsubh_bounds.utils.errors import CaseRejected, QuadratureRefusedError
from dsubh_bounds.verify.cases import VerificationCase
from dsubh_bounds.verify.records import Factor, VerificationRecord, assemble, rejected

logger = logging.getLogger(__name__)

_GRID_FLOOR = 1e-6
_DOMINATION_SLACK = 1e-9
_MAX_DISKBALL_CENTERS = 24

CAVEAT_RHS_LOWER = "rhs-lower-bound"
CAVEAT_SUP_SUPPORT = "sup-over-supp-mu_r"
CAVEAT_FULL_MODULUS = "modulus-of-unrestricted-measure"
CAVEAT_NOT_MONOTONE = "substitution-not-monotone"
CAVEAT_STOCHASTIC = "stochastic-T"


# --- shared pieces ---


def _functional(characteristic: CharacteristicFunctional | None) -> CharacteristicFunctional:
    return characteristic if characteristic is not None else NevanlinnaCharacteristic()


def _characteristic(
    T: CharacteristicFunctional, U: DeltaSubharmonic, r: float, R: float
) -> tuple[Factor, list[str]]:
    try:
        value = T(U, r, R)
    except QuadratureRefusedError as e:
        raise CaseRejected(
            f"a charge lies {e.distance:.3g} from the sphere |x| = {R:g}; quadrature refused"
        ) from e
    notes = [CAVEAT_STOCHASTIC] if value.stochastic else []
    return Factor("T_U", value.value, f"characteristic on {value.nodes} nodes"), notes


def _lhs(U: DeltaSubharmonic, mu: MeasureRep, within: float | None = None) -> PlusIntegral:
    return integrate_plus_against(U, mu, within=within)


def _require_support(mu: MeasureRep, r: float) -> None:
    reach = bounding_radius(mu)
    if reach > r * (1.0 + 1e-12):
        raise CaseRejected(f"supp μ reaches radius {reach:.6g}, outside B̄(r) for r={r:g}")


def _log_factor(name: str, numerator: float, denominator: float) -> Factor:
    if denominator == 0.0:
        return Factor(name, math.inf, f"ln({numerator:.6g}/0)")
    value = math.log(numerator / denominator)
    if not value > 0:
        raise CaseRejected(
            f"logarithmic factor ln({numerator:.6g}/{denominator:.6g}) is not positive"
        )
    return Factor(name, value, f"ln({numerator:.6g}/{denominator:.6g})")


def modulus_grid(mu: MeasureRep, r: float) -> tuple[np.ndarray, np.ndarray]:
    """Certified upper bounds of h_μ on a log grid of [r·1e-6, r], made monotone."""
    ts = np.geomspace(r * _GRID_FLOOR, r, settings.dini_grid_points)
    bounds = modulus_profile(mu, ts.tolist())
    return ts, np.array([b.upper for b in bounds])


def dini_upper(mu: MeasureRep, d: int, ts: np.ndarray, uppers: np.ndarray) -> float:
    """
    Upper bound of ∫_0^r h_μ(t)/t^(d-1) dt from grid upper bounds.

    On each grid step the modulus is bounded by its value at the right end; below the
    grid the local power law h_μ(t) ≤ b·t^p takes over.
    """
    b, p = local_power(mu)
    e = p + 2 - d
    if total_mass(mu) > 0 and not e > 0:
        raise CaseRejected(
            f"Dini condition fails: near 0 only h_μ(t) ≤ {b:.4g}·t^{p:g} is known "
            f"and t^{p:g}/t^{d - 1} is not integrable"
        )
    head = b * ts[0] ** e / e if e > 0 else 0.0
    if d == 2:
        widths = np.log(ts[1:] / ts[:-1])
    else:
        widths = (ts[:-1] ** (2 - d) - ts[1:] ** (2 - d)) / (d - 2)
    return head + float(np.sum(uppers[1:] * widths))


def _require_domination(
    ts: np.ndarray, uppers: np.ndarray, bound: Callable[[float], float], what: str
) -> None:
    for t, u in zip(ts, uppers, strict=True):
        limit = bound(float(t))
        if u > limit * (1.0 + _DOMINATION_SLACK):
            raise CaseRejected(
                f"hypothesis h_μ(t) ≤ {what} fails at t={t:.6g}: {u:.6g} > {limit:.6g}"
            )


def _require_gauge(case: VerificationCase) -> Gauge:
    if case.gauge is None:
        raise CaseRejected(f"{case.theorem.value} needs a gauge")
    return case.gauge


def _case_set(case: VerificationCase, mu: MeasureRep) -> CompactSet:
    return case.S if case.S is not None else CompactSet.from_measure(mu)


def _per_radius(
    case: VerificationCase,
    build: Callable[[float, float, str], VerificationRecord],
    *,
    limit: Callable[[float], float] | None = None,
) -> list[VerificationRecord]:
    """One record per sweep radius; a failing radius is rejected on its own."""
    if case.sweep is None:
        raise CaseRejected(f"{case.theorem.value} needs a sweep")
    records = []
    for r in case.sweep.radii:
        label = f"{case.label}@r={r:g}"
        s = case.sweep.s(r)
        upper = limit(r) if limit is not None else math.inf
        if not (0.0 < s < upper):
            msg = f"needs 0 < s(r) < {upper:.6g}, got s={s:.6g}"
            records.append(rejected(label, case.theorem, msg, r=r))
            continue
        try:
            records.append(build(r, s, label))
        except (CaseRejected, ValueError, ArithmeticError) as e:
            records.append(rejected(label, case.theorem, _reason(e), r=r, R=r + s))
    return records


def _reason(exc: Exception) -> str:
    return exc.reason if isinstance(exc, CaseRejected) else f"{type(exc).__name__}: {exc}"


# --- modulus of continuity ---


@dataclasses.dataclass(frozen=True)
class _ModulusParts:
    r: float
    R: float
    M: float
    dini: float
    lhs: PlusIntegral
    t_factor: Factor
    notes: list[str]


def _t1_parts(case: VerificationCase, T: CharacteristicFunctional) -> _ModulusParts:
    r, R = case.geometry()
    mu = case.require_measure()
    _require_support(mu, r)
    ts, uppers = modulus_grid(mu, r)
    dini = dini_upper(mu, case.dim, ts, uppers)
    t_factor, notes = _characteristic(T, case.U, r, R)
    return _ModulusParts(r, R, total_mass(mu), dini, _lhs(case.U, mu), t_factor, notes)


def _t1_factors(d: int, parts: _ModulusParts, mass: float) -> list[Factor]:
    r, R = parts.r, parts.R
    tail = xmul(mass, max(1.0, r ** (2 - d))) + hat_d(d) * parts.dini
    return [
        Factor("A_d", constant_A(d, r, R), "constant_A(d, r, R)"),
        parts.t_factor,
        Factor("mass_modulus", tail, "M·max{1, r^(2-d)} + ĥd·∫h_μ(t)/t^(d-1)dt (upper)"),
    ]


def verify_T1(
    case: VerificationCase, *, characteristic: CharacteristicFunctional | None = None
) -> VerificationRecord:
    """∫U⁺dμ ≤ A_d·T_U(r,R)·(M·max{1, r^(2-d)} + ĥd·∫_0^r h_μ(t)/t^(d-1) dt)."""
    parts = _t1_parts(case, _functional(characteristic))
    return assemble(
        label=case.label,
        theorem=case.theorem,
        lhs=parts.lhs,
        factors=_t1_factors(case.dim, parts, parts.M),
        rhs_scale=case.rhs_scale,
        details=[("M", parts.M), ("dini", parts.dini)],
        caveats=parts.notes,
        r=parts.r,
        R=parts.R,
    )


def verify_T1_sweep(
    case: VerificationCase, *, characteristic: CharacteristicFunctional | None = None
) -> list[VerificationRecord]:
    """Whole-space form: μ restricted to B̄(r), R = r + s(r), for every sweep radius."""
    T = _functional(characteristic)
    mu = case.require_measure()
    d = case.dim
    origin = np.zeros(d)
    b, p = local_power(mu)
    if total_mass(mu) > 0 and not p > d - 2:
        raise CaseRejected(
            f"μ is not locally summable against t^(1-d): h_μ(t) ≤ {b:.4g}·t^{p:g} only"
        )

    def build(r: float, s: float, label: str) -> VerificationRecord:
        R = r + s
        ts, uppers = modulus_grid(mu, r)
        dini = dini_upper(mu, d, ts, uppers)
        mass, _ = ball_mass_bounds(mu, origin, r)
        t_factor, notes = _characteristic(T, case.U, r, R)
        parts = _ModulusParts(r, R, mass, dini, _lhs(case.U, mu, within=r), t_factor, notes)
        return assemble(
            label=label,
            theorem=case.theorem,
            lhs=parts.lhs,
            factors=_t1_factors(d, parts, mass),
            rhs_scale=case.rhs_scale,
            details=[("M", mass), ("dini", dini), ("s", s)],
            caveats=[*notes, CAVEAT_FULL_MODULUS],
            r=r,
            R=R,
        )

    return _per_radius(case, build)


# --- gauge domination ---


@dataclasses.dataclass(frozen=True)
class _GaugeParts:
    r: float
    R: float
    h: Gauge
    s_h: float
    M: float
    lhs: PlusIntegral
    t_factor: Factor
    notes: list[str]


def _admissible_slope(h: Gauge, d: int) -> float:
    s_h = slope_s(h, d)
    if not math.isfinite(s_h):
        raise CaseRejected(f"gauge fails the slope condition inf t·h'(t)/h(t) > {d - 2}")
    return s_h


def _t2_parts(case: VerificationCase, T: CharacteristicFunctional) -> _GaugeParts:
    r, R = case.geometry()
    mu = case.require_measure()
    h = _require_gauge(case)
    d = case.dim
    s_h = _admissible_slope(h, d)
    _require_support(mu, r)
    ts, uppers = modulus_grid(mu, r)
    _require_domination(ts, uppers, h, "h(t)")
    t_factor, notes = _characteristic(T, case.U, r, R)
    notes = [*notes, *slope_caveats(h)]
    return _GaugeParts(r, R, h, s_h, total_mass(mu), _lhs(case.U, mu), t_factor, notes)


def _gauge_terms(d: int, h: Gauge, s_h: float, r: float, mass: float) -> list[Factor]:
    """M and the h⁻¹(M) factor shared by every gauge form of the bound."""
    top = h(r)
    if mass > top * (1.0 + 1e-12):
        raise CaseRejected(f"mass {mass:.6g} exceeds h(r) = {top:.6g}; h⁻¹ is undefined there")
    x = gauge_inverse(h, min(mass, top))

    if d == 2:
        if x == 0.0:
            gauge = Factor("gauge", math.inf, "ln(e^(1+s_h)·r/0)")
        else:
            value = 1.0 + s_h + math.log(r / x)
            if not value > 0:
                raise CaseRejected(f"ln(e^(1+s_h)·r/h⁻¹(M)) = {value:.6g} is not positive")
            gauge = Factor("gauge", value, "ln(e^(1+s_h)·r/h⁻¹(M))")
    else:
        term = math.inf if x == 0.0 else 1.0 + (1.0 + (d - 2) * s_h) / x ** (d - 2)
        gauge = Factor("gauge", term, "1 + (1+(d-2)s_h)/h⁻¹(M)^(d-2)")
    return [Factor("M", mass, "total mass"), gauge]


def _t2_factors(d: int, parts: _GaugeParts, mass: float) -> list[Factor]:
    r, R = parts.r, parts.R
    if d == 2:
        prefactor = Factor("prefactor", 5.0 * (R + r) / (R - r), "5(R+r)/(R-r)")
    else:
        prefactor = Factor("A_d", constant_A(d, r, R), "constant_A(d, r, R)")
    return [prefactor, parts.t_factor, *_gauge_terms(d, parts.h, parts.s_h, r, mass)]


def verify_T2(
    case: VerificationCase, *, characteristic: CharacteristicFunctional | None = None
) -> VerificationRecord:
    parts = _t2_parts(case, _functional(characteristic))
    return assemble(
        label=case.label,
        theorem=case.theorem,
        lhs=parts.lhs,
        factors=_t2_factors(case.dim, parts, parts.M),
        rhs_scale=case.rhs_scale,
        details=[("M", parts.M), ("s_h", parts.s_h)],
        caveats=parts.notes,
        r=parts.r,
        R=parts.R,
    )


def verify_T2_sweep(
    case: VerificationCase, *, characteristic: CharacteristicFunctional | None = None
) -> list[VerificationRecord]:
    """
    What it does:
    - Whole-space gauge form at every sweep radius: μ restricted to B̄(r), R = r + s(r).

    Behavior:
    - d = 2: 5(1+2r/s)·T_U(r, r+s)·μ(B̄(r))·ln(e^(1+s_h)·r/h⁻¹(μ(B̄(r)))).
    - d > 2: 5d(1+2r/s)^(d-1)(1+s)^(d-2)·T_U(r, r+s) times the same mass and h⁻¹ term as
      the gauge bound on a ball.
    - h must dominate the modulus of the whole measure; it is checked on [0, r] per radius.
    """
    T = _functional(characteristic)
    mu = case.require_measure()
    h = _require_gauge(case)
    d = case.dim
    s_h = _admissible_slope(h, d)
    origin = np.zeros(d)

    def build(r: float, s: float, label: str) -> VerificationRecord:
        ts, uppers = modulus_grid(mu, r)
        _require_domination(ts, uppers, h, "h(t)")
        mass, _ = ball_mass_bounds(mu, origin, r)
        t_factor, notes = _characteristic(T, case.U, r, r + s)
        widen = 1.0 + 2.0 * r / s
        if d == 2:
            prefactor = Factor("prefactor", 5.0 * widen, "5(1+2r/s)")
        else:
            pre = 5.0 * d * widen ** (d - 1) * (1.0 + s) ** (d - 2)
            prefactor = Factor("prefactor", pre, "5d(1+2r/s)^(d-1)(1+s)^(d-2)")
        return assemble(
            label=label,
            theorem=case.theorem,
            lhs=_lhs(case.U, mu, within=r),
            factors=[prefactor, t_factor, *_gauge_terms(d, h, s_h, r, mass)],
            rhs_scale=case.rhs_scale,
            details=[("M", mass), ("s_h", s_h), ("s", s)],
            caveats=[*notes, *slope_caveats(h), CAVEAT_FULL_MODULUS],
            r=r,
            R=r + s,
        )

    return _per_radius(case, build)


# --- mass replaced by a Hausdorff content ---


def _modulus_gauge(mu: MeasureRep, r: float) -> Gauge:
    @functools.lru_cache(maxsize=None)
    def upper(t: float) -> float:
        return modulus_of_continuity(mu, t).upper

    return Gauge.from_modulus(upper, radius=r)


def _mark_not_monotone(
    original: VerificationRecord, substituted: VerificationRecord, mass: float, content: float
) -> VerificationRecord:
    grows = substituted.rhs >= original.rhs * (1.0 - 1e-12)
    dominates = mass <= content * (1.0 + 1e-12)
    if grows and dominates:
        return substituted
    return dataclasses.replace(
        substituted,
        status=RecordStatus.VIOLATION,
        caveats=(*substituted.caveats, CAVEAT_NOT_MONOTONE),
    )


def verify_T3_substitution(
    case: VerificationCase, *, characteristic: CharacteristicFunctional | None = None
) -> tuple[VerificationRecord, VerificationRecord]:
    """
    What it does:
    - Evaluates the modulus bound (T3i) or the gauge bound (T3ii) twice: with the total mass
      M and with an upper bound of the h-content of supp μ in its place.

    Behavior:
    - T3i weighs covers by the modulus of μ itself, T3ii by the case gauge.
    - The covering radius is `case.t` (default unbounded); for t > r the ball B̄(r) is an
      admissible cover, so the content is clipped to h(r).
    - The substituted record is a violation if its rhs is smaller than the original's or
      if the content bound falls below M.
    """
    T = _functional(characteristic)
    mu = case.require_measure()
    d = case.dim
    t = case.t if case.t is not None else math.inf
    first = f"{case.label}/original"
    second = f"{case.label}/substituted"

    if case.theorem is TheoremId.T3I:
        mparts = _t1_parts(case, T)
        r, R, M = mparts.r, mparts.R, mparts.M
        h = _modulus_gauge(mu, r)
        factors_for: Callable[[float], list[Factor]] = functools.partial(_t1_factors, d, mparts)
        lhs, notes = mparts.lhs, mparts.notes
        extra = [("dini", mparts.dini)]
    else:
        gparts = _t2_parts(case, T)
        r, R, M, h = gparts.r, gparts.R, gparts.M, gparts.h
        factors_for = functools.partial(_t2_factors, d, gparts)
        lhs, notes = gparts.lhs, gparts.notes
        extra = [("s_h", gparts.s_h)]

    def record(label: str, mass: float, details: list) -> VerificationRecord:
        return assemble(
            label=label,
            theorem=case.theorem,
            lhs=lhs,
            factors=factors_for(mass),
            rhs_scale=case.rhs_scale,
            details=[("M", M), *extra, *details],
            caveats=notes,
            r=r,
            R=R,
        )

    original = record(first, M, [])
    estimate = content_upper(_case_set(case, mu), h, t)
    content = min(estimate.upper, h(r)) if t > r else estimate.upper
    cover = estimate.cover
    details = [("content", content), ("t", t), ("cover_count", float(cover.count if cover else 0))]
    try:
        substituted = record(second, content, details)
    except CaseRejected as e:
        return original, rejected(second, case.theorem, e.reason, r=r, R=R)
    return original, _mark_not_monotone(original, substituted, M, content)


# --- power-law modulus and p-content ---


def _power_data(case: VerificationCase) -> tuple[float, float]:
    d = case.dim
    p = case.p if case.p is not None else (case.gauge.p if case.gauge is not None else None)
    b = case.b if case.b is not None else (case.gauge.b if case.gauge is not None else None)
    if p is None or b is None:
        raise CaseRejected(f"{case.theorem.value} needs the exponent p and the constant b")
    if not (d - 2 < p <= d):
        raise CaseRejected(f"exponent p={p:g} lies outside ({d - 2}, {d}]")
    if not b > 0:
        raise CaseRejected(f"constant b must be > 0, got {b:g}")
    return p, b


def verify_T5(
    case: VerificationCase, *, characteristic: CharacteristicFunctional | None = None
) -> tuple[VerificationRecord, VerificationRecord]:
    """
    Final form of the bound plus the intermediate form that still carries c_p.

    The p-content enters through its cover upper bound; the covering radius is
    `case.t` (default unbounded).
    """
    T = _functional(characteristic)
    r, R = case.geometry()
    mu = case.require_measure()
    d = case.dim
    p, b = _power_data(case)
    _require_support(mu, r)
    ts, uppers = modulus_grid(mu, r)
    _require_domination(ts, uppers, lambda x: b * x**p, f"{b:.6g}·t^{p:g}")

    t = case.t if case.t is not None else math.inf
    cp = c_p(p)
    m = content_upper(_case_set(case, mu), Gauge.power(cp, p), t).upper
    t_factor, notes = _characteristic(T, case.U, r, R)
    lhs = _lhs(case.U, mu)
    content = Factor("content", m, f"p-content upper bound, t={t:g}")

    if d == 2:
        ratio = (R + r) / (R - r)
        final = [
            Factor("prefactor", b / p * ratio, "(b/p)(R+r)/(R-r)"),
            t_factor,
            content,
            _log_factor("log", math.pi * math.e ** (p + 1) * r**p, m),
        ]
        intermediate = [
            Factor("prefactor", 5.0 * b / (p * cp) * ratio, "5b/(p·c_p)·(R+r)/(R-r)"),
            t_factor,
            content,
            _log_factor("log", cp * math.e ** (1 + p) * r**p, m),
        ]
    else:
        A = constant_A(d, r, R)
        k = (d - 2) / p
        tail = m ** (1.0 - k) if m > 0 else 0.0
        final = [
            Factor("prefactor", b * d**d * A, "b·d^d·A_d"),
            t_factor,
            Factor("content_term", m + tail / (p - d + 2), "m + m^(1-(d-2)/p)/(p-d+2)"),
        ]
        intermediate = [
            Factor("prefactor", b * A, "b·A_d"),
            t_factor,
            Factor(
                "content_term",
                m / cp + cp ** (k - 1.0) * (d + 2) / (p - d + 2) * tail,
                "m/c_p + c_p^((d-2)/p-1)·(d+2)/(p-d+2)·m^(1-(d-2)/p)",
            ),
        ]

    def record(label: str, factors: list[Factor]) -> VerificationRecord:
        return assemble(
            label=label,
            theorem=case.theorem,
            lhs=lhs,
            factors=factors,
            rhs_scale=case.rhs_scale,
            details=[("M", total_mass(mu)), ("p", p), ("b", b), ("content", m)],
            caveats=notes,
            r=r,
            R=R,
        )

    return record(case.label, final), record(f"{case.label}/c_p-form", intermediate)


# --- Lebesgue measure ---


def _require_lebesgue(mu: MeasureRep) -> GridLebesgue:
    if not isinstance(mu, GridLebesgue) or mu.densities is not None:
        raise CaseRejected("Lebesgue corollaries need a unit-density grid_lebesgue measure")
    return mu


def _lebesgue_term(d: int, lam: float, r: float) -> Factor:
    if d == 2:
        return _log_factor("log", math.pi * math.e**3 * r * r, lam)
    return Factor("lambda_term", lam + lam ** (2.0 / d), "λ + λ^(2/d)")


def verify_COR_LEB(
    case: VerificationCase, *, characteristic: CharacteristicFunctional | None = None
) -> VerificationRecord:
    r, R = case.geometry()
    mu = _require_lebesgue(case.require_measure())
    d = case.dim
    _require_support(mu, r)
    lam = total_mass(mu)
    t_factor, notes = _characteristic(_functional(characteristic), case.U, r, R)
    if d == 2:
        factors = [
            Factor("prefactor", 8.0 * (R + r) / (R - r), "8(R+r)/(R-r)"),
            t_factor,
            Factor("lambda", lam, "cell area"),
            _lebesgue_term(d, lam, r),
        ]
    else:
        factors = [
            Factor("prefactor", 6.0 * d**d * constant_A(d, r, R), "6·d^d·A_d"),
            t_factor,
            _lebesgue_term(d, lam, r),
        ]
    return assemble(
        label=case.label,
        theorem=case.theorem,
        lhs=_lhs(case.U, mu),
        factors=factors,
        rhs_scale=case.rhs_scale,
        details=[("lambda", lam)],
        caveats=notes,
        r=r,
        R=R,
    )


def cells_inside(mu: GridLebesgue, r: float) -> GridLebesgue | None:
    """The cells of μ lying entirely in B̄(r), or None when there are none."""
    _, far = box_distance_range(mu.lower_corners, mu.cell, np.zeros(mu.dim))
    keep = far <= r * (1.0 + 1e-12)
    if not keep.any():
        return None
    cells = tuple(c for c, k in zip(mu.cells, keep, strict=True) if k)
    densities = None
    if mu.densities is not None:
        densities = tuple(w for w, k in zip(mu.densities, keep, strict=True) if k)
    return GridLebesgue(cell=mu.cell, cells=cells, densities=densities, origin=mu.origin)


def verify_COR_LEB_sweep(
    case: VerificationCase, *, characteristic: CharacteristicFunctional | None = None
) -> list[VerificationRecord]:
    """Whole-space Lebesgue form on the cells of E inside B̄(r), R = r + s(r)."""
    T = _functional(characteristic)
    mu = _require_lebesgue(case.require_measure())
    d = case.dim

    def build(r: float, s: float, label: str) -> VerificationRecord:
        inside = cells_inside(mu, r)
        lam = total_mass(inside) if inside is not None else 0.0
        lhs = _lhs(case.U, inside) if inside is not None else PlusIntegral(0.0, 0.0)
        t_factor, notes = _characteristic(T, case.U, r, r + s)
        widen = 1.0 + 2.0 * r / s
        if d == 2:
            factors = [
                Factor("prefactor", 8.0 * widen, "8(1+2r/s)"),
                t_factor,
                Factor("lambda", lam, "area of cells inside B̄(r)"),
                _lebesgue_term(d, lam, r),
            ]
        else:
            pre = 30.0 * d ** (d + 1) * widen ** (d - 1) * (1.0 + s) ** (d - 2)
            factors = [
                Factor("prefactor", pre, "30·d^(d+1)(1+2r/s)^(d-1)(1+s)^(d-2)"),
                t_factor,
                _lebesgue_term(d, lam, r),
            ]
        return assemble(
            label=label,
            theorem=case.theorem,
            lhs=lhs,
            factors=factors,
            rhs_scale=case.rhs_scale,
            details=[("lambda", lam), ("s", s)],
            caveats=notes,
            r=r,
            R=r + s,
        )

    return _per_radius(case, build)


# --- curves and surfaces ---


def _require_plain(mu: MeasureRep, kind: type, what: str):
    if not isinstance(mu, kind):
        raise CaseRejected(f"needs a {what} measure, got {type(mu).__name__}")
    if mu.weight != 1.0:
        raise CaseRejected(f"needs the plain {what} measure, got weight {mu.weight:g}")
    return mu


def _bilipschitz(mu: PolylineLength | TriangulatedArea):
    constants = lipschitz_constants(mu)
    if not constants.bilipschitz or not math.isfinite(constants.product):
        raise CaseRejected("the parametrisation is not bilipschitz")
    return constants


def verify_COR_CURVE(
    case: VerificationCase, *, characteristic: CharacteristicFunctional | None = None
) -> VerificationRecord:
    r, R = case.geometry()
    mu = _require_plain(case.require_measure(), PolylineLength, "curve length")
    _require_support(mu, r)
    lc = _bilipschitz(mu)
    sigma = mu.length
    t_factor, notes = _characteristic(_functional(characteristic), case.U, r, R)
    factors = [
        Factor(
            "prefactor", 15.0 * lc.product * (R + r) / (R - r), "15·Lip·Lip⁻¹·(R+r)/(R-r)"
        ),
        t_factor,
        Factor("sigma", sigma, "curve length"),
        _log_factor("log", math.pi * math.e**2 * r, sigma),
    ]
    return assemble(
        label=case.label,
        theorem=case.theorem,
        lhs=_lhs(case.U, mu),
        factors=factors,
        rhs_scale=case.rhs_scale,
        details=[("lip", lc.lip), ("lip_inv", lc.lip_inv), ("sigma", sigma)],
        caveats=notes,
        r=r,
        R=R,
    )


def verify_COR_CURVE_sweep(
    case: VerificationCase, *, characteristic: CharacteristicFunctional | None = None
) -> list[VerificationRecord]:
    """Whole-space curve form: the part of the curve in B̄(r), R = r + s(r)."""
    T = _functional(characteristic)
    mu = _require_plain(case.require_measure(), PolylineLength, "curve length")
    lc = _bilipschitz(mu)
    origin = np.zeros(2)

    def build(r: float, s: float, label: str) -> VerificationRecord:
        sigma, _ = ball_mass_bounds(mu, origin, r)
        t_factor, notes = _characteristic(T, case.U, r, r + s)
        factors = [
            Factor(
                "prefactor", 15.0 * lc.product * (1.0 + 2.0 * r / s), "15·Lip·Lip⁻¹·(1+2r/s)"
            ),
            t_factor,
            Factor("sigma", sigma, "length inside B̄(r)"),
            _log_factor("log", math.pi * math.e**2 * r, sigma),
        ]
        return assemble(
            label=label,
            theorem=case.theorem,
            lhs=_lhs(case.U, mu, within=r),
            factors=factors,
            rhs_scale=case.rhs_scale,
            details=[("sigma", sigma), ("s", s), ("lip", lc.lip), ("lip_inv", lc.lip_inv)],
            caveats=notes,
            r=r,
            R=r + s,
        )

    return _per_radius(case, build)


def verify_COR_SURF(
    case: VerificationCase, *, characteristic: CharacteristicFunctional | None = None
) -> VerificationRecord:
    r, R = case.geometry()
    mu = _require_plain(case.require_measure(), TriangulatedArea, "surface area")
    d = case.dim
    if d != 3:
        raise CaseRejected(f"the surface bound is set in d=3, got d={d}")
    _require_support(mu, r)
    lc = _bilipschitz(mu)
    bad = jacobian_violations(mu)
    if bad:
        raise CaseRejected(f"triangle {bad[0]} breaks the Jacobian bound of the parametrisation")
    sigma = float(mu.areas.sum())
    t_factor, notes = _characteristic(_functional(characteristic), case.U, r, R)
    pre = 3.0 * d ** (2 * d) * lc.product ** (d - 1) * constant_A(d, r, R)
    factors = [
        Factor("prefactor", pre, "3·d^(2d)·(Lip·Lip⁻¹)^(d-1)·A_d"),
        t_factor,
        Factor("sigma_term", sigma + sigma ** (1.0 / (d - 1)), "σ + σ^(1/(d-1))"),
    ]
    return assemble(
        label=case.label,
        theorem=case.theorem,
        lhs=_lhs(case.U, mu),
        factors=factors,
        rhs_scale=case.rhs_scale,
        details=[("lip", lc.lip), ("lip_inv", lc.lip_inv), ("sigma", sigma)],
        caveats=notes,
        r=r,
        R=R,
    )


# --- unit disk / ball ---


def _diskball_centers(mu: MeasureRep, r: float) -> np.ndarray:
    samples = support_sample(mu, r / 8.0)
    inside = samples[np.linalg.norm(samples, axis=1) <= r]
    if len(inside) <= _MAX_DISKBALL_CENTERS:
        return inside
    pick = np.unique(np.linspace(0, len(inside) - 1, _MAX_DISKBALL_CENTERS).round().astype(int))
    return inside[pick]


def _require_unit_ball(case: VerificationCase, mu: MeasureRep) -> None:
    locs, _ = case.U.charges
    if len(locs) and float(np.linalg.norm(locs, axis=1).max()) >= 1.0:
        raise CaseRejected("every charge of U must lie inside the unit ball")
    if support_radius(mu) >= 1.0:
        raise CaseRejected("supp μ must lie inside the unit ball")


def verify_DISKBALL(
    case: VerificationCase, *, characteristic: CharacteristicFunctional | None = None
) -> list[VerificationRecord]:
    """
    What it does:
    - The unit-ball bound with prefactor 3^(2d)/s^(d-1) at every sweep radius r in (0, 1).

    Behavior:
    - The supremum of N_y^{μ_r}(r) is taken over up to 24 points of supp μ_r, so the rhs
      is a lower bound of the true one; records carry the "rhs-lower-bound" caveat.
    """
    T = _functional(characteristic)
    mu = case.require_measure()
    d = case.dim
    _require_unit_ball(case, mu)
    origin = np.zeros(d)

    def build(r: float, s: float, label: str) -> VerificationRecord:
        radial, _ = ball_mass_bounds(mu, origin, r)
        centers = _diskball_centers(mu, r) if radial > 0 else np.zeros((0, d))
        counting = max(
            (radial_counting_N(mu, y, r, d, within=r) for y in centers), default=0.0
        )
        t_factor, notes = _characteristic(T, case.U, r, r + s)
        factors = [
            Factor("prefactor", 3.0 ** (2 * d) / s ** (d - 1), "3^(2d)/s^(d-1)"),
            t_factor,
            Factor(
                "mass_counting",
                radial / r ** (d - 2) + counting,
                "μ(B̄(r))/r^(d-2) + max over candidates of N_y^{μ_r}(r)",
            ),
        ]
        return assemble(
            label=label,
            theorem=case.theorem,
            lhs=_lhs(case.U, mu, within=r),
            factors=factors,
            rhs_scale=case.rhs_scale,
            details=[("mu_rad", radial), ("sup_N", counting), ("centers", float(len(centers)))],
            caveats=[*notes, CAVEAT_RHS_LOWER, CAVEAT_SUP_SUPPORT],
            r=r,
            R=r + s,
        )

    return _per_radius(case, build, limit=lambda r: 1.0 - r)


def verify_DISKBALL_gauge(
    case: VerificationCase, *, characteristic: CharacteristicFunctional | None = None
) -> list[VerificationRecord]:
    """
    The unit-ball gauge form: 15/s (d = 2) or 3^(2d)/s^(d-1) (d > 2) times T_U(r, r+s),
    μ(B̄(r)) and the h⁻¹ term, with h dominating the modulus of μ on [0, 1].
    """
    T = _functional(characteristic)
    mu = case.require_measure()
    h = _require_gauge(case)
    d = case.dim
    _require_unit_ball(case, mu)
    s_h = _admissible_slope(h, d)
    ts, uppers = modulus_grid(mu, 1.0)
    _require_domination(ts, uppers, h, "h(t)")
    origin = np.zeros(d)

    def build(r: float, s: float, label: str) -> VerificationRecord:
        mass, _ = ball_mass_bounds(mu, origin, r)
        t_factor, notes = _characteristic(T, case.U, r, r + s)
        if d == 2:
            prefactor = Factor("prefactor", 15.0 / s, "15/s")
        else:
            prefactor = Factor("prefactor", 3.0 ** (2 * d) / s ** (d - 1), "3^(2d)/s^(d-1)")
        return assemble(
            label=label,
            theorem=case.theorem,
            lhs=_lhs(case.U, mu, within=r),
            factors=[prefactor, t_factor, *_gauge_terms(d, h, s_h, r, mass)],
            rhs_scale=case.rhs_scale,
            details=[("mu_rad", mass), ("s_h", s_h), ("s", s)],
            caveats=[*notes, *slope_caveats(h)],
            r=r,
            R=r + s,
        )

    return _per_radius(case, build, limit=lambda r: 1.0 - r)


# --- dispatch ---


def run_case(
    case: VerificationCase, *, characteristic: CharacteristicFunctional | None = None
) -> list[VerificationRecord]:
    """Every record a case produces, in a fixed order; hypothesis failures become rejections."""
    th = case.theorem
    kw = {"characteristic": characteristic}
    try:
        if th is TheoremId.T1:
            if case.sweep is not None:
                return verify_T1_sweep(case, **kw)
            return [verify_T1(case, **kw)]
        if th in (TheoremId.T2C, TheoremId.T2D):
            _require_branch(case)
            if case.sweep is not None:
                return verify_T2_sweep(case, **kw)
            return [verify_T2(case, **kw)]
        if th in (TheoremId.T3I, TheoremId.T3II):
            return list(verify_T3_substitution(case, **kw))
        if th in (TheoremId.T5C, TheoremId.T5D):
            _require_branch(case)
            return list(verify_T5(case, **kw))
        if th is TheoremId.COR_LEB:
            return [verify_COR_LEB(case, **kw)]
        if th is TheoremId.COR_LEB_SWEEP:
            return verify_COR_LEB_sweep(case, **kw)
        if th is TheoremId.COR_CURVE:
            return [verify_COR_CURVE(case, **kw)]
        if th is TheoremId.COR_CURVE_SWEEP:
            return verify_COR_CURVE_sweep(case, **kw)
        if th is TheoremId.COR_SURF:
            return [verify_COR_SURF(case, **kw)]
        if case.gauge is not None:
            return verify_DISKBALL_gauge(case, **kw)
        return verify_DISKBALL(case, **kw)
    except (CaseRejected, QuadratureRefusedError, ValueError, ArithmeticError) as e:
        logger.info("Case %s rejected: %s", case.label, _reason(e))
        return [rejected(case.label, th, _reason(e), r=case.r, R=case.R)]


def _require_branch(case: VerificationCase) -> None:
    """T2C/T5C are the planar forms, T2D/T5D the forms for d > 2."""
    planar = case.theorem in (TheoremId.T2C, TheoremId.T5C)
    if planar != (case.dim == 2):
        raise CaseRejected(f"{case.theorem.value} does not apply in dimension {case.dim}")
