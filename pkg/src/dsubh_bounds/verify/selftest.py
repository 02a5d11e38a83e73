from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

from dsubh_bounds.core.constants import c_p, constant_A
from dsubh_bounds.core.enums import RecordStatus, TheoremId
from dsubh_bounds.core.gauge import Gauge, dini_integral
from dsubh_bounds.dsubh.function import DeltaSubharmonic
from dsubh_bounds.dsubh.quadrature import sphere_mean_plus
from dsubh_bounds.measures.models import PolylineLength
from dsubh_bounds.measures.modulus import modulus_of_continuity
from dsubh_bounds.verify.cases import VerificationCase
from dsubh_bounds.verify.lemmas import lemma_monotonicity_grid
from dsubh_bounds.verify.records import VerificationRecord
from dsubh_bounds.verify.theorems import run_case

CORRUPTION = 1e-6


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class SelfTestReport:
    checks: tuple[Check, ...]
    records: tuple[VerificationRecord, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def _close(name: str, got: float, want: float, rtol: float = 1e-9) -> Check:
    return Check(name, math.isclose(got, want, rel_tol=rtol), f"got {got!r}, want {want!r}")


def segment_case(*, rhs_scale: float = 1.0) -> VerificationCase:
    """U = log|z - 2| against arclength on [0, 1], r = 1, R = 3."""
    return VerificationCase(
        label="selftest-segment" if rhs_scale == 1.0 else "selftest-corrupted",
        theorem=TheoremId.COR_CURVE,
        U=DeltaSubharmonic.from_rational(zeros=[2.0]),
        mu=PolylineLength(vertices=((0.0, 0.0), (1.0, 0.0))),
        r=1.0,
        R=3.0,
        rhs_scale=rhs_scale,
    )


def _plumbing() -> list[Check]:
    segment = PolylineLength(vertices=((-0.5, 0.0), (0.5, 0.0)))
    expected: list[tuple[str, Callable[[], float], float]] = [
        ("constant_A(2, 1, 3)", lambda: constant_A(2, 1.0, 3.0), 10.0),
        ("constant_A(3, 1, 2)", lambda: constant_A(3, 1.0, 2.0), 45.0),
        ("c_p(1)", lambda: c_p(1.0), 2.0),
        ("c_p(2)", lambda: c_p(2.0), math.pi),
        (
            "sphere mean of log+|z| at R=2",
            lambda: sphere_mean_plus(DeltaSubharmonic.from_rational(zeros=[0.0]), 2.0),
            math.log(2.0),
        ),
        ("segment modulus at t=0.25", lambda: modulus_of_continuity(segment, 0.25).upper, 0.5),
        (
            "Dini integral of t^(-1/2) on (0, 1]",
            lambda: dini_integral(Gauge.power(1.0, 0.5), 2, 1.0),
            2.0,
        ),
    ]
    checks = [_close(name, fn(), want, rtol=1e-6) for name, fn, want in expected]

    for h, d in ((Gauge.power(1.0, 1.0), 2), (Gauge.power(4.0, 2.0), 3)):
        grid = lemma_monotonicity_grid(h, d, 1.0, n=200)
        checks.append(
            Check(
                f"substitution map monotone (p={h.p:g}, d={d})",
                grid.ok,
                f"worst relative drop {grid.worst_drop:.3g}",
            )
        )
    return checks


def run_selftest() -> SelfTestReport:
    """
    Plumbing checks plus one case evaluated twice: as is, and with its rhs scaled by
    1e-6. The run passes only if the first record is ok and the second a violation.
    """
    checks = _plumbing()
    clean = run_case(segment_case())
    corrupted = run_case(segment_case(rhs_scale=CORRUPTION))
    checks.append(
        Check(
            "clean case passes",
            all(r.status is RecordStatus.OK for r in clean),
            ", ".join(r.status.value for r in clean),
        )
    )
    checks.append(
        Check(
            "corrupted constant is detected",
            any(r.status is RecordStatus.VIOLATION for r in corrupted),
            ", ".join(r.status.value for r in corrupted),
        )
    )
    return SelfTestReport(checks=tuple(checks), records=(*clean, *corrupted))
