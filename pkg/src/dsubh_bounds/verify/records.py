from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from dsubh_bounds.config.settings import settings
from dsubh_bounds.core.constants import xprod
from dsubh_bounds.core.enums import RecordStatus, TheoremId
from dsubh_bounds.dsubh.integrate import PlusIntegral

CAVEAT_RHS_SCALED = "rhs-scaled"


@dataclass(frozen=True)
class Factor:
    """One multiplicative piece of a right-hand side and where its value came from."""

    name: str
    value: float
    source: str = ""


@dataclass(frozen=True)
class VerificationRecord:
    """
    What it does:
    - One evaluated inequality: both sides, the pass flag and the provenance of the rhs.

    Behavior:
    - `factors` multiply (with 0·inf = 0) to `rhs`.
    - `details` holds named intermediate quantities that are not factors.
    - Rejected records carry only the reason; lhs and rhs stay nan.
    """

    label: str
    theorem: TheoremId | None
    status: RecordStatus
    lhs: float = math.nan
    lhs_err: float = 0.0
    rhs: float = math.nan
    factors: tuple[Factor, ...] = ()
    details: tuple[tuple[str, float], ...] = ()
    caveats: tuple[str, ...] = ()
    reason: str = ""
    tolerance: float = 0.0
    abs_tolerance: float = 0.0
    r: float | None = None
    R: float | None = None
    ms: float | None = None

    @property
    def ok(self) -> bool:
        return self.status is RecordStatus.OK

    @property
    def lhs_upper(self) -> float:
        return self.lhs + self.lhs_err

    @property
    def ratio(self) -> float:
        if self.status is RecordStatus.REJECTED:
            return math.nan
        if self.rhs == 0.0:
            return 0.0 if self.lhs_upper == 0.0 else math.inf
        return self.lhs_upper / self.rhs

    def detail(self, name: str) -> float:
        for key, value in self.details:
            if key == name:
                return value
        raise KeyError(name)

    def factor(self, name: str) -> float:
        for f in self.factors:
            if f.name == name:
                return f.value
        raise KeyError(name)


@dataclass(frozen=True)
class CorpusSummary:
    total: int
    ok: int
    violations: int
    rejected: int

    @property
    def exit_code(self) -> int:
        return 1 if self.violations else 0


@dataclass(frozen=True)
class CorpusResult:
    records: tuple[VerificationRecord, ...]
    summary: CorpusSummary
    seed: int = 0
    sweeps: dict[str, tuple[VerificationRecord, ...]] = field(default_factory=dict)


def passes(lhs_upper: float, rhs: float, *, tol: float, abs_tol: float) -> bool:
    return lhs_upper <= rhs * (1.0 + tol) + abs_tol


def assemble(
    *,
    label: str,
    theorem: TheoremId,
    lhs: PlusIntegral,
    factors: Sequence[Factor],
    rhs_scale: float = 1.0,
    details: Iterable[tuple[str, float]] = (),
    caveats: Iterable[str] = (),
    r: float | None = None,
    R: float | None = None,
) -> VerificationRecord:
    """Multiply the factors into the rhs and compare against lhs + error."""
    factors = list(factors)
    notes = list(lhs.flags) + list(caveats)
    if rhs_scale != 1.0:
        factors.append(Factor("rhs_scale", rhs_scale, "case override"))
        notes.append(CAVEAT_RHS_SCALED)

    rhs = xprod(f.value for f in factors)
    tol = settings.pass_tolerance
    abs_tol = settings.abs_tolerance
    if math.isnan(rhs) or math.isnan(lhs.value):
        status = RecordStatus.REJECTED
        reason = "an inequality side evaluated to nan"
    else:
        ok = passes(lhs.upper, rhs, tol=tol, abs_tol=abs_tol)
        status = RecordStatus.OK if ok else RecordStatus.VIOLATION
        reason = ""

    return VerificationRecord(
        label=label,
        theorem=theorem,
        status=status,
        lhs=lhs.value,
        lhs_err=lhs.error,
        rhs=rhs,
        factors=tuple(factors),
        details=tuple(details),
        caveats=tuple(dict.fromkeys(notes)),
        reason=reason,
        tolerance=tol,
        abs_tolerance=abs_tol,
        r=r,
        R=R,
    )


def rejected(
    label: str,
    theorem: TheoremId | None,
    reason: str,
    *,
    r: float | None = None,
    R: float | None = None,
) -> VerificationRecord:
    return VerificationRecord(
        label=label,
        theorem=theorem,
        status=RecordStatus.REJECTED,
        reason=reason,
        r=r,
        R=R,
    )


def summarize(records: Iterable[VerificationRecord]) -> CorpusSummary:
    records = list(records)
    count = {s: 0 for s in RecordStatus}
    for rec in records:
        count[rec.status] += 1
    return CorpusSummary(
        total=len(records),
        ok=count[RecordStatus.OK],
        violations=count[RecordStatus.VIOLATION],
        rejected=count[RecordStatus.REJECTED],
    )
