import math

import pytest

from dsubh_bounds.core.enums import RecordStatus, TheoremId
from dsubh_bounds.dsubh.integrate import PlusIntegral
from dsubh_bounds.verify.records import (
    CAVEAT_RHS_SCALED,
    Factor,
    assemble,
    passes,
    rejected,
    summarize,
)


def _record(lhs: float, factors: list[float], **kw):
    return assemble(
        label="r",
        theorem=TheoremId.T1,
        lhs=PlusIntegral(lhs, kw.pop("err", 0.0)),
        factors=[Factor(f"f{i}", v) for i, v in enumerate(factors)],
        **kw,
    )


def test_rhs_is_the_product_of_factors():
    rec = _record(5.0, [2.0, 3.0], err=0.5)
    assert rec.rhs == 6.0
    assert rec.lhs_upper == 5.5
    assert rec.status is RecordStatus.OK
    assert rec.ratio == pytest.approx(5.5 / 6.0)


def test_zero_times_infinite_factor_is_zero():
    rec = _record(0.0, [0.0, math.inf])
    assert rec.rhs == 0.0
    assert rec.ok
    assert rec.ratio == 0.0


def test_rhs_scale_adds_factor_and_caveat():
    rec = _record(5.0, [2.0, 3.0], rhs_scale=0.5)
    assert rec.rhs == 3.0
    assert rec.status is RecordStatus.VIOLATION
    assert CAVEAT_RHS_SCALED in rec.caveats
    assert rec.factor("rhs_scale") == 0.5


def test_nan_side_rejects_the_record():
    rec = _record(math.nan, [1.0])
    assert rec.status is RecordStatus.REJECTED
    assert math.isnan(rec.ratio)


def test_lhs_flags_become_caveats_once():
    rec = assemble(
        label="r",
        theorem=TheoremId.T1,
        lhs=PlusIntegral(1.0, 0.0, ("unconverged",)),
        factors=[Factor("a", 2.0)],
        caveats=["unconverged", "stochastic-T"],
    )
    assert rec.caveats == ("unconverged", "stochastic-T")


def test_pass_tolerance_is_relative_plus_absolute():
    assert passes(1.0005, 1.0, tol=1e-3, abs_tol=0.0)
    assert not passes(1.002, 1.0, tol=1e-3, abs_tol=0.0)
    assert passes(1e-10, 0.0, tol=1e-3, abs_tol=1e-9)


def test_detail_and_factor_lookup():
    rec = assemble(
        label="r",
        theorem=TheoremId.T1,
        lhs=PlusIntegral(1.0, 0.0),
        factors=[Factor("A_d", 10.0, "constant_A(d, r, R)")],
        details=[("M", 1.0)],
    )
    assert rec.detail("M") == 1.0
    assert rec.factor("A_d") == 10.0
    with pytest.raises(KeyError):
        rec.detail("dini")


def test_rejected_record_carries_reason_only():
    rec = rejected("x", None, "malformed case: boom")
    assert rec.status is RecordStatus.REJECTED
    assert rec.theorem is None
    assert math.isnan(rec.lhs)
    assert not rec.ok


def test_summary_counts_and_exit_code():
    records = [
        _record(1.0, [2.0]),
        _record(3.0, [2.0]),
        rejected("x", TheoremId.T1, "no"),
    ]
    summary = summarize(records)
    assert (summary.total, summary.ok, summary.violations, summary.rejected) == (3, 1, 1, 1)
    assert summary.exit_code == 1
    assert summarize(records[:1]).exit_code == 0
    assert summarize([]).exit_code == 0
