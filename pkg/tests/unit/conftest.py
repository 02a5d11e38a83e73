from __future__ import annotations

import pytest

from dsubh_bounds.config.settings import settings
from dsubh_bounds.core.enums import TheoremId
from dsubh_bounds.dsubh.function import DeltaSubharmonic
from dsubh_bounds.measures.models import Atomic, PolylineLength
from dsubh_bounds.testing.fakes import FakeCharacteristic
from dsubh_bounds.verify.cases import VerificationCase


@pytest.fixture(autouse=True)
def restore_settings():
    # tests may tweak the module-level settings; put them back afterwards
    snapshot = settings.model_dump()
    yield
    for name, value in snapshot.items():
        setattr(settings, name, value)


@pytest.fixture()
def unit_segment() -> PolylineLength:
    return PolylineLength(vertices=((0.0, 0.0), (1.0, 0.0)))


@pytest.fixture()
def two_atoms() -> Atomic:
    return Atomic(points=((-1.0, 0.0), (1.0, 0.0)), masses=(1.0, 1.0))


@pytest.fixture()
def log_z_minus_2() -> DeltaSubharmonic:
    return DeltaSubharmonic.from_rational(zeros=[2.0])


@pytest.fixture()
def fake_T() -> FakeCharacteristic:
    return FakeCharacteristic(value=1.0)


@pytest.fixture()
def make_case(log_z_minus_2):
    """Factory for planar cases against U = log|z - 2|; keyword overrides win."""

    def _make(theorem: TheoremId, mu, **kw) -> VerificationCase:
        fields = {"label": f"test-{theorem.value}", "r": 1.0, "R": 3.0, "U": log_z_minus_2}
        fields.update(kw)
        return VerificationCase(theorem=theorem, mu=mu, **fields)

    return _make
