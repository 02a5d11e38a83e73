import math

import pytest

from dsubh_bounds.core.gauge import Gauge
from dsubh_bounds.utils.errors import DomainError, InadmissibleGaugeError
from dsubh_bounds.verify.lemmas import lemma_monotonicity_grid, substitution_map


@pytest.mark.unit
@pytest.mark.parametrize(
    ("h", "d"),
    [
        (Gauge.power(1.0, 1.0), 2),
        (Gauge.power(math.pi, 2.0), 2),
        (Gauge.power(4.0, 2.0), 3),
        (Gauge.power(1.0, 2.5), 3),
    ],
)
def test_substitution_map_is_monotone_for_power_gauges(h, d):
    report = lemma_monotonicity_grid(h, d, 1.0, n=200)
    assert report.ok
    assert report.points == 200
    assert report.first_drop_at is None


def test_planar_map_in_closed_form():
    # h(t) = t, s_h = 1: φ(x) = x·(2 + ln(r/x))
    phi = substitution_map(Gauge.power(1.0, 1.0), 2, 1.0)
    assert phi(0.0) == 0.0
    assert phi(0.5) == pytest.approx(0.5 * (2.0 + math.log(2.0)))


def test_spatial_map_in_closed_form():
    # h(t) = 4t² in d=3: φ(x) = x / sqrt(x/4) = 2·sqrt(x)
    phi = substitution_map(Gauge.power(4.0, 2.0), 3, 1.0)
    assert phi(1.0) == pytest.approx(2.0)


def test_inadmissible_gauge_is_refused():
    with pytest.raises(InadmissibleGaugeError):
        substitution_map(Gauge.power(1.0, 1.0), 3, 1.0)


def test_lemma_grid_needs_positive_radius():
    with pytest.raises(DomainError):
        lemma_monotonicity_grid(Gauge.power(1.0, 1.0), 2, 0.0)
