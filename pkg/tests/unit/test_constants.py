import math

import pytest

from dsubh_bounds.core.constants import (
    c_p,
    constant_A,
    hat_d,
    kernel_K,
    require_dimension,
    xmul,
    xprod,
)
from dsubh_bounds.utils.errors import DomainError


@pytest.mark.unit
@pytest.mark.parametrize(
    ("d", "r", "R", "want"),
    [(2, 1.0, 3.0, 10.0), (3, 1.0, 2.0, 45.0), (2, 1.0, 2.0, 15.0)],
)
def test_constant_A_known_values(d, r, R, want):
    assert constant_A(d, r, R) == pytest.approx(want)


def test_constant_A_large_gap_in_3d_uses_gap_power():
    # (R+r)/(R-r) = 5/3, (R-r)^(d-2) = 3
    assert constant_A(3, 1.0, 4.0) == pytest.approx(5.0 * (5.0 / 3.0) ** 2 * 3.0)


def test_constant_A_rejects_R_not_above_r():
    with pytest.raises(DomainError):
        constant_A(2, 1.0, 1.0)


def test_c_p_matches_unit_ball_volumes():
    assert c_p(1.0) == pytest.approx(2.0)
    assert c_p(2.0) == pytest.approx(math.pi)
    assert c_p(3.0) == pytest.approx(4.0 * math.pi / 3.0)


def test_kernel_is_log_in_plane_and_negative_power_above():
    assert kernel_K(2, math.e) == pytest.approx(1.0)
    assert kernel_K(3, 2.0) == pytest.approx(-0.5)
    assert kernel_K(4, 2.0) == pytest.approx(-0.25)


def test_kernel_needs_positive_t():
    with pytest.raises(DomainError):
        kernel_K(2, 0.0)


def test_hat_d():
    assert hat_d(2) == 1
    assert hat_d(3) == 2
    assert hat_d(5) == 4


def test_require_dimension_rejects_bools_and_low_values():
    with pytest.raises(DomainError):
        require_dimension(1)
    with pytest.raises(DomainError):
        require_dimension(True)
    with pytest.raises(DomainError):
        require_dimension(4, quadrature=True)
    assert require_dimension(4) == 4


def test_extended_product_treats_zero_times_inf_as_zero():
    assert xmul(0.0, math.inf) == 0.0
    assert xmul(math.inf, 0.0) == 0.0
    assert xprod([2.0, math.inf, 0.0]) == 0.0
    assert xprod([2.0, 3.0]) == 6.0
    assert xprod([2.0, math.inf]) == math.inf
