import math

import pytest

from dsubh_bounds.core.enums import ModulusMode
from dsubh_bounds.measures.models import Atomic, CantorSelfSimilar, GridLebesgue, PolylineLength
from dsubh_bounds.measures.modulus import modulus_of_continuity, modulus_profile
from dsubh_bounds.utils.errors import DomainError


def test_two_atoms_below_and_at_the_support_radius(two_atoms):
    below = modulus_of_continuity(two_atoms, 0.9)
    assert below.mode is ModulusMode.EXACT
    assert below.upper == 1.0
    assert modulus_of_continuity(two_atoms, 1.0).upper == 2.0


def test_close_atoms_share_a_ball():
    mu = Atomic(points=((0.0, 0.0), (1.0, 0.0), (5.0, 0.0)), masses=(1.0, 1.0, 1.0))
    assert modulus_of_continuity(mu, 0.5).upper == 2.0
    assert modulus_of_continuity(mu, 0.49).upper == 1.0


def test_straight_segment_is_exact(unit_segment):
    b = modulus_of_continuity(unit_segment, 0.25)
    assert b.mode is ModulusMode.EXACT
    assert b.lower == b.upper == pytest.approx(0.5)
    assert modulus_of_continuity(unit_segment, 0.6).upper == pytest.approx(1.0)


def test_cantor_interval_is_exact():
    b = modulus_of_continuity(CantorSelfSimilar(level=10), 1.0 / 6.0)
    assert b.mode is ModulusMode.EXACT
    assert b.upper == pytest.approx(0.5)


def test_unit_square_grid_matches_disk_area():
    cells = tuple((i, j) for i in range(20) for j in range(20))
    mu = GridLebesgue(cell=0.05, cells=cells)
    b = modulus_of_continuity(mu, 0.1)
    assert b.mode is ModulusMode.CERTIFIED
    assert b.lower == pytest.approx(math.pi * 0.01, rel=0.02)
    assert b.upper == pytest.approx(math.pi * 0.01, rel=0.02)


def test_bent_curve_is_bracketed_by_bilipschitz_bound():
    mu = PolylineLength(vertices=((0.0, 0.0), (1.0, 0.0), (1.0, 1.0)))
    b = modulus_of_continuity(mu, 0.1)
    assert b.mode is ModulusMode.CERTIFIED
    assert b.lower >= 0.2 - 1e-12
    assert b.lower <= b.upper
    assert b.upper <= 0.2 * math.sqrt(2.0) * (1.0 + 1e-9)


def test_beyond_support_radius_is_total_mass(unit_segment):
    b = modulus_of_continuity(unit_segment, 5.0)
    assert b.lower == b.upper == pytest.approx(1.0)


def test_negative_radius_is_rejected(unit_segment):
    with pytest.raises(DomainError):
        modulus_of_continuity(unit_segment, -0.1)


def test_profile_is_monotone(two_atoms):
    bounds = modulus_profile(two_atoms, [0.1, 0.5, 0.9, 1.0])
    uppers = [b.upper for b in bounds]
    assert uppers == [1.0, 1.0, 1.0, 2.0]
    assert all(b.lower <= b.upper for b in bounds)


def test_profile_needs_increasing_radii(two_atoms):
    with pytest.raises(DomainError):
        modulus_profile(two_atoms, [0.5, 0.5])
