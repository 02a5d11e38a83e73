from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from dsubh_bounds.core.constants import hat_d
from dsubh_bounds.dsubh.function import DeltaSubharmonic
from dsubh_bounds.dsubh.quadrature import sphere_mean
from dsubh_bounds.utils.errors import DomainError


@dataclass(frozen=True)
class CharacteristicValue:
    r: float
    R: float
    value: float
    nodes: int
    mean_term: float = 0.0
    counting_term: float = 0.0
    stochastic: bool = False


class CharacteristicFunctional(Protocol):
    """
    What it does:
    - Defines the size functional T_U(r, R) the verification harness multiplies into
      every right-hand side.

    Why it matters:
    - Records only need a value that is at least the characteristic; swapping the
      normalisation (or a fake in tests) must not touch the theorem code.
    """

    def __call__(self, U: DeltaSubharmonic, r: float, R: float) -> CharacteristicValue: ...


def counting_between(U: DeltaSubharmonic, r: float, R: float) -> float:
    """ĥd·∫_r^R ν⁻(B̄(t)) / t^(d-1) dt of the negative charge, closed form per charge."""
    locs, masses = U.negative_charge
    if not len(masses):
        return 0.0
    d = U.dim
    rho = np.linalg.norm(locs, axis=1)
    inside = rho <= R
    start = np.maximum(rho[inside], r)
    m = masses[inside]
    if np.any(start == 0.0):
        return math.inf
    if d == 2:
        return float(np.sum(m * np.log(R / start)))
    return float(hat_d(d) * np.sum(m * (start ** (2 - d) - R ** (2 - d))) / (d - 2))


def nevanlinna_T(U: DeltaSubharmonic, r: float, R: float) -> CharacteristicValue:
    """
    T_U(r, R) = mean of U⁺ over |x| = R plus the counting function of the negative
    charge between r and R; for log|f| with rational f this is m(R, f) + N(r, R, f).
    """
    if not (0 <= r < R):
        raise DomainError(f"characteristic needs 0 <= r < R, got r={r!r}, R={R!r}")
    mean = sphere_mean(U, R)
    counting = counting_between(U, r, R)
    return CharacteristicValue(
        r=r,
        R=R,
        value=mean.value + counting,
        nodes=mean.nodes,
        mean_term=mean.value,
        counting_term=counting,
        stochastic=mean.stochastic,
    )


class NevanlinnaCharacteristic:
    """Default CharacteristicFunctional."""

    def __call__(self, U: DeltaSubharmonic, r: float, R: float) -> CharacteristicValue:
        return nevanlinna_T(U, r, R)
