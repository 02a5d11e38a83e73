from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from dsubh_bounds.core.constants import require_dimension
from dsubh_bounds.utils.errors import DomainError


def _charge_array(points, dim: int) -> np.ndarray:
    arr = np.asarray(points, dtype=float).reshape(-1, dim)
    if not np.all(np.isfinite(arr)):
        raise DomainError("charge locations must be finite")
    return arr


def _root_point(z) -> tuple[float, float]:
    if isinstance(z, tuple | list):
        return float(z[0]), float(z[1])
    z = complex(z)
    return z.real, z.imag


@dataclass(frozen=True)
class DeltaSubharmonic:
    """
    What it does:
    - U(x) = c + Σ q_i·K(|x - a_i|) - Σ s_j·K(|x - b_j|) for finite charge systems.

    Why it matters:
    - In the plane with integer masses this is log|f| for a rational f (zeros positive,
      poles negative), the classical test case for every inequality here.

    Behavior:
    - U = -inf at a point carrying net positive charge, +inf at net negative charge.
    - Equal positive and negative charge at one point cancel.
    """

    dim: int
    positive: tuple[tuple[float, ...], ...] = ()
    positive_masses: tuple[float, ...] = ()
    negative: tuple[tuple[float, ...], ...] = ()
    negative_masses: tuple[float, ...] = ()
    constant: float = 0.0

    def __post_init__(self) -> None:
        require_dimension(self.dim)
        if len(self.positive) != len(self.positive_masses):
            raise DomainError("one mass per positive charge is required")
        if len(self.negative) != len(self.negative_masses):
            raise DomainError("one mass per negative charge is required")
        masses = (*self.positive_masses, *self.negative_masses)
        if any(not (m > 0 and math.isfinite(m)) for m in masses):
            raise DomainError("charge masses must be finite and > 0")
        if not math.isfinite(self.constant):
            raise DomainError("additive constant must be finite")
        _charge_array(self.positive, self.dim)
        _charge_array(self.negative, self.dim)

    @classmethod
    def from_rational(cls, zeros=(), poles=(), leading: complex = 1.0) -> DeltaSubharmonic:
        """log|f| for f = leading·Π(z - a)/Π(z - b); repeated roots add up their multiplicity."""
        if leading == 0:
            raise DomainError("leading coefficient must be nonzero")

        def collect(roots) -> tuple[tuple[tuple[float, float], ...], tuple[float, ...]]:
            counts = Counter(_root_point(z) for z in roots)
            keys = sorted(counts)
            return tuple(keys), tuple(float(counts[k]) for k in keys)

        pos, pos_m = collect(zeros)
        neg, neg_m = collect(poles)
        return cls(
            dim=2,
            positive=pos,
            positive_masses=pos_m,
            negative=neg,
            negative_masses=neg_m,
            constant=math.log(abs(leading)),
        )

    @cached_property
    def charges(self) -> tuple[np.ndarray, np.ndarray]:
        """(locations, signed masses) with coincident charges merged."""
        merged: dict[tuple[float, ...], float] = {}
        for p, m in zip(self.positive, self.positive_masses, strict=True):
            key = tuple(float(v) for v in p)
            merged[key] = merged.get(key, 0.0) + m
        for p, m in zip(self.negative, self.negative_masses, strict=True):
            key = tuple(float(v) for v in p)
            merged[key] = merged.get(key, 0.0) - m
        keys = [k for k, m in merged.items() if m != 0.0]
        locs = np.asarray(keys, dtype=float).reshape(-1, self.dim)
        return locs, np.asarray([merged[k] for k in keys], dtype=float)

    @property
    def negative_charge(self) -> tuple[np.ndarray, np.ndarray]:
        locs, signed = self.charges
        keep = signed < 0
        return locs[keep], -signed[keep]


def _kernel(d: int, dist: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        if d == 2:
            return np.log(dist)
        return -(dist ** (2.0 - d))


def evaluate_many(U: DeltaSubharmonic, xs) -> np.ndarray:
    """U at every row of xs; ±inf at charges."""
    xs = np.asarray(xs, dtype=float).reshape(-1, U.dim)
    locs, signed = U.charges
    out = np.full(len(xs), U.constant)
    if not len(signed):
        return out

    dist = np.linalg.norm(xs[:, None, :] - locs[None, :, :], axis=2)
    hit = dist == 0.0
    safe = np.where(hit, 1.0, dist)
    out = out + (_kernel(U.dim, safe) * signed[None, :]).sum(axis=1)
    if np.any(hit):
        sign = (hit * signed[None, :]).sum(axis=1)
        out = np.where(sign > 0, -np.inf, np.where(sign < 0, np.inf, out))
    return out


def evaluate(U: DeltaSubharmonic, x) -> float:
    return float(evaluate_many(U, np.asarray(x, dtype=float)[None, :])[0])


def positive_part(values: np.ndarray) -> np.ndarray:
    """U⁺ = max(U, 0); -inf maps to 0."""
    return np.maximum(values, 0.0)
