"""Per-vehicle communication range assignment.

Three policies: a single fixed range, a two-tier random mix of a low and a
high range, and a uniform random range (continuous by default, or an
explicit list of equiprobable discrete levels).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

_SQRT3 = math.sqrt(3.0)
_MOMENT_RTOL = 1e-9


@dataclass(frozen=True)
class FixedRange:
    """Every vehicle transmits with the same range (meters)."""

    range_m: float

    def __post_init__(self):
        if self.range_m <= 0:
            raise ValueError(f"range_m must be > 0, got {self.range_m}")


@dataclass(frozen=True)
class TwoTierRange:
    """Each vehicle independently gets range_high_m with probability
    fraction_high, otherwise range_low_m.

    exact_count=True instead assigns exactly round(fraction_high * n) high
    ranges through a random permutation (a variance-reduction variant).
    """

    range_low_m: float
    range_high_m: float
    fraction_high: float
    exact_count: bool = False

    def __post_init__(self):
        if self.range_low_m <= 0:
            raise ValueError(f"range_low_m must be > 0, got {self.range_low_m}")
        if not self.range_low_m < self.range_high_m:
            raise ValueError(
                f"range_low_m must be < range_high_m, got "
                f"{self.range_low_m} and {self.range_high_m}"
            )
        if not 0.0 <= self.fraction_high <= 1.0:
            raise ValueError(f"fraction_high must be within [0, 1], got {self.fraction_high}")


@dataclass(frozen=True)
class UniformRange:
    """Uniform random range with the given mean and standard deviation.

    support="continuous" draws from [mean - sqrt(3)*std, mean + sqrt(3)*std],
    which realizes the stated mean and std exactly.  A sequence of values
    instead draws equiprobably from that list; the list's mean/std must match
    the declared ones to 1e-9 relative.
    """

    mean_m: float
    std_m: float
    support: Union[str, tuple] = "continuous"

    def __post_init__(self):
        if self.mean_m <= 0:
            raise ValueError(f"mean_m must be > 0, got {self.mean_m}")
        if self.std_m <= 0:
            raise ValueError(f"std_m must be > 0, got {self.std_m}")
        if isinstance(self.support, str):
            if self.support != "continuous":
                raise ValueError(f"support must be 'continuous' or a value list, got {self.support!r}")
            if self.mean_m - _SQRT3 * self.std_m <= 0:
                raise ValueError(
                    "continuous support extends to nonpositive ranges: "
                    f"mean - sqrt(3)*std = {self.mean_m - _SQRT3 * self.std_m:.6g} m"
                )
        else:
            values = tuple(float(v) for v in self.support)
            if len(values) < 2:
                raise ValueError("discrete support needs at least two values")
            if any(v <= 0 for v in values):
                raise ValueError("discrete support values must be > 0")
            arr = np.asarray(values)
            mean, std = float(arr.mean()), float(arr.std())
            if abs(mean - self.mean_m) > _MOMENT_RTOL * self.mean_m:
                raise ValueError(
                    f"support mean {mean:.12g} inconsistent with mean_m {self.mean_m:.12g}"
                )
            if abs(std - self.std_m) > _MOMENT_RTOL * self.std_m:
                raise ValueError(
                    f"support std {std:.12g} inconsistent with std_m {self.std_m:.12g}"
                )
            object.__setattr__(self, "support", values)

    @property
    def bounds(self) -> tuple:
        """Continuous support interval (low, high)."""
        half = _SQRT3 * self.std_m
        return (self.mean_m - half, self.mean_m + half)


RangePolicy = Union[FixedRange, TwoTierRange, UniformRange]


@dataclass(frozen=True, eq=False)
class RangeAssignment:
    """Per-vehicle communication ranges in meters."""

    ranges: np.ndarray

    def __post_init__(self):
        ranges = np.asarray(self.ranges, dtype=np.float64)
        if ranges.ndim != 1 or ranges.size < 1:
            raise ValueError("ranges must be a non-empty 1-D array")
        if not np.all(ranges > 0):
            raise ValueError("all ranges must be > 0")
        object.__setattr__(self, "ranges", ranges)

    @property
    def vehicle_count(self) -> int:
        return self.ranges.size


def assign_ranges(policy: RangePolicy, n: int, rng: np.random.Generator) -> RangeAssignment:
    """Draw one communication range per vehicle under the given policy."""
    if n < 2:
        raise ValueError(f"need at least 2 vehicles, got {n}")
    if isinstance(policy, FixedRange):
        return RangeAssignment(np.full(n, policy.range_m))
    if isinstance(policy, TwoTierRange):
        if policy.exact_count:
            n_high = int(math.floor(policy.fraction_high * n + 0.5))
            ranges = np.full(n, policy.range_low_m)
            ranges[rng.permutation(n)[:n_high]] = policy.range_high_m
            return RangeAssignment(ranges)
        # u < fraction couples assignments monotonically across fractions
        # when the same generator state is replayed
        u = rng.random(n)
        return RangeAssignment(
            np.where(u < policy.fraction_high, policy.range_high_m, policy.range_low_m)
        )
    if isinstance(policy, UniformRange):
        if isinstance(policy.support, str):
            low, high = policy.bounds
            return RangeAssignment(low + (high - low) * rng.random(n))
        values = np.asarray(policy.support)
        return RangeAssignment(values[rng.integers(0, len(values), n)])
    raise TypeError(f"unknown range policy {policy!r}")


def power_proxy(assignment: RangeAssignment, path_loss_exponent: float) -> float:
    """Mean of range^alpha over vehicles: per-vehicle transmit power up to a
    propagation constant."""
    if path_loss_exponent <= 0:
        raise ValueError(f"path_loss_exponent must be > 0, got {path_loss_exponent}")
    return float(np.mean(assignment.ranges ** path_loss_exponent))


def mean_range(policy: RangePolicy) -> float:
    """Expected communication range under the policy."""
    if isinstance(policy, FixedRange):
        return policy.range_m
    if isinstance(policy, TwoTierRange):
        p = policy.fraction_high
        return (1.0 - p) * policy.range_low_m + p * policy.range_high_m
    if isinstance(policy, UniformRange):
        return policy.mean_m
    raise TypeError(f"unknown range policy {policy!r}")


def policy_label(policy: RangePolicy) -> str:
    """Compact comma-free descriptor used in CSV output."""
    if isinstance(policy, FixedRange):
        return f"fixed:R={policy.range_m:g}"
    if isinstance(policy, TwoTierRange):
        tag = ":exact" if policy.exact_count else ""
        return (
            f"two_tier:R1={policy.range_low_m:g}:R2={policy.range_high_m:g}"
            f":p_high={policy.fraction_high:g}{tag}"
        )
    if isinstance(policy, UniformRange):
        base = f"uniform:mean={policy.mean_m:g}:std={policy.std_m:g}"
        if isinstance(policy.support, str):
            return base
        return f"{base}:levels={len(policy.support)}"
    raise TypeError(f"unknown range policy {policy!r}")
