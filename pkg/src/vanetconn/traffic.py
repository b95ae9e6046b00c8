"""Random free-flow traffic realizations on a one-dimensional road segment.

Vehicles are placed by drawing independent exponential headways (valid for
free-flowing traffic, roughly below 25 veh/km); pairwise spacings follow by
summing consecutive gaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Headways are snapped *up* to this grid (~15 nm).  Grid-aligned gaps keep
# every cumulative position and every pairwise difference exactly
# representable in float64, so the spacing identity
# S[i,k] == S[i,j] + S[j,k] holds bit-exactly rather than to within an ulp.
# The perturbation is ~1e-10 relative on realistic gaps and also guarantees
# strictly positive gaps even if the uniform draw hits its endpoint.
SPACING_QUANTUM_M = 2.0 ** -26

# Upper edge of the free-flow regime the headway model assumes.
FREE_FLOW_MAX_DENSITY_PER_KM = 25.0


def vehicle_count(density: float, segment_length: float) -> int:
    """Vehicle count for a segment: round(density * length), floored at 2.

    density is in vehicles per meter, segment_length in meters.  Rounding is
    half-up so results do not depend on the platform's default banker
    rounding.
    """
    if density <= 0:
        raise ValueError(f"density must be > 0, got {density}")
    if segment_length <= 0:
        raise ValueError(f"segment_length must be > 0, got {segment_length}")
    return max(2, int(math.floor(density * segment_length + 0.5)))


@dataclass(frozen=True)
class TrafficScenario:
    """Physical experiment setting: density (veh/m) and road length (m)."""

    density: float
    segment_length: float
    vehicle_count: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "vehicle_count", vehicle_count(self.density, self.segment_length)
        )


@dataclass(frozen=True, eq=False)
class HeadwayVector:
    """Consecutive inter-vehicle gaps in meters (vehicle_count - 1 of them)."""

    gaps: np.ndarray

    def __post_init__(self):
        gaps = np.asarray(self.gaps, dtype=np.float64)
        if gaps.ndim != 1 or gaps.size == 0:
            raise ValueError("gaps must be a non-empty 1-D array")
        if not np.all(gaps > 0):
            raise ValueError("all gaps must be strictly positive")
        object.__setattr__(self, "gaps", gaps)

    @property
    def vehicle_count(self) -> int:
        return self.gaps.size + 1


def sample_headways(scenario: TrafficScenario, rng: np.random.Generator) -> HeadwayVector:
    """Draw the scenario's exponential headways with mean 1/density.

    Uses the inverse-CDF transform -ln(u)/density with u uniform on (0, 1],
    so the sample is a pure function of the generator state.  Gaps are then
    snapped up to SPACING_QUANTUM_M (see module docstring).
    """
    n = scenario.vehicle_count - 1
    u = 1.0 - rng.random(n)  # uniform on (0, 1]
    raw = -np.log(u) / scenario.density
    gaps = np.maximum(SPACING_QUANTUM_M, np.ceil(raw / SPACING_QUANTUM_M) * SPACING_QUANTUM_M)
    return HeadwayVector(gaps)


@dataclass(frozen=True, eq=False)
class SpacingMatrix:
    """Pairwise inter-vehicle distances in meters; symmetric, zero diagonal."""

    entries: np.ndarray

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def validate(self) -> None:
        s = self.entries
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise ValueError("spacing matrix must be square")
        if np.any(np.diagonal(s) != 0.0):
            raise ValueError("spacing diagonal must be zero")
        if not np.array_equal(s, s.T):
            raise ValueError("spacing matrix must be symmetric")
        if np.any(s < 0):
            raise ValueError("spacings must be nonnegative")


def spacing_matrix(headways: HeadwayVector) -> SpacingMatrix:
    """Spacings S[i, j] = sum of the gaps separating vehicles i and j.

    Built from cumulative positions.  With grid-aligned gaps (as produced by
    sample_headways) all positions, differences, and sums of entries are
    exact in float64.
    """
    positions = np.concatenate(([0.0], np.cumsum(headways.gaps)))
    entries = np.abs(positions[None, :] - positions[:, None])
    return SpacingMatrix(entries)
