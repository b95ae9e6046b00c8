"""Connectivity verdicts for one network snapshot.

Four independent routes are provided on purpose so they can check each other:

* spectral: count of near-zero Laplacian eigenvalues / algebraic connectivity,
* adjacency power: existence of an exact-length walk between the end vehicles,
* traversal oracles: union-find component count and directed breadth-first
  reachability,
* closed-form models for the fixed-range and per-gap chain events.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import DIRECTION_UPWARD, Adjacency, Laplacian
from .ranges import FixedRange, RangePolicy, TwoTierRange, UniformRange


def default_zero_tolerance(n: int) -> float:
    # Laplacian spectra are bounded by twice the max degree (< 2n), so a
    # tolerance proportional to n tracks the attainable rounding error.
    return 1e-8 * n


@dataclass(frozen=True, eq=False)
class SpectralResult:
    """Full real spectrum of a Laplacian, ascending, with the tolerance used
    to classify eigenvalues as zero."""

    eigenvalues: np.ndarray
    lambda2: float
    zero_tolerance: float


def eigenvalues_symmetric(lap: Laplacian, zero_tolerance: float | None = None) -> SpectralResult:
    """Full spectrum of a symmetric Laplacian, ascending.

    Delegates to LAPACK's symmetric solver (tridiagonalization plus implicit
    shifts), which is stable to ~machine precision for these matrices.
    """
    m = lap.entries
    if m.shape[0] < 2:
        raise ValueError("need at least a 2x2 matrix")
    if not np.array_equal(m, m.T):
        raise ValueError("matrix is not symmetric")
    tol = default_zero_tolerance(m.shape[0]) if zero_tolerance is None else zero_tolerance
    eig = np.linalg.eigvalsh(m)
    # a Laplacian is positive semidefinite with a zero eigenvalue (constant
    # vector), so the lowest eigenvalue must sit inside [-tol, tol]
    if eig[0] < -tol or eig[0] > tol:
        raise ValueError(f"not a Laplacian spectrum: lowest eigenvalue {eig[0]:.3e}")
    return SpectralResult(eig, float(eig[1]), tol)


def component_count(spectral: SpectralResult) -> int:
    """Number of connected components = number of (near-)zero eigenvalues."""
    return int(np.count_nonzero(spectral.eigenvalues < spectral.zero_tolerance))


def is_connected_laplacian(lap: Laplacian, zero_tolerance: float | None = None) -> bool:
    """Connected iff the algebraic connectivity (second-lowest eigenvalue)
    is strictly positive."""
    spectral = eigenvalues_symmetric(lap, zero_tolerance)
    return spectral.lambda2 > spectral.zero_tolerance


def _bool_matmul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # float64 product of 0/1 matrices counts walks exactly (counts <= n),
    # and thresholding keeps existence only, so overflow cannot occur.
    return ((x @ y) > 0.0).astype(np.float64)


def _bool_power(entries: np.ndarray, k: int) -> np.ndarray:
    """OR-AND semiring power by repeated squaring: (i, j) set iff a walk of
    exactly k edges runs from i to j."""
    base = entries.astype(np.float64)
    result = None
    while k:
        if k & 1:
            result = base if result is None else _bool_matmul(result, base)
        k >>= 1
        if k:
            base = _bool_matmul(base, base)
    return result > 0.0


def bool_power_reach(a: Adjacency, k: int) -> np.ndarray:
    """Boolean matrix of exact-length-k walk existence."""
    if k < 1:
        raise ValueError(f"walk length must be >= 1, got {k}")
    return _bool_power(a.entries, k)


def is_connected_exponent(a: Adjacency, relaxed: bool = False) -> bool:
    """End-to-end verdict from the (n-1)th adjacency power.

    With relaxed=True the power is taken of (A or I), which detects walks of
    length *up to* n-1 instead of exactly n-1.
    """
    n = a.size
    if n < 2:
        raise ValueError("need at least 2 vehicles")
    entries = a.entries
    if relaxed:
        entries = entries | np.eye(n, dtype=bool)
    return bool(_bool_power(entries, n - 1)[0, n - 1])


def oracle_components(a: Adjacency) -> int:
    """Exact component count by disjoint-set union over the set entries."""
    e = a.entries
    if not np.array_equal(e, e.T):
        raise ValueError("component oracle needs a symmetric adjacency")
    n = e.shape[0]
    parent = list(range(n))
    count = n

    def union(i, j):
        nonlocal count
        while parent[i] != i:  # find with path halving
            parent[i] = parent[parent[i]]
            i = parent[i]
        while parent[j] != j:
            parent[j] = parent[parent[j]]
            j = parent[j]
        if i != j:
            parent[i] = j
            count -= 1

    # superdiagonal first: a connected snapshot then finishes in one cheap
    # sweep; the general scan below makes the count exact either way
    for i in np.nonzero(np.diagonal(e, offset=1))[0].tolist():
        union(i, i + 1)
    if count > 1:
        rows, cols = np.nonzero(np.triu(e, 1))
        for i, j in zip(rows.tolist(), cols.tolist()):
            union(i, j)
            if count == 1:
                break
    return count


def oracle_reachable(a: Adjacency, src: int, dst: int) -> bool:
    """Directed breadth-first search along set entries (i, j) as edges i -> j."""
    n = a.size
    if not (0 <= src < n and 0 <= dst < n):
        raise IndexError(f"vehicle index out of range for n={n}: src={src}, dst={dst}")
    if src == dst:
        return True
    visited = np.zeros(n, dtype=bool)
    frontier = np.zeros(n, dtype=bool)
    visited[src] = frontier[src] = True
    while frontier.any():
        reached = a.entries[frontier].any(axis=0) & ~visited
        if reached[dst]:
            return True
        visited |= reached
        frontier = reached
    return False


def consecutive_chain(a: Adjacency) -> bool:
    """True iff every vehicle links directly to its immediate successor."""
    if a.direction != DIRECTION_UPWARD:
        raise ValueError(f"chain test expects an upward adjacency, got {a.direction!r}")
    return bool(np.all(np.diagonal(a.entries, offset=1)))


# --- closed-form models -----------------------------------------------------


def headway_cdf(density: float, x: float) -> float:
    """P(gap <= x) = 1 - exp(-density * x) for x >= 0, else 0."""
    if x < 0:
        return 0.0
    return -math.expm1(-density * x)


@dataclass(frozen=True)
class AnalyticModel:
    """Fixed-range closed-form setting: density (veh/m), range (m), count."""

    density: float
    comm_range: float
    vehicle_count: int

    def __post_init__(self):
        if self.density <= 0:
            raise ValueError(f"density must be > 0, got {self.density}")
        if self.comm_range <= 0:
            raise ValueError(f"comm_range must be > 0, got {self.comm_range}")
        if self.vehicle_count < 2:
            raise ValueError(f"vehicle_count must be >= 2, got {self.vehicle_count}")

    def cdf(self, x: float) -> float:
        return headway_cdf(self.density, x)


def analytic_pc(model: AnalyticModel) -> float:
    """Probability that all n-1 gaps fall below the fixed range:
    F(R)^(n-1), evaluated in log space to keep precision near 1."""
    tail = math.exp(-model.density * model.comm_range)
    if tail >= 1.0:
        return 0.0
    return math.exp((model.vehicle_count - 1) * math.log1p(-tail))


def expected_headway_cdf(density: float, policy: RangePolicy) -> float:
    """E over the range distribution of F(gap <= R): the per-gap success
    probability when the link's transmitter draws a random range."""
    if isinstance(policy, TwoTierRange):
        p = policy.fraction_high
        return (1.0 - p) * headway_cdf(density, policy.range_low_m) + p * headway_cdf(
            density, policy.range_high_m
        )
    if isinstance(policy, UniformRange):
        if isinstance(policy.support, str):
            low, high = policy.bounds
            # integral of 1 - e^(-rho r) over [low, high], divided by the width
            spread = high - low
            return 1.0 - (math.exp(-density * low) - math.exp(-density * high)) / (
                density * spread
            )
        return float(np.mean([headway_cdf(density, v) for v in policy.support]))
    raise TypeError(f"expected a mixed-range policy, got {policy!r}")


def analytic_pc_chain_mixed(density: float, n: int, policy: RangePolicy) -> float:
    """Closed form for the consecutive-chain event under independent
    per-vehicle random ranges: (E[F(R)])^(n-1)."""
    if isinstance(policy, FixedRange):
        raise TypeError("chain closed form is for mixed-range policies; "
                        "use analytic_pc for a fixed range")
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    per_gap = expected_headway_cdf(density, policy)
    if per_gap <= 0.0:
        return 0.0
    return math.exp((n - 1) * math.log(per_gap))


def min_range_for_target(density: float, n: int, target_pc: float) -> float:
    """Smallest fixed range whose closed-form connectivity meets target_pc:
    R = -ln(1 - target^(1/(n-1))) / density."""
    if not 0.0 < target_pc < 1.0:
        raise ValueError(f"target_pc must lie strictly inside (0, 1), got {target_pc}")
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if density <= 0:
        raise ValueError(f"density must be > 0, got {density}")
    log_f = math.log(target_pc) / (n - 1)
    # 1 - t^(1/(n-1)) = -expm1(log_f), kept in expm1/log form for precision
    return -math.log(-math.expm1(log_f)) / density
