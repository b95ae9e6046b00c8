"""Seeded Monte-Carlo estimation of connectivity probability over density grids.

Each trial derives its own generator by mixing the master seed with the grid
position and trial index through a SplitMix64-style bijective finalizer, so
results are identical for any execution order, chunking, or process count.
One realization (headways + ranges) feeds every requested method, which makes
per-realization verdicts directly comparable.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import numpy as np

from .connectivity import (
    AnalyticModel,
    analytic_pc,
    analytic_pc_chain_mixed,
    consecutive_chain,
    is_connected_exponent,
    is_connected_laplacian,
    oracle_components,
    oracle_reachable,
)
from .graphs import DIRECTION_UPWARD, build_adjacency, laplacian, project, symmetrize
from .ranges import FixedRange, RangeAssignment, RangePolicy, assign_ranges, mean_range, policy_label
from .traffic import TrafficScenario, sample_headways, spacing_matrix

TRIAL_METHODS = ("laplacian", "exponent", "oracle", "chain")
ANALYTIC_METHODS = ("analytic", "analytic-chain")
VALID_METHODS = TRIAL_METHODS + ANALYTIC_METHODS

DIRECTION_UNDIRECTED = "undirected"
DIRECTIONS = (DIRECTION_UNDIRECTED, DIRECTION_UPWARD)

# Default trial volumes: traversal verdicts are near-linear per trial,
# spectral/exponent verdicts cost a cubic solve each.
DEFAULT_TRAVERSAL_TRIALS = 10_000
DEFAULT_SPECTRAL_TRIALS = 2_000

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(x: int) -> int:
    """SplitMix64 finalizer; bijective on 64-bit integers."""
    x &= _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def trial_seed(master_seed: int, grid_index: int, trial_index: int) -> int:
    """Distinct, order-free 64-bit seed for one (grid point, trial) cell."""
    counter = ((grid_index & 0xFFFFFFFF) << 32) | (trial_index & 0xFFFFFFFF)
    return _mix64((master_seed + _GOLDEN * (counter + 1)) & _MASK64)


def trial_rng(master_seed: int, grid_index: int, trial_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(trial_seed(master_seed, grid_index, trial_index)))


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything that identifies an experiment; results are a pure function
    of this record."""

    densities_per_km: tuple
    segment_length_m: float
    policy: RangePolicy
    methods: tuple
    direction: str
    trials: int
    master_seed: int

    def __post_init__(self):
        object.__setattr__(self, "densities_per_km", tuple(float(d) for d in self.densities_per_km))
        object.__setattr__(self, "methods", tuple(self.methods))
        if not self.densities_per_km:
            raise ValueError("density grid must not be empty")
        if any(d <= 0 for d in self.densities_per_km):
            raise ValueError("densities must be > 0")
        if self.segment_length_m <= 0:
            raise ValueError(f"segment_length_m must be > 0, got {self.segment_length_m}")
        if not self.methods:
            raise ValueError("method set must not be empty")
        unknown = [m for m in self.methods if m not in VALID_METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; valid: {sorted(VALID_METHODS)}")
        if len(set(self.methods)) != len(self.methods):
            raise ValueError("duplicate methods in spec")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}, got {self.direction!r}")
        if self.direction == DIRECTION_UNDIRECTED and not isinstance(self.policy, FixedRange):
            raise ValueError("undirected analysis requires a fixed range policy; "
                             "mixed ranges make the network directed")
        if "analytic-chain" in self.methods and isinstance(self.policy, FixedRange):
            raise ValueError("analytic-chain applies to mixed-range policies only")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")

    @property
    def trial_methods(self) -> tuple:
        return tuple(m for m in self.methods if m in TRIAL_METHODS)

    @property
    def analytic_methods(self) -> tuple:
        return tuple(m for m in self.methods if m in ANALYTIC_METHODS)


@dataclass(frozen=True)
class TrialRecord:
    """Per-method verdicts for one shared realization."""

    density_per_km: float
    trial_index: int
    verdicts: dict
    digest: str


@dataclass(frozen=True)
class ConnectivityEstimate:
    """One (density, method) cell of a results table."""

    density_per_km: float
    method: str
    policy: str
    p_hat: float
    stderr: float
    connected_count: int
    trials: int
    master_seed: int


@dataclass(frozen=True)
class MethodDisagreement:
    """Count of shared realizations on which two methods returned different
    verdicts."""

    density_per_km: float
    method_a: str
    method_b: str
    count: int
    trials: int


def _realization(spec: ExperimentSpec, density_index: int, trial_index: int):
    density_m = spec.densities_per_km[density_index] / 1000.0
    scenario = TrafficScenario(density_m, spec.segment_length_m)
    rng = trial_rng(spec.master_seed, density_index, trial_index)
    headways = sample_headways(scenario, rng)
    assignment = assign_ranges(spec.policy, scenario.vehicle_count, rng)
    return scenario, headways, assignment


def _verdicts(spec: ExperimentSpec, headways, assignment: RangeAssignment,
              methods: tuple) -> dict:
    adjacency = build_adjacency(spacing_matrix(headways), assignment)
    n = adjacency.size
    upward = None
    if spec.direction == DIRECTION_UPWARD or "chain" in methods:
        upward = project(adjacency, DIRECTION_UPWARD)
    verdicts = {}
    for method in methods:
        if method == "laplacian":
            graph = adjacency if spec.direction == DIRECTION_UNDIRECTED else symmetrize(upward)
            verdicts[method] = is_connected_laplacian(laplacian(graph))
        elif method == "exponent":
            graph = adjacency if spec.direction == DIRECTION_UNDIRECTED else upward
            verdicts[method] = is_connected_exponent(graph)
        elif method == "oracle":
            if spec.direction == DIRECTION_UNDIRECTED:
                verdicts[method] = oracle_components(adjacency) == 1
            else:
                verdicts[method] = oracle_reachable(upward, 0, n - 1)
        elif method == "chain":
            verdicts[method] = consecutive_chain(upward)
        else:
            raise ValueError(f"not a per-trial method: {method}")
    return verdicts


def run_trial(spec: ExperimentSpec, density_index: int, trial_index: int) -> TrialRecord:
    """Evaluate every requested trial method on one shared realization."""
    if not 0 <= density_index < len(spec.densities_per_km):
        raise IndexError(f"density index {density_index} outside the grid")
    if not 0 <= trial_index < spec.trials:
        raise IndexError(f"trial index {trial_index} outside 0..{spec.trials - 1}")
    _, headways, assignment = _realization(spec, density_index, trial_index)
    digest = hashlib.blake2b(
        headways.gaps.tobytes() + assignment.ranges.tobytes(), digest_size=16
    ).hexdigest()
    verdicts = _verdicts(spec, headways, assignment, spec.trial_methods)
    return TrialRecord(spec.densities_per_km[density_index], trial_index, verdicts, digest)


def _chunk_counts(args):
    """Verdict-count reduction over a block of trials (process-pool unit)."""
    spec, density_index, start, stop = args
    methods = spec.trial_methods
    pairs = list(combinations(methods, 2))
    counts = dict.fromkeys(methods, 0)
    disagreements = dict.fromkeys(pairs, 0)
    for trial_index in range(start, stop):
        _, headways, assignment = _realization(spec, density_index, trial_index)
        verdicts = _verdicts(spec, headways, assignment, methods)
        for m in methods:
            counts[m] += verdicts[m]
        for a, b in pairs:
            disagreements[(a, b)] += verdicts[a] != verdicts[b]
    return counts, disagreements


def _count_trials(spec: ExperimentSpec, density_index: int,
                  executor: Optional[ProcessPoolExecutor], chunk_size: int = 512):
    if not spec.trial_methods:
        return {}, {}
    if executor is None:
        return _chunk_counts((spec, density_index, 0, spec.trials))
    chunks = [
        (spec, density_index, start, min(start + chunk_size, spec.trials))
        for start in range(0, spec.trials, chunk_size)
    ]
    counts = dict.fromkeys(spec.trial_methods, 0)
    disagreements = dict.fromkeys(combinations(spec.trial_methods, 2), 0)
    for chunk_counts, chunk_disagreements in executor.map(_chunk_counts, chunks):
        for m, c in chunk_counts.items():
            counts[m] += c
        for pair, c in chunk_disagreements.items():
            disagreements[pair] += c
    return counts, disagreements


def _analytic_estimate(spec: ExperimentSpec, density_per_km: float, method: str) -> ConnectivityEstimate:
    density_m = density_per_km / 1000.0
    n = TrafficScenario(density_m, spec.segment_length_m).vehicle_count
    if method == "analytic":
        p = analytic_pc(AnalyticModel(density_m, mean_range(spec.policy), n))
    else:
        p = analytic_pc_chain_mixed(density_m, n, spec.policy)
    return ConnectivityEstimate(
        density_per_km=density_per_km, method=method, policy=policy_label(spec.policy),
        p_hat=p, stderr=0.0, connected_count=0, trials=0, master_seed=spec.master_seed,
    )


def _estimate_rows(spec: ExperimentSpec, density_index: int,
                   executor: Optional[ProcessPoolExecutor]):
    density_per_km = spec.densities_per_km[density_index]
    counts, _ = _count_trials(spec, density_index, executor)
    label = policy_label(spec.policy)
    rows = []
    for method in spec.methods:
        if method in ANALYTIC_METHODS:
            rows.append(_analytic_estimate(spec, density_per_km, method))
            continue
        connected = counts[method]
        p_hat = connected / spec.trials
        stderr = math.sqrt(p_hat * (1.0 - p_hat) / spec.trials)
        rows.append(ConnectivityEstimate(
            density_per_km=density_per_km, method=method, policy=label,
            p_hat=p_hat, stderr=stderr, connected_count=connected,
            trials=spec.trials, master_seed=spec.master_seed,
        ))
    return rows


def estimate(spec: ExperimentSpec, density_index: int, workers: int = 1):
    """Connectivity estimates (one per method) at a single grid point."""
    if not 0 <= density_index < len(spec.densities_per_km):
        raise IndexError(f"density index {density_index} outside the grid")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return _estimate_rows(spec, density_index, executor)
    return _estimate_rows(spec, density_index, None)


def sweep(spec: ExperimentSpec, workers: int = 1):
    """Estimates over the whole density grid; rows are independent and the
    table does not depend on scheduling or worker count."""
    rows = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for density_index in range(len(spec.densities_per_km)):
                rows.extend(_estimate_rows(spec, density_index, executor))
    else:
        for density_index in range(len(spec.densities_per_km)):
            rows.extend(_estimate_rows(spec, density_index, None))
    return rows


def compare_methods(spec: ExperimentSpec, workers: int = 1):
    """Per-density, per-pair counts of realizations on which the requested
    trial methods disagree.  Needs at least two trial-based methods."""
    if len(spec.trial_methods) < 2:
        raise ValueError("method comparison needs at least two trial-based methods")
    rows = []

    def one_density(density_index, executor):
        density_per_km = spec.densities_per_km[density_index]
        _, disagreements = _count_trials(spec, density_index, executor)
        for (a, b), count in sorted(disagreements.items()):
            rows.append(MethodDisagreement(density_per_km, a, b, count, spec.trials))

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for density_index in range(len(spec.densities_per_km)):
                one_density(density_index, executor)
    else:
        for density_index in range(len(spec.densities_per_km)):
            one_density(density_index, None)
    return rows
