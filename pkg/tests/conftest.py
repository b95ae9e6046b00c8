import numpy as np
import pytest

from vanetconn import graphs, ranges, traffic


@pytest.fixture
def golden_adjacency():
    """Three-vehicle two-range witness: gaps [200, 400] m, ranges
    [300, 250, 500] m, whose full adjacency is [[0,1,0],[1,0,0],[0,1,0]]."""
    spacing = traffic.spacing_matrix(traffic.HeadwayVector(np.array([200.0, 400.0])))
    assignment = ranges.RangeAssignment(np.array([300.0, 250.0, 500.0]))
    return graphs.build_adjacency(spacing, assignment)


def random_snapshot(rng, density_m, segment_m, policy):
    """One traffic realization: (scenario, headways, assignment)."""
    scenario = traffic.TrafficScenario(density_m, segment_m)
    headways = traffic.sample_headways(scenario, rng)
    assignment = ranges.assign_ranges(policy, scenario.vehicle_count, rng)
    return scenario, headways, assignment
