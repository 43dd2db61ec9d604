import warnings

import numpy as np
import pytest

from pkgroles.graph import DependencyGraph
from pkgroles.sampling import (SampleExhaustedWarning, SampleSpec, SamplingError,
                               random_walk_nodes, random_walk_sample, sample_statistics, subseed)
from pkgroles.synth import preferential_dag


def test_full_target_returns_whole_graph(fig1):
    nodes, sub = random_walk_sample(fig1, SampleSpec(6, seed=3))
    assert nodes == frozenset(range(6))
    assert sub == fig1


def test_same_seed_same_sample(fig1):
    spec = SampleSpec(3, seed=42)
    first = random_walk_sample(fig1, spec)
    second = random_walk_sample(fig1, spec)
    assert first[0] == second[0] and len(first[0]) == 3
    assert first[1] == second[1]


def test_restarts_reach_isolated_nodes():
    g = DependencyGraph(2).freeze()
    nodes, _ = random_walk_sample(g, SampleSpec(2, restart_probability=1.0, seed=0))
    assert nodes == {0, 1}


def test_target_larger_than_graph(fig1):
    with pytest.raises(SamplingError):
        random_walk_sample(fig1, SampleSpec(7))


def test_spec_validation():
    with pytest.raises(SamplingError):
        SampleSpec(0)
    with pytest.raises(SamplingError):
        SampleSpec(5, max_steps=4)
    with pytest.raises(SamplingError):
        SampleSpec(5, restart_probability=1.5)
    assert SampleSpec(5).max_steps == 500


def test_exhausted_walk_warns():
    g = DependencyGraph(50).freeze()
    with pytest.warns(SampleExhaustedWarning):
        nodes = random_walk_nodes(g, SampleSpec(50, seed=1, max_steps=50))
    assert len(nodes) < 50


def test_walk_follows_edges_without_restarts():
    g = preferential_dag(300, 3, seed=2)
    order = random_walk_nodes(g, SampleSpec(40, restart_probability=0.0, seed=5))
    # without restarts every newly visited node touches an earlier one
    seen = {order[0]}
    for v in order[1:]:
        assert seen & set(g.neighbors(v))
        seen.add(v)


def test_sample_sizes_and_statistics(fig2, fig3):
    g = preferential_dag(500, 4, seed=0)
    for i in range(5):
        nodes, sub = random_walk_sample(g, SampleSpec(100, seed=subseed(7, i)))
        assert len(nodes) == 100 == sub.node_count
    assert sample_statistics(fig2) == {"nodes": 6, "edges": 5}
    assert sample_statistics(fig3) == {"nodes": 6, "edges": 6}


def test_subseed_matches_spawn():
    a = np.random.SeedSequence(11).spawn(4)[3]
    b = subseed(11, 3)
    assert a.generate_state(4).tolist() == b.generate_state(4).tolist()
