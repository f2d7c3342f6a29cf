import numpy as np
import pytest
from hypothesis import given, settings

from comdet.graph import Graph
from comdet.louvain import (
    AggregateGraph,
    LouvainConfig,
    aggregate,
    local_move_pass,
    louvain,
    louvain_levels,
    weighted_modularity,
)
from comdet.modularity import Partition, modularity

from conftest import graph_and_partition, graphs
from oracles import best_partition_brute

TWO_TRIANGLES = Graph.from_edges([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


def test_two_triangles():
    p = louvain(TWO_TRIANGLES)
    assert p.same_grouping(Partition(TWO_TRIANGLES, [0, 0, 0, 1, 1, 1]))
    # 2 * (3/6 - (6/12)^2)
    assert modularity(TWO_TRIANGLES, p) == pytest.approx(0.5, abs=1e-12)


def test_karate_four_communities(karate):
    counts = {len(louvain(karate, LouvainConfig(seed=s))) for s in range(8)}
    assert 4 in counts


def test_deterministic_given_seed(karate):
    a = louvain(karate, LouvainConfig(seed=11))
    b = louvain(karate, LouvainConfig(seed=11))
    assert a == b


def test_config_validation():
    with pytest.raises(ValueError):
        LouvainConfig(max_levels=0)
    with pytest.raises(ValueError):
        LouvainConfig(min_gain=-1.0)


def test_single_edge_merges():
    g = Graph.from_edges([(0, 1)])
    labels, improved = local_move_pass(g, [0, 1], [0, 1])
    assert improved
    assert labels[0] == labels[1]


def test_fixed_point_is_unchanged():
    labels = [0, 0, 0, 1, 1, 1]
    out, improved = local_move_pass(TWO_TRIANGLES, labels, list(range(6)))
    assert not improved
    assert out == labels


def test_order_must_be_permutation():
    with pytest.raises(ValueError):
        local_move_pass(TWO_TRIANGLES, list(range(6)), [0, 0, 1, 2, 3, 4])


def test_passes_never_decrease_q():
    rng = np.random.default_rng(0)
    for trial in range(10):
        iu, ju = np.triu_indices(20, 1)
        keep = rng.random(iu.size) < 0.2
        g = Graph.from_edges(zip(iu[keep], ju[keep]), n=20)
        ag = AggregateGraph.from_graph(g)
        labels = list(range(g.n))
        q = modularity(g, Partition(g, labels))
        for _ in range(20):
            labels, improved = local_move_pass(ag, labels, rng.permutation(g.n).tolist())
            q_new = modularity(g, Partition(g, labels))
            assert q_new >= q - 1e-12
            q = q_new
            if not improved:
                break


def test_aggregate_singletons_is_isomorphic():
    ag, index = aggregate(TWO_TRIANGLES, list(range(6)))
    assert index == {i: i for i in range(6)}
    assert ag.weights == AggregateGraph.from_graph(TWO_TRIANGLES).weights


def test_aggregate_two_triangles():
    ag, _ = aggregate(TWO_TRIANGLES, [0, 0, 0, 1, 1, 1])
    assert ag.n == 2
    assert ag.self_loop(0) == ag.self_loop(1) == 6.0
    assert 1 not in ag.weights[0]


@given(graph_and_partition())
def test_aggregation_identity(gp):
    g, p = gp
    ag, index = aggregate(g, p.labels.tolist())
    assert ag.total_weight == 2 * g.m
    # the aggregate's singleton partition is p itself
    assert weighted_modularity(ag, list(range(ag.n))) == pytest.approx(modularity(g, p), abs=1e-12)
    # any coarser partition of the aggregate unrolls consistently
    coarse = [i % 2 for i in range(ag.n)]
    unrolled = [coarse[index[c]] for c in p.labels]
    assert weighted_modularity(ag, coarse) == pytest.approx(
        modularity(g, Partition(g, unrolled)), abs=1e-12
    )


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6))
def test_bounds_against_brute_force(g):
    p, history = louvain_levels(g)
    q = modularity(g, p)
    assert q >= modularity(g, Partition.singletons(g)) - 1e-12
    assert q <= best_partition_brute(g.n, g.edges()) + 1e-12
    assert all(b >= a - 1e-12 for a, b in zip(history, history[1:]))
    if history:
        assert history[-1] == pytest.approx(q, abs=1e-12)


def test_isolated_vertex_stays_alone():
    g = Graph.from_edges([(0, 1), (1, 2), (0, 2)], n=4)
    p = louvain(g)
    assert p.members(p.community_of(3)) == {3}
