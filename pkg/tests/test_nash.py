import json

import numpy as np
import pytest
from hypothesis import given, settings

from comdet.graph import Graph
from comdet.louvain import LouvainConfig, louvain
from comdet.modularity import Partition, check_stats, exact_delta_q, modularity
from comdet.nash import (
    CORRECTION,
    Case,
    MoveEvaluation,
    StabilizationError,
    StabilizeConfig,
    classify,
    delta_r,
    is_nash_equilibrium,
    rm,
    rm_all,
    rm_correction,
    stabilize,
    unstable_vertices,
)

from conftest import graph_and_partition, random_instance
from oracles import brute_delta_q

PATH = Graph.from_edges([(0, 1), (1, 2)], labels=["a", "b", "c"])
EDGE = Graph.from_edges([(0, 1)])
TWO_TRIANGLES = Graph.from_edges([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])

# Louvain seed whose Southern Women partition has 7/5/2 events and Q = 0.309
SW_SEED = 16


@pytest.fixture(scope="module")
def sw_partition(southern_women):
    return louvain(southern_women, LouvainConfig(seed=SW_SEED))


def test_self_move_is_exactly_zero(karate):
    p = louvain(karate)
    for w in range(karate.n):
        assert rm(karate, p, w, p.community_of(w)) == 0.0


def test_path_example():
    p = Partition(PATH, [0, 0, 1])
    # m=2, l_c|{a,b}=1, l_c|{c}=0, d_c=1, d_{c}=1, d_{a,b}=3: 1/2 - (1 + 2)/8
    assert rm(PATH, p, 2, 0) == pytest.approx(0.125, abs=1e-15)
    assert exact_delta_q(PATH, p, 2, 0) == pytest.approx(0.125, abs=1e-15)


def test_unknown_target(karate):
    p = Partition.whole(karate)
    with pytest.raises(KeyError, match="unknown community"):
        rm(karate, p, 0, 5)
    assert rm(karate, p, 0, 5, allow_empty_target=True) == pytest.approx(
        exact_delta_q(karate, p, 0, 5), abs=1e-12
    )


def test_sw_w8_prefers_another_community(southern_women, sw_partition):
    g, p = southern_women, sw_partition
    w8 = g.index("W8")
    others = [c for c in p.communities if c != p.community_of(w8)]
    assert max(rm(g, p, w8, c) for c in others) > 0


def test_rm_all_shape(karate):
    p = louvain(karate)
    evals = rm_all(karate, p)
    assert len(evals) == karate.n * (len(p) - 1)
    assert all(e.source == p.community_of(e.vertex) != e.target for e in evals)


def test_rm_all_with_fresh_target(karate):
    p = louvain(karate)
    evals = rm_all(karate, p, allow_empty_target=True)
    assert len(evals) == karate.n * len(p)


def test_karate_louvain_has_stable_seed(karate):
    assert any(
        not unstable_vertices(karate, louvain(karate, LouvainConfig(seed=s))) for s in range(32)
    )


def test_delta_r_examples():
    iso = Graph.from_edges([(0, 1)], n=3)
    assert delta_r(iso, 0, 2) == 0.0
    assert delta_r(EDGE, 0, 1) == 0.5
    # w=0 has degree 3, z=4 degree 2, not adjacent, m=10
    g = Graph.from_edges(
        [(0, 1), (0, 2), (0, 3), (4, 5), (4, 6), (7, 8), (8, 9), (9, 10), (10, 11), (11, 12)]
    )
    assert (g.m, g.degree(0), g.degree(4)) == (10, 3, 2)
    assert delta_r(g, 0, 4) == pytest.approx(-0.3, abs=1e-15)
    with pytest.raises(ValueError):
        delta_r(g, 1, 1)


def test_correction_table_shape():
    # rows: to, columns: from
    assert CORRECTION[Case.SOURCE][Case.TARGET] == -2
    assert CORRECTION[Case.TARGET][Case.SOURCE] == 2
    assert CORRECTION[Case.TARGET][Case.OTHER] == 1
    assert CORRECTION[Case.SOURCE][Case.OTHER] == -1
    assert CORRECTION[Case.OTHER][Case.SOURCE] == 1
    assert CORRECTION[Case.OTHER][Case.TARGET] == -1
    for case in Case:
        assert CORRECTION[case][case] == 0
    assert CORRECTION[Case.OTHER][Case.OTHER] == 0


def test_correction_both_other_is_zero(karate):
    move = MoveEvaluation(0, 0, 1, 0.0)
    assert rm_correction(karate, 5, Case.OTHER, Case.OTHER, move) == 0.0


def test_correction_additivity(karate):
    move = MoveEvaluation(0, 0, 1, 0.0)
    for z in range(1, karate.n):
        two = 2 * delta_r(karate, 0, z) / karate.m
        c = lambda f, t: rm_correction(karate, z, f, t, move)  # noqa: E731
        assert c("C1", "C2") == pytest.approx(c("C1", "other") + c("other", "C2"), abs=1e-15)
        assert c("C1", "C2") == pytest.approx(two, abs=1e-15)
        assert c("C2", "C1") == pytest.approx(c("C2", "other") + c("other", "C1"), abs=1e-15)
        assert c("C2", "C1") == pytest.approx(-two, abs=1e-15)


def test_correction_errors(karate):
    move = MoveEvaluation(0, 0, 1, 0.0)
    with pytest.raises(ValueError, match="re-evaluated"):
        rm_correction(karate, 0, Case.SOURCE, Case.TARGET, move)
    with pytest.raises(ValueError, match="invalid case"):
        rm_correction(karate, 3, "C9", Case.TARGET, move)
    with pytest.raises(ValueError, match="no-op"):
        rm_correction(karate, 3, Case.OTHER, Case.TARGET, MoveEvaluation(0, 1, 1, 0.0))


def test_correction_matches_recomputation_random():
    rng = np.random.default_rng(15)
    cells = set()
    for _ in range(30):
        iu, ju = np.triu_indices(15, 1)
        keep = rng.random(iu.size) < 0.25
        g = Graph.from_edges(zip(iu[keep], ju[keep]), n=15)
        if g.m == 0:
            continue
        p = Partition(g, rng.integers(0, 4, size=15).tolist())
        w = int(rng.integers(15))
        c2 = int(rng.choice([c for c in p.communities + [p.new_community_id()] if c != p.community_of(w)]))
        move = MoveEvaluation(w, p.community_of(w), c2, rm(g, p, w, c2, True))
        after = p.copy()
        after.move(g, w, c2)
        for z in range(15):
            if z == w:
                continue
            for c in p.communities + [c2]:
                f, t = classify(p.community_of(z), move), classify(c, move)
                cells.add((t, f))
                corrected = rm(g, p, z, c, True) + rm_correction(g, z, f, t, move)
                assert corrected == pytest.approx(rm(g, after, z, c, True), abs=1e-12)
    assert len(cells) == 9


@settings(max_examples=200)
@given(graph_and_partition(max_n=14))
def test_rm_is_exact_modularity_change(gp):
    g, p = gp
    for w in range(g.n):
        for c in p.communities + [p.new_community_id()]:
            fast = rm(g, p, w, c, allow_empty_target=True)
            assert fast == pytest.approx(exact_delta_q(g, p, w, c), abs=1e-12)
            assert fast == pytest.approx(brute_delta_q(g.n, g.edges(), p.labels, w, c), abs=1e-12)


def test_stabilize_stable_input_is_untouched(karate):
    seed = next(s for s in range(32) if not unstable_vertices(karate, louvain(karate, LouvainConfig(seed=s))))
    p = louvain(karate, LouvainConfig(seed=seed))
    out, trace = stabilize(karate, p)
    assert len(trace) == 0
    assert out == p
    assert trace.iterations == 1


def test_stabilize_southern_women(southern_women, sw_partition):
    g = southern_women
    assert modularity(g, sw_partition) == pytest.approx(0.309, abs=5e-4)
    before = sw_partition.copy()
    out, trace = stabilize(g, sw_partition, StabilizeConfig(debug=True))
    assert sw_partition == before
    assert [g.labels[v] for v in trace.moved_vertices] == ["W8", "W9"]
    assert trace.final_q == pytest.approx(0.325, abs=5e-4)
    # both women join the smallest community
    small = min(sw_partition.communities, key=lambda c: len(sw_partition.members(c)))
    assert {e.move.target for e in trace.entries} == {small}
    assert is_nash_equilibrium(g, out)


def test_trace_invariants_and_json(southern_women, sw_partition):
    _, trace = stabilize(southern_women, sw_partition)
    q = trace.initial_q
    for e in trace.entries:
        assert e.q_before == q
        assert e.q_after - e.q_before == pytest.approx(e.move.gain, abs=1e-9)
        assert e.q_after > e.q_before
        q = e.q_after
    rows = json.loads(json.dumps(trace.to_json(southern_women)))
    assert set(rows[0]) == {"vertex", "from", "to", "gain", "q_before", "q_after", "label"}


def test_max_moves_guard(southern_women, sw_partition):
    with pytest.raises(StabilizationError) as info:
        stabilize(southern_women, sw_partition, StabilizeConfig(max_moves=1))
    assert len(info.value.trace) == 1


def test_config_validation():
    with pytest.raises(ValueError):
        StabilizeConfig(epsilon=0.0)


def test_empty_source_cleanup():
    out, trace = stabilize(EDGE, Partition.singletons(EDGE), StabilizeConfig(debug=True))
    assert len(trace) == 1
    assert out.communities == [1]
    assert check_stats(EDGE, out) is None


def test_tie_break_lowest_vertex_then_community():
    # symmetric: both endpoints gain equally by joining the other
    out, trace = stabilize(EDGE, Partition.singletons(EDGE))
    first = trace.entries[0].move
    assert (first.vertex, first.target) == (0, 1)


@given(graph_and_partition(max_n=14))
def test_fresh_community_never_strictly_best(gp):
    # summing l_j - d_w D_j / 2m over the other communities shows that a
    # positive gain toward an empty community is always matched by an
    # existing one
    g, p = gp
    fresh = p.new_community_id()
    for w in range(g.n):
        g_fresh = rm(g, p, w, fresh, allow_empty_target=True)
        if g_fresh > 1e-12:
            others = [rm(g, p, w, c) for c in p.communities if c != p.community_of(w)]
            assert others and max(others) >= g_fresh - 1e-12


def test_allow_empty_target_runs_to_equilibrium():
    rng = np.random.default_rng(5)
    for _ in range(20):
        g, p = random_instance(rng, max_n=25, p=0.2)
        out, trace = stabilize(g, p, StabilizeConfig(allow_empty_target=True, debug=True))
        assert is_nash_equilibrium(g, out, allow_empty_target=True)


def test_single_edge_split_is_not_equilibrium():
    p = Partition.singletons(EDGE)
    # m=1: 1/1 - (1 + 1*(1-1))/2
    assert rm(EDGE, p, 0, 1) == pytest.approx(0.5, abs=1e-15)
    assert not is_nash_equilibrium(EDGE, p)


def test_two_triangles_merged_is_unilaterally_stable():
    # splitting off a whole triangle raises Q to 0.5, but no single vertex
    # gains by leaving: the merged partition is a (poor) equilibrium
    p = Partition.whole(TWO_TRIANGLES)
    fresh = p.new_community_id()
    gains = [exact_delta_q(TWO_TRIANGLES, p, w, fresh) for w in range(6)]
    assert max(gains) < 0
    assert is_nash_equilibrium(TWO_TRIANGLES, p, allow_empty_target=True)
    assert modularity(TWO_TRIANGLES, Partition(TWO_TRIANGLES, [0, 0, 0, 1, 1, 1])) == 0.5


@settings(max_examples=100, deadline=None)
@given(graph_and_partition(max_n=20))
def test_stabilize_reaches_equilibrium(gp):
    g, p = gp
    out, trace = stabilize(g, p, StabilizeConfig(debug=True))
    assert is_nash_equilibrium(g, out)
    assert trace.final_q >= trace.initial_q
    assert trace.final_q == pytest.approx(modularity(g, out), abs=1e-12)
    for e in trace.entries:
        assert e.q_after - e.q_before > 1e-9


def test_stabilize_random_debug_mode():
    rng = np.random.default_rng(3)
    for _ in range(20):
        g, p = random_instance(rng, max_n=40, p=0.15)
        out, _ = stabilize(g, p, StabilizeConfig(debug=True, allow_empty_target=bool(rng.integers(2))))
        assert check_stats(g, out) is None
