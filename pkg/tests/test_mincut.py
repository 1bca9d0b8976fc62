import math

import pytest

from conftest import (
    BRIDGE_EDGE_ID,
    JOIN_EDGE_IDS,
    complete,
    double_bridge_triangles,
    path_graph,
    petersen,
    two_k4_two_joins,
    two_triangles_bridge,
)
from smallcuts.generators import cycle
from smallcuts.graphs import from_edge_list
from smallcuts.mincut import (
    DETOUR_FACTOR,
    IterationPlan,
    LocalGraph,
    StCertificate,
    local_st_cut,
    randomized_min_cut,
    randomized_vertex_cut,
    scan_min_cut,
    verify_cut,
    verify_vertex_cut,
)
from smallcuts.oracles import min_cut_oracle, vertex_cut_oracle
from smallcuts.primitives import Selector


def plan_for(g, lam, iters=80):
    return IterationPlan.edges(g, lam, max_iterations=iters)


def vplan_for(g, lam, iters=60):
    return IterationPlan.vertices(g, lam, max_iterations=iters)


# ---------------------------------------------------------------- verify_cut


def test_verify_bridge_is_cut(bridge_graph):
    res = verify_cut(bridge_graph, {BRIDGE_EDGE_ID}, lam=1)
    assert res.is_cut
    assert res.rounds <= 3 * 1 * bridge_graph.diameter + 4


def test_verify_single_cycle_edge_is_not_cut():
    assert not verify_cut(cycle(6), {1}, lam=1).is_cut


def test_verify_antipodal_pair_cuts_cycle():
    assert verify_cut(cycle(6), {1, 4}, lam=2).is_cut


def test_verify_rejects_oversized_candidate():
    with pytest.raises(ValueError):
        verify_cut(cycle(6), {1, 2, 3}, lam=2)
    with pytest.raises(ValueError):
        verify_cut(cycle(6), {99}, lam=1)


def test_verify_empty_set_detects_disconnected_graph():
    g = from_edge_list(4, [(0, 1), (2, 3)])
    assert verify_cut(g, set(), lam=1).is_cut
    assert not verify_cut(cycle(4), set(), lam=1).is_cut


# -------------------------------------------------------------- local cuts


def test_local_cut_single_path():
    g = path_graph(4)
    cert = StCertificate(3, 0, frozenset({1, 2, 3}))
    value, witness, paths = local_st_cut(g, cert, lam=2)
    assert value == 1
    assert len(witness) == 1 and witness <= cert.edges
    assert paths == [[1, 2, 3]]


def test_local_cut_two_disjoint_paths():
    g = cycle(4)
    cert = StCertificate(2, 0, frozenset(g.edge_ids))
    value, witness, paths = local_st_cut(g, cert, lam=3)
    assert value == 2
    assert len(witness) == 2
    assert len(paths) == 2
    assert not set(paths[0]) & set(paths[1])


def test_local_cut_absent_owner_reports_zero():
    g = two_triangles_bridge()
    cert = StCertificate(5, 0, frozenset({1, 2, 3}))
    assert local_st_cut(g, cert, lam=2) == (0, frozenset(), [])


def test_local_cut_truncates_at_lam_plus_one():
    g = complete(5)
    cert = StCertificate(4, 0, frozenset(g.edge_ids))
    value, witness, _ = local_st_cut(g, cert, lam=2)
    assert value == 3  # reported as "> lam"
    assert witness == frozenset()


def test_local_vertex_cut_on_path():
    g = path_graph(3)
    local = LocalGraph(g, g.edge_ids)
    value, witness, adjacent = local.st_vertex_cut(0, 2, limit=3)
    assert (value, witness, adjacent) == (1, frozenset({1}), False)


def test_local_vertex_cut_adjacent_flagged():
    g = complete(3)
    local = LocalGraph(g, g.edge_ids)
    value, witness, adjacent = local.st_vertex_cut(0, 1, limit=3)
    assert adjacent


# ------------------------------------------------------- randomized min cut


def test_bridge_min_cut(bridge_graph):
    res = randomized_min_cut(bridge_graph, 1, seed=1, plan=plan_for(bridge_graph, 1))
    assert res.value == 1
    assert res.witness == frozenset({BRIDGE_EDGE_ID})
    assert res.discovered_by is not None
    assert verify_cut(bridge_graph, res.witness, 1).is_cut


def test_two_k4_min_cut(two_k4):
    res = randomized_min_cut(two_k4, 2, seed=3, plan=plan_for(two_k4, 2, 500))
    assert res.value == 2
    assert res.witness == JOIN_EDGE_IDS


def test_c4_min_cut_witness_in_oracle_list():
    g = cycle(4)
    oracle = min_cut_oracle(g)
    res = randomized_min_cut(g, 2, seed=7, plan=plan_for(g, 2))
    assert res.value == oracle.value == 2
    assert res.witness in oracle.witnesses


def test_parallel_bridge_cut():
    # degree-2 corners give 2-cuts too; the doubled bridge is just one of them
    g = double_bridge_triangles()
    oracle = min_cut_oracle(g)
    assert frozenset({7, 8}) in oracle.witnesses
    res = randomized_min_cut(g, 2, seed=5, plan=plan_for(g, 2, 300))
    assert res.value == 2
    assert res.witness in oracle.witnesses


def test_connectivity_exceeds_bound():
    g = complete(4)  # 3-edge-connected
    res = randomized_min_cut(g, 1, seed=2, plan=plan_for(g, 1))
    assert res.exceeds_bound
    assert res.value is None
    assert res.witness == frozenset()


def test_disconnected_graph_reports_zero_cut():
    g = from_edge_list(4, [(0, 1), (2, 3)])
    res = randomized_min_cut(g, 1, seed=4, plan=plan_for(g, 1))
    assert res.value == 0
    assert res.witness == frozenset()


def test_same_seed_same_result(bridge_graph):
    a = randomized_min_cut(bridge_graph, 1, seed=11, plan=plan_for(bridge_graph, 1))
    b = randomized_min_cut(bridge_graph, 1, seed=11, plan=plan_for(bridge_graph, 1))
    assert (a.value, a.witness, a.discovered_by, a.rounds) == (
        b.value,
        b.witness,
        b.discovered_by,
        b.rounds,
    )


def test_early_exit_reduces_iterations(bridge_graph):
    plan = plan_for(bridge_graph, 1, 2000)
    res = randomized_min_cut(
        bridge_graph, 1, seed=1, plan=plan, early_exit_window=50
    )
    assert res.iterations < plan.iterations
    assert res.value == 1


def test_scan_finds_lambda(two_k4):
    res = scan_min_cut(two_k4, 3, seed=9, plan_for=lambda g, lam: plan_for(g, lam, 500))
    assert res.value == 2


def test_petersen_min_cut_lambda3():
    g = petersen()
    res = randomized_min_cut(g, 3, seed=13, plan=plan_for(g, 3, 250))
    oracle = min_cut_oracle(g, cap=3)
    assert res.value == oracle.value == 3
    assert res.witness in oracle.witnesses


def test_phase1_round_accounting(bridge_graph):
    plan = plan_for(bridge_graph, 1, 40)
    res = randomized_min_cut(bridge_graph, 1, seed=1, plan=plan)
    per_iter = 3 * plan.depth_cap + 3
    assert res.rounds <= plan.iterations * per_iter + 6 * (
        bridge_graph.n + plan.depth_cap + 4
    )


def test_success_probability_floor(bridge_graph):
    # fixed triplet: source 0, owner 5, faults = one triangle edge
    g = bridge_graph
    lam = 1
    plan = IterationPlan.edges(g, lam)
    fault = frozenset({4})  # edge (3,4) in the far triangle
    path = [3, 7, 6]  # tie-broken shortest 0->5 path avoiding the fault
    q = plan.p ** (3 * lam * g.diameter) * (1 - plan.p) ** lam
    hits = 0
    trials = 10_000
    for i in range(trials):
        sel = Selector.random_edges(plan.p, seed=123, iteration=i)
        ok = all(sel.includes_edge(eid, *g.endpoints(eid)) for eid in path)
        ok = ok and not any(sel.includes_edge(eid, *g.endpoints(eid)) for eid in fault)
        hits += ok
    assert hits / trials >= 0.5 * q


# ------------------------------------------------------------- vertex cuts


def test_vertex_cut_path():
    g = path_graph(3)
    res = randomized_vertex_cut(g, 1, seed=1, plan=vplan_for(g, 1))
    assert res.value == 1
    assert res.witness == frozenset({1})


def test_vertex_cut_c4():
    g = cycle(4)
    res = randomized_vertex_cut(g, 2, seed=2, plan=vplan_for(g, 2))
    assert res.value == 2
    assert res.witness in (frozenset({1, 3}), frozenset({0, 2}))
    assert verify_vertex_cut(g, res.witness, 2).is_cut


def test_vertex_cut_k4_all_adjacent():
    g = complete(4)
    res = randomized_vertex_cut(g, 3, seed=3, plan=None)
    assert res.exceeds_bound
    assert res.note is not None


def test_vertex_cut_matches_oracle_on_grid():
    from conftest import grid

    g = grid(3, 3)
    res = randomized_vertex_cut(g, 2, seed=4, plan=vplan_for(g, 2, 40))
    # oracle global vertex connectivity of the 3x3 grid is 2
    assert res.value == 2
    assert verify_vertex_cut(g, res.witness, 2).is_cut


def test_verify_vertex_cut_examples():
    g = path_graph(3)
    assert verify_vertex_cut(g, {1}, 1).is_cut
    g2 = cycle(5)
    assert not verify_vertex_cut(g2, {0}, 1).is_cut
    assert verify_vertex_cut(g2, {1, 4}, 2).is_cut  # separates 0 from 2,3
