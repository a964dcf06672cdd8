import random

import pytest

from dpdefect import (
    COLORABLE,
    CRITICAL,
    NOT_CRITICAL,
    UNREFUTED,
    CapacityFunction,
    DefectParams,
    Exhaustive,
    Reduced,
    Sampled,
    SimpleGraph,
    WeightedInstance,
    colorable_all_covers,
    enumerate_critical,
    find_coloring,
    flag_path_instance,
    graphs_up_to_iso,
    is_critical,
    sampled_edge_deletion_sweep,
    verify_sharpness_suite,
)
from dpdefect.harness import _defect_tensor, _has_bad_signing
from conftest import cycle_graph, k2, random_caps, random_graph

P12 = DefectParams(1, 2)
P00 = DefectParams(0, 0)


def test_single_forbidden_vertex_is_critical():
    inst = WeightedInstance(
        SimpleGraph(1, frozenset()), P12, CapacityFunction(((-1, -1),))
    )
    verdict = is_critical(inst, Exhaustive())
    assert verdict.verdict == CRITICAL
    assert verdict.certifying
    assert verdict.potential_ok is True  # rho = i - j - 1 exactly


def test_k2_zero_defect_colorable():
    inst = WeightedInstance.uniform(k2(), P00)
    verdict = is_critical(inst, Exhaustive())
    assert verdict.verdict == COLORABLE


def test_k2_forbidden_poor_pair_critical():
    inst = WeightedInstance(
        k2(), P12, CapacityFunction(((-1, 0), (-1, 0)))
    )
    verdict = is_critical(inst, Exhaustive())
    assert verdict.verdict == CRITICAL
    assert verdict.potential_ok is True


def test_c3_zero_defect_critical_and_deletions_colorable():
    inst = WeightedInstance.uniform(cycle_graph(3), P00)
    verdict = is_critical(inst, Exhaustive())
    assert verdict.verdict == CRITICAL
    for e in inst.graph.sorted_edges:
        sub = is_critical(inst.without_edge(e), Exhaustive())
        assert sub.verdict == COLORABLE


def test_triangle_with_pendant_not_critical():
    graph = SimpleGraph.from_edges(4, [(0, 1), (0, 2), (1, 2), (2, 3)])
    inst = WeightedInstance.uniform(graph, P00)
    verdict = is_critical(inst, Exhaustive())
    assert verdict.verdict == NOT_CRITICAL
    assert verdict.failing_edge == (2, 3)  # the triangle survives this deletion
    assert verdict.failing_witness is not None
    assert find_coloring(inst.without_edge((2, 3)), verdict.failing_witness) is None


def test_isolated_vertex_blocks_criticality():
    graph = SimpleGraph.from_edges(4, [(0, 1), (0, 2), (1, 2)])
    inst = WeightedInstance.uniform(graph, P00)
    verdict = is_critical(inst, Exhaustive())
    assert verdict.verdict == NOT_CRITICAL
    assert verdict.failing_vertex == 3


def test_sampled_never_certifies():
    inst = WeightedInstance(
        SimpleGraph(1, frozenset()), P12, CapacityFunction(((-1, -1),))
    )
    verdict = is_critical(inst, Sampled(count=20, seed=3))
    assert verdict.verdict == UNREFUTED
    assert not verdict.certifying

    colorable = is_critical(WeightedInstance.uniform(k2(), P00), Sampled(5, 1))
    assert colorable.verdict == COLORABLE
    assert not colorable.certifying


def test_is_critical_deterministic_and_worker_independent():
    inst = WeightedInstance.uniform(cycle_graph(5), P00)
    a = is_critical(inst, Exhaustive())
    b = is_critical(inst, Exhaustive())
    c = is_critical(inst, Exhaustive(), workers=2)
    assert a == b == c
    assert a.verdict == CRITICAL


def test_reduced_strategy_matches_exhaustive_on_small_host():
    from dpdefect import ConstructionSpec, GraphBuilder, make_flag

    builder = GraphBuilder(2)
    builder.add_edge(0, 1)
    f0 = make_flag(builder, 0, P12)
    f1 = make_flag(builder, 1, P12)
    graph = builder.graph()
    spec = ConstructionSpec(P12, (0, 1), ((f0,), (f1,)))
    inst = WeightedInstance.uniform(graph, P12)
    reduced = is_critical(inst, Reduced(spec))
    exhaustive = is_critical(inst, Exhaustive())
    assert reduced.verdict == exhaustive.verdict
    assert reduced.certifying
    assert len(reduced.edge_orbit_map) == 7  # 1 path edge + 3 orbits per base
    covered = sorted(e for orbit in reduced.edge_orbit_map for e in orbit)
    assert covered == sorted(inst.graph.sorted_edges)


def test_graphs_up_to_iso_counts():
    assert [len(graphs_up_to_iso(n)) for n in range(1, 6)] == [1, 2, 4, 11, 34]


def test_graphs_up_to_iso_ceiling():
    with pytest.raises(ValueError):
        graphs_up_to_iso(7)


def test_enumerate_uniform_12_n3_empty():
    rep = enumerate_critical(P12, 3, mode="uniform")
    assert rep.graphs_examined == 4
    assert rep.criticals == ()
    assert rep.bound_min_edges == 6  # unreachable with 3 vertices
    assert not rep.potential_violations and not rep.sparsity_violations


def test_enumerate_uniform_00_n3_triangle():
    rep = enumerate_critical(P00, 3, mode="uniform")
    assert len(rep.criticals) == 1
    assert rep.min_edges == 3


def test_enumerate_uniform_01_n3():
    rep = enumerate_critical(DefectParams(0, 1), 3, mode="uniform")
    assert rep.graphs_examined == 4
    assert rep.criticals == ()  # fixed by exhaustion


def test_enumerate_weighted_small_counts():
    rep1 = enumerate_critical(P12, 1, mode="weighted")
    assert rep1.pairs_examined == 12
    assert len(rep1.criticals) == 1
    assert rep1.criticals[0].caps == ((-1, -1),)

    rep2 = enumerate_critical(P12, 2, mode="weighted")
    assert rep2.pairs_examined == 288
    assert len(rep2.criticals) == 16
    assert not rep2.potential_violations

    rep3 = enumerate_critical(P12, 3, mode="weighted")
    assert rep3.pairs_examined == 6912
    assert len(rep3.criticals) == 493
    assert not rep3.potential_violations


def test_enumerate_weighted_guard():
    with pytest.raises(ValueError):
        enumerate_critical(P12, 5, mode="weighted")


def test_prefilter_agrees_with_solver():
    rng = random.Random(2718)
    for _ in range(120):
        graph = random_graph(rng, rng.randint(1, 4), 0.6)
        params = DefectParams(rng.randint(0, 2), rng.randint(2, 4))
        caps = random_caps(rng, graph.n, params)
        inst = WeightedInstance(graph, params, caps)
        D, mapbits = _defect_tensor(graph)
        fast = _has_bad_signing(D, mapbits, caps.pairs)
        slow = not colorable_all_covers(inst).colorable
        assert fast == slow


def _naive_colorable_all(inst):
    m = inst.graph.edge_count()
    from dpdefect import CoverSigning, brute_force_oracle

    for bits in range(1 << m):
        signing = CoverSigning.from_bits(inst.graph, bits)
        if brute_force_oracle(inst, signing) is None:
            return False
    return True


def _naive_is_critical(inst):
    """Definitional oracle: check every proper subgraph, not just edge
    deletions, each by brute force over all signings and maps."""
    import itertools as it

    if _naive_colorable_all(inst):
        return COLORABLE
    graph = inst.graph
    n = graph.n
    for keep in it.chain.from_iterable(
        it.combinations(range(n), r) for r in range(n + 1)
    ):
        relabel = {v: k for k, v in enumerate(keep)}
        inside = [e for e in graph.sorted_edges if e[0] in relabel and e[1] in relabel]
        for r in range(len(inside) + 1):
            for chosen in it.combinations(inside, r):
                if len(keep) == n and len(chosen) == graph.edge_count():
                    continue  # not a proper subgraph
                sub_graph = SimpleGraph.from_edges(
                    len(keep), [(relabel[u], relabel[v]) for u, v in chosen]
                )
                sub = WeightedInstance(
                    sub_graph,
                    inst.params,
                    CapacityFunction(tuple(inst.caps[v] for v in keep)),
                )
                if not _naive_colorable_all(sub):
                    return NOT_CRITICAL
    return CRITICAL


def test_is_critical_matches_definitional_oracle():
    rng = random.Random(9009)
    seen = {COLORABLE: 0, NOT_CRITICAL: 0, CRITICAL: 0}
    for _ in range(150):
        graph = random_graph(rng, rng.randint(1, 3), rng.choice([0.4, 0.8]))
        i = rng.randint(0, 2)
        params = DefectParams(i, rng.randint(i, i + 2))
        inst = WeightedInstance(graph, params, random_caps(rng, graph.n, params))
        want = _naive_is_critical(inst)
        got = is_critical(inst, Exhaustive()).verdict
        assert got == want, (inst, got, want)
        seen[want] += 1
    assert all(seen.values()), seen  # all three verdicts exercised


def test_sharpness_suite_small():
    report = verify_sharpness_suite([(1, 2), (1, 3)], [1, 2])
    assert report.all_ok
    assert len(report.entries) == 4
    assert all(e.criticality is None for e in report.entries)


def test_reduced_deletion_phase_with_path_edge():
    # a host whose witness phase must succeed, so the orbit-reduced deletion
    # phase (including the path-edge orbit) really runs
    from dpdefect import ConstructionSpec, GraphBuilder, make_flag

    builder = GraphBuilder(2)
    builder.add_edge(0, 1)
    f0 = make_flag(builder, 1, P12)
    f1 = make_flag(builder, 1, P12)
    graph = builder.graph()
    spec = ConstructionSpec(P12, (0, 1), ((), (f0, f1)))
    caps = [(1, 2)] * graph.n
    caps[0] = (0, 0)
    caps[1] = (0, 0)  # one twisted + one parallel flag then kills both nodes
    inst = WeightedInstance(graph, P12, CapacityFunction(tuple(caps)))
    reduced = is_critical(inst, Reduced(spec))
    exhaustive = is_critical(inst, Exhaustive())
    assert reduced.witness is not None and exhaustive.witness is not None
    assert reduced.verdict == exhaustive.verdict
    assert len(reduced.edge_orbit_map) == 4  # path edge + three orbits at base 1
    assert reduced.edges_checked >= 1


def test_two_base_host_minus_edge_survives_sampling():
    from dpdefect import sample_covers

    inst, _ = flag_path_instance(P12, 2)
    inst_e = inst.without_edge(inst.graph.sorted_edges[0])
    rep = sample_covers(inst_e, 1000, seed=42)
    assert rep.witness is None
    assert rep.examined == 1000


def test_sampled_edge_deletion_sweep_deterministic():
    inst, _ = flag_path_instance(P12, 1)
    a = sampled_edge_deletion_sweep(inst, count=50, seed=11)
    b = sampled_edge_deletion_sweep(inst, count=50, seed=11, workers=2)
    assert a == b
    assert len(a) == 25
    assert all(w is None for _, w in a)
