"""Top-level workflows: criticality certification and small-graph surveys.

An instance is critical when some cover signing defeats every coloring but
every proper subgraph is colorable for every signing.  Colorability only
gains from deleting edges, so single-edge deletions cover all proper
subgraphs once isolated vertices are handled separately (an instance with
two or more vertices and an isolated vertex is never critical: either that
vertex alone is uncolorable, or removing it leaves a non-colorable proper
subgraph with the full edge set).
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .constructions import (
    ConstructionSpec,
    edge_orbits,
    flag_path_instance,
    hard_cover_signing,
    reduced_cover_iterator,
    verify_counts,
)
from .model import (
    CapacityFunction,
    CoverSigning,
    DefectParams,
    Edge,
    SimpleGraph,
    WeightedInstance,
)
from .potential import sparsity_test, subset_potential
from .solver import (
    colorable_all_covers,
    find_coloring,
    sample_covers,
)

CRITICAL = "critical"
COLORABLE = "colorable"
NOT_CRITICAL = "not-critical"
UNREFUTED = "unrefuted"  # sampled runs cannot certify the universal claim

MODE_UNIFORM = "uniform"
MODE_WEIGHTED = "weighted"


@dataclass(frozen=True)
class Exhaustive:
    max_edges: int = 16


@dataclass(frozen=True)
class Reduced:
    spec: ConstructionSpec


@dataclass(frozen=True)
class Sampled:
    count: int
    seed: int


Strategy = Exhaustive | Reduced | Sampled


@dataclass(frozen=True)
class CriticalityVerdict:
    verdict: str
    certifying: bool
    witness: CoverSigning | None
    failing_edge: Edge | None
    failing_vertex: int | None
    failing_witness: CoverSigning | None
    covers_checked: int
    edges_checked: int
    nodes_expanded: int
    edge_orbit_map: tuple[tuple[Edge, ...], ...] | None
    potential_ok: bool | None


def in_guaranteed_range(params: DefectParams) -> bool:
    """Parameter range in which the sparsity and potential bounds are claimed."""
    return params.i in (1, 2) and params.j >= 2 * params.i


def _phase_covers(
    instance: WeightedInstance, strategy: Strategy, deleted: Edge | None
) -> tuple[CoverSigning | None, int, int]:
    """One colorability-for-all-covers phase: (witness, examined, nodes)."""
    inst = instance.without_edge(deleted) if deleted else instance
    if isinstance(strategy, Exhaustive):
        res = colorable_all_covers(inst, max_edges=strategy.max_edges)
        return res.witness, res.signings_examined, res.nodes_expanded
    if isinstance(strategy, Reduced):
        covers = reduced_cover_iterator(instance.graph, strategy.spec, deleted)
        res = colorable_all_covers(inst, signings=covers)
        return res.witness, res.signings_examined, res.nodes_expanded
    if isinstance(strategy, Sampled):
        seed = strategy.seed
        if deleted is not None:
            seed += 1 + instance.graph.edge_index[deleted]
        rep = sample_covers(inst, strategy.count, seed)
        return rep.witness, rep.examined, rep.nodes_expanded
    raise TypeError(f"unknown strategy {strategy!r}")


def _check_deleted_edge(args) -> tuple[Edge, CoverSigning | None, int, int]:
    instance, strategy, edge = args
    witness, examined, nodes = _phase_covers(instance, strategy, edge)
    return edge, witness, examined, nodes


def is_critical(
    instance: WeightedInstance, strategy: Strategy, workers: int = 1
) -> CriticalityVerdict:
    """Certify, refute, or (for sampled strategies) fail to refute criticality.

    Phase 1 looks for a signing with no valid coloring; phase 2 checks that
    deleting any single edge restores colorability for every signing.  With
    a Reduced strategy both phases run over symmetry-class representatives
    and phase 2 visits one edge per automorphism orbit.  Sampled runs never
    certify: a clean sampled pass yields the non-certifying UNREFUTED.
    """
    graph = instance.graph
    certifying = not isinstance(strategy, Sampled)
    orbit_map = edge_orbits(strategy.spec) if isinstance(strategy, Reduced) else None

    witness, covers, nodes = _phase_covers(instance, strategy, None)
    if witness is None:
        return CriticalityVerdict(
            COLORABLE, certifying, None, None, None, None,
            covers, 0, nodes, orbit_map, None,
        )

    if graph.n >= 2:
        for v in range(graph.n):
            if graph.degree(v) == 0:
                # Isolated vertex: {v} or G - v is a non-colorable proper subgraph.
                return CriticalityVerdict(
                    NOT_CRITICAL, True, witness, None, v, None,
                    covers, 0, nodes, orbit_map, None,
                )

    if orbit_map is not None:
        edges_to_check: list[Edge] = [orbit[0] for orbit in orbit_map]
    else:
        edges_to_check = list(graph.sorted_edges)

    work = [(instance, strategy, e) for e in edges_to_check]
    if workers > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_check_deleted_edge, work))
    else:
        results = [_check_deleted_edge(item) for item in work]

    edges_checked = 0
    for edge, bad, examined, edge_nodes in results:
        covers += examined
        nodes += edge_nodes
        edges_checked += 1
        if bad is not None:
            return CriticalityVerdict(
                NOT_CRITICAL, True, witness, edge, None, bad,
                covers, edges_checked, nodes, orbit_map, None,
            )

    if not certifying:
        return CriticalityVerdict(
            UNREFUTED, False, witness, None, None, None,
            covers, edges_checked, nodes, orbit_map, None,
        )
    rho = subset_potential(instance, range(graph.n))
    potential_ok = rho <= instance.params.i - instance.params.j - 1
    return CriticalityVerdict(
        CRITICAL, True, witness, None, None, None,
        covers, edges_checked, nodes, orbit_map, potential_ok,
    )


# ---------------------------------------------------------------------------
# Small-graph enumeration up to isomorphism
# ---------------------------------------------------------------------------

def _vertex_pairs(n: int) -> list[Edge]:
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def _degree_class_perms(degrees: list[int]) -> Iterator[tuple[int, ...]]:
    """Permutations placing vertices in non-increasing degree order, with all
    interleavings inside equal-degree classes."""
    n = len(degrees)
    by_degree: dict[int, list[int]] = {}
    for v in range(n):
        by_degree.setdefault(degrees[v], []).append(v)
    groups = [by_degree[d] for d in sorted(by_degree, reverse=True)]
    for arrangement in itertools.product(
        *(itertools.permutations(g) for g in groups)
    ):
        flat = [v for group in arrangement for v in group]
        perm = [0] * n  # perm[v] = new label of v
        for new, old in enumerate(flat):
            perm[old] = new
        yield tuple(perm)


def _canonical_mask(n: int, mask: int, pairs: list[Edge], pair_idx: dict[Edge, int]) -> int:
    if mask == 0:
        return 0
    degrees = [0] * n
    bits = []
    m = mask
    while m:
        k = (m & -m).bit_length() - 1
        bits.append(k)
        u, v = pairs[k]
        degrees[u] += 1
        degrees[v] += 1
        m &= m - 1
    best = None
    for perm in _degree_class_perms(degrees):
        out = 0
        for k in bits:
            u, v = pairs[k]
            pu, pv = perm[u], perm[v]
            out |= 1 << pair_idx[(pu, pv) if pu < pv else (pv, pu)]
        if best is None or out < best:
            best = out
    return best


def graphs_up_to_iso(n: int, max_n: int = 6) -> list[SimpleGraph]:
    """All graphs on n vertices up to isomorphism, by canonical
    adjacency-mask minimization with degree pre-partitioning."""
    if n > max_n:
        raise ValueError(f"isomorphism enumeration ceiling exceeded: n={n} > {max_n}")
    if n == 0:
        return [SimpleGraph(0, frozenset())]
    pairs = _vertex_pairs(n)
    pair_idx = {e: k for k, e in enumerate(pairs)}
    reps = []
    seen: set[int] = set()
    for mask in range(1 << len(pairs)):
        c = _canonical_mask(n, mask, pairs, pair_idx)
        if c not in seen:
            seen.add(c)
            reps.append(
                SimpleGraph.from_edges(
                    n, [pairs[k] for k in range(len(pairs)) if (c >> k) & 1]
                )
            )
    return reps


# ---------------------------------------------------------------------------
# Critical-pair enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriticalEntry:
    edges: tuple[Edge, ...]
    caps: tuple[tuple[int, int], ...]
    rho: int


@dataclass(frozen=True)
class EnumerationReport:
    params: DefectParams
    n: int
    mode: str
    graphs_examined: int
    pairs_examined: int
    criticals: tuple[CriticalEntry, ...]
    min_edges: int | None
    bound_min_edges: int  # ceil(((2i+1)n + j - i + 1) / (i+1))
    potential_violations: tuple[CriticalEntry, ...]
    sparsity_violations: tuple[CriticalEntry, ...]

    @property
    def bound_satisfied(self) -> bool | None:
        if self.min_edges is None:
            return None
        return self.min_edges >= self.bound_min_edges


def _defect_tensor(graph: SimpleGraph) -> tuple[np.ndarray, np.ndarray]:
    """Defect counts D[map, signing, vertex] plus the per-map choice bits."""
    n = graph.n
    m = len(graph.sorted_edges)
    maps = np.arange(1 << n, dtype=np.uint32)
    sgn = np.arange(1 << m, dtype=np.uint32)
    D = np.zeros((1 << n, 1 << m, n), dtype=np.int8)
    for k, (u, v) in enumerate(graph.sorted_edges):
        xor = ((maps >> u) ^ (maps >> v)) & 1
        sbit = (sgn >> k) & 1
        conflict = xor[:, None] == sbit[None, :]
        D[:, :, u] += conflict
        D[:, :, v] += conflict
    mapbits = ((maps[:, None] >> np.arange(n)) & 1).astype(bool)
    return D, mapbits


def _has_bad_signing(
    D: np.ndarray, mapbits: np.ndarray, caps: tuple[tuple[int, int], ...]
) -> bool:
    c1 = np.array([c[0] for c in caps], dtype=np.int8)
    c2 = np.array([c[1] for c in caps], dtype=np.int8)
    thresholds = np.where(mapbits, c2, c1)
    valid = (D <= thresholds[:, None, :]).all(axis=2)
    return bool((~valid.any(axis=0)).any())


def enumerate_critical(
    params: DefectParams, n: int, mode: str = MODE_UNIFORM
) -> EnumerationReport:
    """Survey all n-vertex graphs up to isomorphism for critical instances.

    Uniform mode fixes capacities at (i, j) everywhere and checks, inside
    the claimed parameter range, the minimum-edge bound and that no sparse
    graph turns out non-colorable.  Weighted mode sweeps every capacity
    function (n <= 4) and records any critical pair whose potential exceeds
    the i - j - 1 ceiling.
    """
    if mode not in (MODE_UNIFORM, MODE_WEIGHTED):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == MODE_WEIGHTED and n > 4:
        raise ValueError("weighted enumeration supported for n <= 4")

    i, j = params.i, params.j
    bound_min_edges = -(-((2 * i + 1) * n + j - i + 1) // (i + 1))
    ceiling = i - j - 1

    graphs = graphs_up_to_iso(n)
    criticals: list[CriticalEntry] = []
    potential_violations: list[CriticalEntry] = []
    sparsity_violations: list[CriticalEntry] = []
    pairs_examined = 0

    for graph in graphs:
        if mode == MODE_UNIFORM:
            cap_space: Iterable[tuple[tuple[int, int], ...]] = [((i, j),) * n]
            D = mapbits = None
        else:
            per_vertex = [
                (c1, c2) for c1 in range(-1, i + 1) for c2 in range(-1, j + 1)
            ]
            cap_space = itertools.product(per_vertex, repeat=n)
            D, mapbits = _defect_tensor(graph)

        for caps in cap_space:
            pairs_examined += 1
            if D is not None and not _has_bad_signing(D, mapbits, caps):
                continue  # colorable for every signing, hence not critical
            if n >= 2 and any(c == (-1, -1) for c in caps):
                continue  # a single such vertex is a non-colorable proper subgraph
            instance = WeightedInstance(graph, params, CapacityFunction(caps))
            verdict = is_critical(instance, Exhaustive(max_edges=15))
            if D is not None and verdict.witness is None:
                raise RuntimeError("prefilter and solver disagree on colorability")
            rho = subset_potential(instance, range(n))
            entry = CriticalEntry(graph.sorted_edges, caps, rho)
            if (
                mode == MODE_UNIFORM
                and in_guaranteed_range(params)
                and verdict.witness is not None
                and sparsity_test(graph, params).sparse
            ):
                sparsity_violations.append(entry)
            if verdict.verdict != CRITICAL:
                continue
            criticals.append(entry)
            if in_guaranteed_range(params) and rho > ceiling:
                potential_violations.append(entry)

    min_edges = min((len(e.edges) for e in criticals), default=None)
    return EnumerationReport(
        params=params,
        n=n,
        mode=mode,
        graphs_examined=len(graphs),
        pairs_examined=pairs_examined,
        criticals=tuple(criticals),
        min_edges=min_edges,
        bound_min_edges=bound_min_edges,
        potential_violations=tuple(potential_violations),
        sparsity_violations=tuple(sparsity_violations),
    )


# ---------------------------------------------------------------------------
# Sharpness suite
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SharpnessEntry:
    i: int
    j: int
    m: int
    counts_ok: bool
    uncolorable: bool
    criticality: str | None
    potential_ok: bool | None = None

    @property
    def ok(self) -> bool:
        return (
            self.counts_ok
            and self.uncolorable
            and self.criticality in (None, CRITICAL)
            and self.potential_ok in (None, True)
        )


@dataclass(frozen=True)
class SharpnessReport:
    entries: tuple[SharpnessEntry, ...]

    @property
    def all_ok(self) -> bool:
        return all(e.ok for e in self.entries)


def verify_sharpness_suite(
    pairs: Iterable[tuple[int, int]],
    ms: Iterable[int],
    criticality: Iterable[tuple[int, int, int]] = (),
    workers: int = 1,
) -> SharpnessReport:
    """For each (i, j) x m: check size identities and that the hard cover
    defeats the solver; optionally certify criticality (reduced strategy)
    for the listed (i, j, m) triples."""
    want_critical = set(criticality)
    entries = []
    ms = tuple(ms)
    for (i, j) in pairs:
        params = DefectParams(i, j)
        for m in ms:
            counts_ok = verify_counts(params, m).all_ok
            instance, spec = flag_path_instance(params, m)
            signing = hard_cover_signing(spec)
            uncolorable = find_coloring(instance, signing) is None
            crit: str | None = None
            potential_ok: bool | None = None
            if (i, j, m) in want_critical:
                verdict = is_critical(instance, Reduced(spec), workers=workers)
                crit = verdict.verdict
                potential_ok = verdict.potential_ok
            entries.append(
                SharpnessEntry(i, j, m, counts_ok, uncolorable, crit, potential_ok)
            )
    return SharpnessReport(tuple(entries))


def sampled_edge_deletion_sweep(
    instance: WeightedInstance,
    count: int,
    seed: int,
    workers: int = 1,
) -> tuple[tuple[Edge, CoverSigning | None], ...]:
    """Run sample_covers on every single-edge deletion of the instance.

    Edge k uses seed + 1 + k, so the sweep is reproducible edge by edge and
    independent of worker count.
    """
    strategy = Sampled(count, seed)
    work = [(instance, strategy, e) for e in instance.graph.sorted_edges]
    if workers > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_check_deleted_edge, work))
    else:
        results = [_check_deleted_edge(item) for item in work]
    return tuple((edge, bad) for edge, bad, _, _ in results)
