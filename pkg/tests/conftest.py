"""Shared graph builders and seeded instance generators."""

from __future__ import annotations

import random

from dpdefect import (
    CapacityFunction,
    CoverSigning,
    DefectParams,
    SimpleGraph,
    WeightedInstance,
)


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, [(k, k + 1) for k in range(n - 1)])


def cycle_graph(n: int) -> SimpleGraph:
    edges = [(k, k + 1) for k in range(n - 1)] + [(0, n - 1)]
    return SimpleGraph.from_edges(n, edges)


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(
        n, [(u, v) for u in range(n) for v in range(u + 1, n)]
    )


def k2() -> SimpleGraph:
    return SimpleGraph.from_edges(2, [(0, 1)])


def random_graph(rng: random.Random, n: int, p: float) -> SimpleGraph:
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    return SimpleGraph.from_edges(n, edges)


def random_caps(rng: random.Random, n: int, params: DefectParams) -> CapacityFunction:
    return CapacityFunction(
        tuple(
            (rng.randint(-1, params.i), rng.randint(-1, params.j))
            for _ in range(n)
        )
    )


def random_instance(
    rng: random.Random,
    max_n: int = 6,
    p: float | None = None,
    params: DefectParams | None = None,
) -> WeightedInstance:
    n = rng.randint(1, max_n)
    if params is None:
        i = rng.randint(0, 2)
        params = DefectParams(i, rng.randint(i, i + 3))
    graph = random_graph(rng, n, p if p is not None else rng.choice([0.3, 0.5, 0.7]))
    return WeightedInstance(graph, params, random_caps(rng, n, params))


def random_signing(rng: random.Random, graph: SimpleGraph) -> CoverSigning:
    m = len(graph.sorted_edges)
    bits = rng.getrandbits(m) if m else 0
    return CoverSigning.from_bits(graph, bits)
