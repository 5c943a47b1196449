"""Seeded random connected loop-free labeled multigraphs."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .graph_model import LabeledGraph


@dataclass(frozen=True)
class Bounds:
    max_vertices: int = 10
    max_edges: int = 15
    max_genus: int = 4

    def __post_init__(self):
        if self.max_vertices < 2 or self.max_edges < 1 or self.max_genus < 0:
            raise ValueError("bounds must allow at least 2 vertices and 1 edge")


def random_graph(seed: int, bounds: Bounds = Bounds(), heights: bool = False) -> LabeledGraph:
    """Random spanning tree plus extra non-loop edges (parallel edges allowed).

    With ``heights=True`` vertices also get small integer heights that are
    injective on edges but usually repeat across non-adjacent vertices.
    """
    rng = random.Random(seed)
    n = rng.randint(2, min(bounds.max_vertices, bounds.max_edges + 1))
    m = rng.randint(n - 1, bounds.max_edges)
    labels = [f"v{i}" for i in range(n)]
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = [(perm[i], perm[rng.randrange(i)]) for i in range(1, n)]
    while len(pairs) < m:
        u, v = rng.sample(range(n), 2)
        pairs.append((u, v))
    rng.shuffle(pairs)
    triples = [(labels[u], labels[v], rng.randint(0, bounds.max_genus)) for u, v in pairs]

    hs = None
    if heights:
        top = max(1, n // 2)
        for _ in range(100):
            cand = {lab: rng.randint(0, top) for lab in labels}
            if all(cand[u] != cand[v] for u, v, _ in triples):
                hs = cand
                break
        else:
            hs = {lab: i for i, lab in enumerate(labels)}

    g = LabeledGraph.from_edges(triples, heights=hs)
    # declaration order v0, v1, ... regardless of edge order
    order = {lab: i for i, lab in enumerate(labels)}
    return LabeledGraph(tuple(sorted(g.vertices, key=lambda vx: order[vx.id])), g.edges)
