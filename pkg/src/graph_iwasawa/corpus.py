"""Small-graph corpora for exhaustive and randomized checks."""
from __future__ import annotations

import itertools
import random
from typing import Iterator

from .graph import Graph, is_connected


def _canonical(n: int, edges) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        key = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges))
        if best is None or key < best:
            best = key
    return best


def small_multigraphs(max_vertices: int, max_edges: int, loops: bool = True,
                      min_vertices: int = 1) -> Iterator[Graph]:
    """Connected multigraphs up to isomorphism, loops allowed by default.

    Each edge ``(a, b)`` is listed with ``a <= b``; that fixes the orientation.
    """
    for n in range(min_vertices, max_vertices + 1):
        slots = [(a, b) for a in range(n) for b in range(a, n) if loops or a != b]
        seen = set()
        for m in range(max(n - 1, 0), max_edges + 1):
            for edges in itertools.combinations_with_replacement(slots, m):
                g = Graph.from_edges(n, edges)
                if not is_connected(g):
                    continue
                key = _canonical(n, edges)
                if key in seen:
                    continue
                seen.add(key)
                yield Graph.from_edges(n, key)


def random_multigraph(rng: random.Random, max_vertices: int, max_edges: int,
                      loops: bool = True) -> Graph:
    """A random connected multigraph: a random tree plus random extra edges."""
    n = rng.randint(1, max_vertices)
    edges = [(rng.randrange(v), v) for v in range(1, n)]
    extra = rng.randint(0, max(0, max_edges - len(edges)))
    for _ in range(extra):
        a, b = rng.randrange(n), rng.randrange(n)
        if a == b and not loops:
            continue
        edges.append((a, b))
    rng.shuffle(edges)
    perm = list(range(n))
    rng.shuffle(perm)
    return Graph.from_edges(n, [(perm[a], perm[b]) for a, b in edges])


def voltage_patterns(g: Graph, values=(0, 1, 2)) -> Iterator[tuple[int, ...]]:
    return itertools.product(values, repeat=g.num_edges)


def tower_corpus(max_vertices: int = 3, max_edges: int = 4, values=(0, 1, 2), primes=(2, 3)):
    """Every (base, voltages, p) with a connected tower.

    Yields ``(graph, voltages, p)``.
    """
    from .covers import VoltageAssignment, connectivity_criterion

    for g in small_multigraphs(max_vertices, max_edges):
        for volts in voltage_patterns(g, values):
            va = VoltageAssignment(g, volts)
            for p in primes:
                if connectivity_criterion(va, p) == 0:
                    yield g, volts, p
