"""Voltage assignments, derived graphs and their covering maps.

The group is always the cyclic group ``Z/m`` with canonical representatives
``0 .. m-1``. In a derived graph the vertex ``(v, g)`` has id ``v*m + g`` and
the edge ``(e, g)`` has id ``e*m + g``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import AbelianGroupStructure, cokernel_structure, int_matrix, p_part, valuation
from .errors import NotACover, TooLarge
from .graph import (Graph, GraphMorphism, check_covering, components, covering_degree,
                    is_connected, spanning_tree, _bfs, _require_connected)
from .jacobian import fundamental_cycles

DEFAULT_MAX_ENUM_EDGES = 24


@dataclass(frozen=True)
class VoltageAssignment:
    """Integer voltage on each positively oriented edge of ``base``.

    The reversed dart carries the negated voltage. ``modulus`` 0 means the
    values are representatives of elements of Z_p, read mod p^n at level n.
    """

    base: Graph
    voltages: tuple[int, ...]
    modulus: int = 0

    def __post_init__(self):
        object.__setattr__(self, "voltages", tuple(int(a) for a in self.voltages))
        if len(self.voltages) != self.base.num_edges:
            raise ValueError(f"{len(self.voltages)} voltages for {self.base.num_edges} edges")
        if self.modulus < 0:
            raise ValueError("modulus must be nonnegative")

    def dart_voltage(self, dart: int) -> int:
        g = self.base
        return g.sign_of(dart) * self.voltages[g.edge_of(dart)]

    def reduced(self, m: int) -> "VoltageAssignment":
        return VoltageAssignment(self.base, tuple(a % m for a in self.voltages), m)


@dataclass(frozen=True)
class DerivedGraph:
    graph: Graph
    base: Graph
    modulus: int
    voltages: tuple[int, ...]

    @property
    def connected(self) -> bool:
        return is_connected(self.graph)

    def vertex(self, v: int, g: int) -> int:
        return v * self.modulus + g % self.modulus

    def edge(self, e: int, g: int) -> int:
        return e * self.modulus + g % self.modulus

    def vertex_label(self, x: int) -> tuple[int, int]:
        return divmod(x, self.modulus)

    def edge_label(self, x: int) -> tuple[int, int]:
        return divmod(x, self.modulus)

    @property
    def projection(self) -> GraphMorphism:
        """``(v, g) -> v`` and ``(e, g) -> e``."""
        m, base = self.modulus, self.base
        vmap = tuple(x // m for x in range(self.graph.num_vertices))
        dmap = []
        for k in range(self.graph.num_edges):
            d = base.positive[k // m]
            dmap += [d, base.involution[d]]
        return GraphMorphism(self.graph, base, vmap, tuple(dmap))


def derive(voltage: VoltageAssignment, m: int) -> DerivedGraph:
    """Derived graph of ``voltage`` read in ``Z/m``.

    ``(e, g)`` runs from ``(o(e), g)`` to ``(t(e), g + a(e))``.
    """
    if m < 1:
        raise ValueError("modulus must be at least 1")
    base = voltage.base
    volts = tuple(a % m for a in voltage.voltages)
    edges, vlabels, elabels = [], [], []
    for v in base.vertices:
        for g in range(m):
            vlabels.append(f"{base.vertex_labels[v]}@{g}")
    for k, (o, t) in enumerate(base.edges):
        for g in range(m):
            edges.append((o * m + g, t * m + (g + volts[k]) % m))
            elabels.append(f"{base.edge_labels[k]}@{g}")
    graph = Graph.from_edges(base.num_vertices * m, edges, vlabels, elabels)
    return DerivedGraph(graph, base, m, volts)


def galois_action(d: DerivedGraph, h: int) -> GraphMorphism:
    """Deck transformation ``(v, g) -> (v, g + h)``, ``(e, g) -> (e, g + h)``."""
    vmap = tuple(d.vertex(*_shift(d.vertex_label(x), h)) for x in range(d.graph.num_vertices))
    dmap = []
    for k in range(d.graph.num_edges):
        kk = d.edge(*_shift(d.edge_label(k), h))
        dmap += [2 * kk, 2 * kk + 1]
    return GraphMorphism(d.graph, d.graph, vmap, tuple(dmap))


def _shift(label, h):
    a, g = label
    return a, g + h


def intermediate_cover(voltage: VoltageAssignment, m: int, m_prime: int):
    """Reduction ``Z/m -> Z/m'`` applied to the second coordinate.

    Returns ``(lower, phi)`` where ``lower`` is the derived graph mod ``m'``
    and ``phi`` maps ``derive(voltage, m)`` onto it.
    """
    if m % m_prime:
        raise ValueError(f"{m_prime} does not divide {m}")
    upper = derive(voltage, m)
    lower = derive(voltage, m_prime)
    vmap = []
    for x in range(upper.graph.num_vertices):
        v, g = upper.vertex_label(x)
        vmap.append(lower.vertex(v, g))
    dmap = []
    for k in range(upper.graph.num_edges):
        e, g = upper.edge_label(k)
        kk = lower.edge(e, g)
        dmap += [2 * kk, 2 * kk + 1]
    return lower, GraphMorphism(upper.graph, lower.graph, tuple(vmap), tuple(dmap))


def pushforward_matrix(phi: GraphMorphism) -> np.ndarray:
    """``pi_*`` on edge chains, |E+ target| x |E+ source|."""
    X, Y = phi.source, phi.target
    P = np.zeros((Y.num_edges, X.num_edges), dtype=object)
    for k, d in enumerate(X.positive):
        e = phi.dart_map[d]
        P[Y.edge_of(e), k] += Y.sign_of(e)
    return P


def pushforward_cokernel(phi: GraphMorphism, p: int | None = None) -> AbelianGroupStructure:
    """Structure of ``H_1(X) / pi_* H_1(X~)``.

    ``Z E+ / H_1(X)`` is free of rank ``|E+| - rank H_1``, so the quotient we
    want differs from ``Z E+ / pi_* H_1(X~)`` only by that much free rank.
    """
    if not check_covering(phi) or not is_connected(phi.source) or not is_connected(phi.target):
        raise NotACover("morphism is not a covering map of connected graphs")
    X, Y = phi.source, phi.target
    Hx = fundamental_cycles(X)
    rank_h_base = Y.num_edges - Y.num_vertices + 1
    if Hx:
        B = int_matrix(Hx).T
        image = pushforward_matrix(phi).dot(B)
    else:
        image = np.zeros((Y.num_edges, 0), dtype=object)
    coker = cokernel_structure(image)
    out = AbelianGroupStructure(coker.free_rank - (Y.num_edges - rank_h_base), coker.torsion)
    return p_part(out, p, keep_free=True) if p is not None else out


def holonomies(voltage: VoltageAssignment) -> list[int]:
    """Net voltage around the fundamental cycle of each cotree edge.

    The tree is the breadth-first spanning tree rooted at vertex 0.
    """
    g = voltage.base
    _require_connected(g)
    parent, order = _bfs(g, 0)
    pot = [0] * g.num_vertices
    for v in order[1:]:
        d = parent[v]
        pot[v] = pot[g.origin[d]] + voltage.dart_voltage(d)
    tree = set(spanning_tree(g))
    return [pot[o] + voltage.voltages[k] - pot[t]
            for k, (o, t) in enumerate(g.edges) if k not in tree]


def connectivity_criterion(voltage: VoltageAssignment, p: int) -> float | int:
    """Smallest p-adic valuation of a holonomy (``math.inf`` if none is nonzero).

    The derived graph mod ``p**n``, ``n >= 1``, is connected exactly when this
    is 0.
    """
    return min((valuation(h, p) for h in holonomies(voltage)), default=math.inf)


# ---------------------------------------------------------------------------
# Spanning trees
# ---------------------------------------------------------------------------

def _iter_trees(g: Graph):
    """Yield each spanning tree as a sorted tuple of edge ids."""
    n = g.num_vertices
    need = n - 1
    edges = [(k, o, t) for k, (o, t) in enumerate(g.edges) if o != t]
    label = list(range(n))

    def find(x, lab):
        while lab[x] != x:
            x = lab[x]
        return x

    chosen: list[int] = []

    def rec(i, lab):
        if len(chosen) == need:
            yield tuple(chosen)
            return
        if len(edges) - i < need - len(chosen):
            return
        k, o, t = edges[i]
        ro, rt = find(o, lab), find(t, lab)
        if ro != rt:
            lab2 = list(lab)
            lab2[ro] = rt
            chosen.append(k)
            yield from rec(i + 1, lab2)
            chosen.pop()
        yield from rec(i + 1, lab)

    if n == 0:
        return
    yield from rec(0, label)


def enumerate_trees(g: Graph, max_edges: int = DEFAULT_MAX_ENUM_EDGES, listing: bool = False):
    """Count spanning trees by exhaustive search over acyclic edge subsets.

    Returns the count, or ``(count, trees)`` when ``listing`` is set.
    """
    _require_connected(g)
    if g.num_edges > max_edges:
        raise TooLarge(f"{g.num_edges} edges exceeds the enumeration cap {max_edges}; "
                       "use the determinant of the reduced Laplacian instead")
    trees = list(_iter_trees(g)) if listing else None
    count = len(trees) if listing else sum(1 for _ in _iter_trees(g))
    return (count, trees) if listing else count


def count_lifted_trees(phi: GraphMorphism, max_edges: int = DEFAULT_MAX_ENUM_EDGES) -> int:
    """Number of distinct lifts of base spanning trees to subtrees of the cover.

    A tree lifts uniquely once the lift of its root (vertex 0) is fixed, by
    following the local dart bijection outward from the root.
    """
    if not check_covering(phi):
        raise NotACover("morphism is not a covering map")
    X, Y = phi.source, phi.target
    step = {}
    for x in X.vertices:
        for d in X.out_darts(x):
            step[x, phi.dart_map[d]] = d
    tree_list = enumerate_trees(Y, max_edges, listing=True)[1]
    fiber = [x for x in X.vertices if phi.vertex_map[x] == 0]
    seen = set()
    for tree in tree_list:
        tree_darts = set()
        for k in tree:
            d = Y.positive[k]
            tree_darts |= {d, Y.involution[d]}
        for root in fiber:
            verts, lifted = {root}, set()
            frontier = [root]
            while frontier:
                x = frontier.pop()
                for d in Y.out_darts(phi.vertex_map[x]):
                    if d not in tree_darts:
                        continue
                    dd = step[x, d]
                    y = X.target[dd]
                    if y in verts:
                        continue
                    verts.add(y)
                    lifted.add(X.edge_of(dd))
                    frontier.append(y)
            seen.add((frozenset(verts), frozenset(lifted)))
    return len(seen)


def components_of(d: DerivedGraph) -> list[list[int]]:
    return components(d.graph)


def degree(phi: GraphMorphism) -> int:
    return covering_degree(phi)
