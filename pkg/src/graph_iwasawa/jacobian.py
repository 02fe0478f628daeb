"""Vertex and edge Jacobians of a graph, and the maps d, s and the Laplacian.

Loops are invisible here: a loop has zero boundary and zero star, so it is
also left out of the vertex degrees. This keeps ``d @ s`` equal to the
Laplacian on the nose.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AbelianGroupStructure, cokernel_structure, kernel_basis, zeros
from .graph import Graph, _require_connected


def boundary_matrix(g: Graph) -> np.ndarray:
    """``d``: column ``e`` is ``t(e) - o(e)`` in the vertex basis."""
    D = zeros(g.num_vertices, g.num_edges)
    for k, (o, t) in enumerate(g.edges):
        D[t, k] += 1
        D[o, k] -= 1
    return D


def star_matrix(g: Graph) -> np.ndarray:
    """``s``: column ``v`` is the incoming minus the outgoing positive edges at ``v``."""
    S = zeros(g.num_edges, g.num_vertices)
    for k, (o, t) in enumerate(g.edges):
        S[k, t] += 1
        S[k, o] -= 1
    return S


def laplacian_matrix(g: Graph) -> np.ndarray:
    _require_connected(g)
    L = zeros(g.num_vertices, g.num_vertices)
    for o, t in g.edges:
        if o == t:
            continue
        L[o, o] += 1
        L[t, t] += 1
        L[o, t] -= 1
        L[t, o] -= 1
    return L


def reduced_laplacian(g: Graph, sink: int = 0) -> np.ndarray:
    L = laplacian_matrix(g)
    keep = [v for v in g.vertices if v != sink]
    return L[np.ix_(keep, keep)]


def vertex_jacobian(g: Graph, sink: int = 0) -> AbelianGroupStructure:
    """``Div^0 / Pr`` as the cokernel of the reduced Laplacian.

    Deleting the sink row identifies ``Div^0`` with the free group on the
    other vertices; deleting the sink column drops a redundant generator of
    ``Pr``, since the Laplacian columns sum to zero.
    """
    if g.num_vertices == 0:
        return AbelianGroupStructure()
    return cokernel_structure(reduced_laplacian(g, sink))


def homology_basis(g: Graph) -> list[list[int]]:
    """A Z-basis of ``H_1 = ker d`` as edge chains."""
    _require_connected(g)
    K = kernel_basis(boundary_matrix(g))
    return [[int(x) for x in K[:, j]] for j in range(K.shape[1])]


def fundamental_cycles(g: Graph) -> list[list[int]]:
    """Cycle basis from the breadth-first spanning tree, one per cotree edge."""
    from .graph import _bfs

    _require_connected(g)
    parent, _ = _bfs(g, 0)
    tree = {g.edge_of(parent[v]) for v in g.vertices if parent[v] not in (None, -1)}

    def to_root(v):
        chain = [0] * g.num_edges
        while parent[v] != -1:
            d = parent[v]
            chain[g.edge_of(d)] += g.sign_of(d)
            v = g.origin[d]
        return chain

    cycles = []
    for k, (o, t) in enumerate(g.edges):
        if k in tree:
            continue
        # root -> o, then e, then t -> root
        a, b = to_root(o), to_root(t)
        c = [x - y for x, y in zip(a, b)]
        c[k] += 1
        cycles.append(c)
    return cycles


def edge_jacobian(g: Graph) -> AbelianGroupStructure:
    """``Z E+ / (H_1 + S)`` from one matrix ``[H_1 basis | star columns]``."""
    _require_connected(g)
    H = kernel_basis(boundary_matrix(g))
    S = star_matrix(g)
    return cokernel_structure(np.hstack([H, S]))


@dataclass(frozen=True)
class JacobianReport:
    vertex: AbelianGroupStructure
    edge: AbelianGroupStructure

    @property
    def agree(self) -> bool:
        return self.vertex == self.edge

    @property
    def order(self) -> int:
        return self.vertex.order

    def to_dict(self) -> dict:
        return {
            "order": str(self.order),
            "invariant_factors": list(self.vertex.torsion),
            "vertex_edge_agree": self.agree,
        }


def jacobian_report(g: Graph) -> JacobianReport:
    return JacobianReport(vertex_jacobian(g), edge_jacobian(g))
