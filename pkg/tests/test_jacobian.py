import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graph_iwasawa.algebra import AbelianGroupStructure, cokernel_structure, det, int_matrix
from graph_iwasawa.corpus import random_multigraph, small_multigraphs
from graph_iwasawa.covers import enumerate_trees
from graph_iwasawa.errors import NotConnected
from graph_iwasawa.graph import Graph, bouquet, two_bond_path
from graph_iwasawa.jacobian import (boundary_matrix, edge_jacobian, fundamental_cycles, homology_basis,
                                    jacobian_report, laplacian_matrix, reduced_laplacian, star_matrix,
                                    vertex_jacobian)

SMALL = list(small_multigraphs(4, 5))


def test_laplacian_x_ab():
    a, b = 2, 3
    L = laplacian_matrix(two_bond_path(a, b))
    assert L.tolist() == [[a, -a, 0], [-a, a + b, -b], [0, -b, b]]


def test_laplacian_k4(k4):
    L = laplacian_matrix(k4)
    assert L.tolist() == [[3 if i == j else -1 for j in range(4)] for i in range(4)]


def test_laplacian_single_loop():
    assert laplacian_matrix(bouquet(1)).tolist() == [[0]]


def test_laplacian_disconnected():
    with pytest.raises(NotConnected):
        laplacian_matrix(Graph.from_edges(2, []))


def test_vertex_jacobian_examples(x23, k4):
    assert vertex_jacobian(x23).order == 6
    assert vertex_jacobian(k4) == AbelianGroupStructure(0, (4, 4))
    tree = Graph.from_edges(4, [(0, 1), (1, 2), (1, 3)])
    assert vertex_jacobian(tree).is_trivial


def test_boundary_examples(b2):
    assert boundary_matrix(Graph.from_edges(2, [(0, 1)])).tolist() == [[-1], [1]]
    assert boundary_matrix(b2).tolist() == [[0, 0]]
    assert boundary_matrix(two_bond_path(1, 1)).tolist() == [[-1, 0], [1, -1], [0, 1]]


def test_star_examples(b2):
    assert star_matrix(Graph.from_edges(2, [(0, 1)])).tolist() == [[-1, 1]]
    assert star_matrix(b2).tolist() == [[0], [0]]


@pytest.mark.parametrize("g", SMALL, ids=lambda g: str(g.edges))
def test_d_s_is_laplacian(g):
    assert np.array_equal(boundary_matrix(g).dot(star_matrix(g)), laplacian_matrix(g))


@pytest.mark.parametrize("g", SMALL[::7], ids=lambda g: str(g.edges))
def test_laplacian_columns_sum_to_zero(g):
    assert not any(laplacian_matrix(g).sum(axis=0))


def test_homology_basis_examples(b2):
    tree = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert homology_basis(tree) == []
    H = homology_basis(b2)
    assert len(H) == 2 and abs(det(int_matrix(H))) == 1
    from graph_iwasawa.tower import TowerSpec, build_level
    cover = build_level(TowerSpec(b2, (1, 1), 2, 2), 2).graph
    assert len(homology_basis(cover)) == 5


@pytest.mark.parametrize("g", SMALL[::5], ids=lambda g: str(g.edges))
def test_homology_bases_agree(g):
    """Smith-kernel basis and fundamental cycles span the same lattice."""
    H = homology_basis(g)
    F = fundamental_cycles(g)
    assert len(H) == len(F) == g.num_edges - g.num_vertices + 1
    if H:
        D = boundary_matrix(g)
        assert not np.any(D.dot(int_matrix(F).T))
        both = np.hstack([int_matrix(H).T, int_matrix(F).T])
        # same lattice: adding either set to the other changes nothing
        assert cokernel_structure(both) == cokernel_structure(int_matrix(H).T) == cokernel_structure(int_matrix(F).T)


def test_edge_jacobian_examples(x23, k4):
    assert edge_jacobian(x23).order == 6
    assert edge_jacobian(k4).torsion == (4, 4)
    assert edge_jacobian(Graph.from_edges(3, [(0, 1), (0, 2)])).is_trivial


def test_report_json(k4, x23):
    assert jacobian_report(k4).to_dict() == {"order": "16", "invariant_factors": [4, 4], "vertex_edge_agree": True}
    r = jacobian_report(x23)
    assert r.order == 6 and r.agree


@pytest.mark.parametrize("g", SMALL, ids=lambda g: str(g.edges))
def test_vertex_edge_agree_and_tree_count(g):
    r = jacobian_report(g)
    assert r.agree
    assert r.order == enumerate_trees(g)


@pytest.mark.parametrize("g", SMALL[::3], ids=lambda g: str(g.edges))
def test_sink_independence(g):
    base = vertex_jacobian(g)
    for sink in g.vertices:
        assert vertex_jacobian(g, sink) == base


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_graphs_agree_and_match_matrix_tree(seed):
    g = random_multigraph(random.Random(seed), 7, 14)
    r = jacobian_report(g)
    assert r.agree
    assert r.order == (det(reduced_laplacian(g)) if g.num_vertices > 1 else 1)
