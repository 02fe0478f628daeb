import itertools
import math

import pytest

from graph_iwasawa.algebra import AbelianGroupStructure
from graph_iwasawa.corpus import small_multigraphs
from graph_iwasawa.covers import (VoltageAssignment, connectivity_criterion, count_lifted_trees, derive,
                                  enumerate_trees, galois_action, holonomies, intermediate_cover,
                                  pushforward_cokernel)
from graph_iwasawa.errors import NotACover, TooLarge
from graph_iwasawa.graph import (Graph, GraphMorphism, bouquet, check_covering, complete_graph, two_bond_path, validate)
from graph_iwasawa.jacobian import homology_basis, jacobian_report

B2_Z4_TABLE = {  # (edge, g): (origin, target) with vertices numbered by g
    (0, 0): (0, 1), (0, 1): (1, 2), (0, 2): (2, 3), (0, 3): (3, 0),
    (1, 0): (0, 1), (1, 1): (1, 2), (1, 2): (2, 3), (1, 3): (3, 0),
}
B2_Z2_TABLE = {(0, 0): (0, 1), (0, 1): (1, 0), (1, 0): (0, 1), (1, 1): (1, 0)}


@pytest.fixture
def b2_z4(b2):
    return VoltageAssignment(b2, (1, 1))


def _table(d):
    return {d.edge_label(k): e for k, e in enumerate(d.graph.edges)}


def test_derive_trivial_group(k4):
    d = derive(VoltageAssignment(k4, (1, 2, 3, 0, 0, 5)), 1)
    assert d.graph.edges == k4.edges
    assert check_covering(d.projection)


def test_derive_b2_z4_matches_table(b2_z4):
    d = derive(b2_z4, 4)
    assert d.graph.num_vertices == 4 and d.graph.num_edges == 8
    assert _table(d) == B2_Z4_TABLE
    assert validate(d.graph) == []
    assert d.connected and check_covering(d.projection)


def test_derive_b2_z2_intermediate(b2_z4):
    d = derive(b2_z4, 2)
    assert _table(d) == B2_Z2_TABLE


def test_derive_labels(b2_z4):
    d = derive(b2_z4, 4)
    assert d.graph.vertex_labels[1] == "*@1"
    assert d.graph.edge_labels[5] == "e1@1"


@pytest.mark.parametrize("m", [1, 2, 3, 4, 6])
def test_derive_fibers(m):
    va = VoltageAssignment(two_bond_path(2, 2), (1, 0, 2, 1))
    d = derive(va, m)
    assert d.graph.num_vertices == m * 3
    assert d.graph.num_edges == m * 4
    phi = d.projection
    assert phi.is_morphism and phi.oriented
    for v in range(3):
        assert phi.vertex_map.count(v) == m
    assert check_covering(phi) == d.connected or not d.connected


def test_galois_action_identity(b2_z4):
    d = derive(b2_z4, 4)
    a = galois_action(d, 0)
    assert a == GraphMorphism.identity(d.graph)


def test_galois_action_rotates_vertices(b2_z4):
    d = derive(b2_z4, 4)
    assert galois_action(d, 1).vertex_map == (1, 2, 3, 0)


def test_galois_action_is_a_free_group_action(b2_z4):
    d = derive(b2_z4, 4)
    proj = d.projection
    for h, h2 in itertools.product(range(4), repeat=2):
        a, b = galois_action(d, h), galois_action(d, h2)
        assert a.compose(b) == galois_action(d, h + h2)
    for h in range(4):
        a = galois_action(d, h)
        assert a.is_morphism and a.compose(proj).vertex_map == proj.vertex_map
        if h:
            assert all(a.vertex_map[x] != x for x in range(4))


def test_intermediate_cover(b2_z4):
    lower, phi = intermediate_cover(b2_z4, 4, 2)
    assert _table(lower) == B2_Z2_TABLE
    assert check_covering(phi)
    assert phi.vertex_map == (0, 1, 0, 1)
    same, iso = intermediate_cover(b2_z4, 4, 4)
    assert iso == GraphMorphism.identity(same.graph)
    base, proj = intermediate_cover(b2_z4, 4, 1)
    assert base.graph.edges == b2_z4.base.edges
    assert proj.vertex_map == derive(b2_z4, 4).projection.vertex_map
    with pytest.raises(ValueError):
        intermediate_cover(b2_z4, 4, 3)


def test_cover_homology_rank(b2_z4):
    assert len(homology_basis(derive(b2_z4, 4).graph)) == 5


def test_pushforward_cokernel_examples(b2_z4, k4):
    assert pushforward_cokernel(GraphMorphism.identity(k4)).is_trivial
    assert pushforward_cokernel(derive(b2_z4, 4).projection) == AbelianGroupStructure(0, (4,))
    lower, _ = intermediate_cover(b2_z4, 4, 2)
    assert pushforward_cokernel(lower.projection) == AbelianGroupStructure(0, (2,))
    _, phi = intermediate_cover(b2_z4, 4, 2)
    assert pushforward_cokernel(phi) == AbelianGroupStructure(0, (2,))
    assert pushforward_cokernel(derive(b2_z4, 4).projection, p=3).is_trivial


def test_pushforward_rejects_non_covers():
    x21, x11 = two_bond_path(2, 1), two_bond_path(1, 1)
    dmap = [0, 1, 0, 1, 2, 3]
    with pytest.raises(NotACover):
        pushforward_cokernel(GraphMorphism(x21, x11, (0, 1, 2), tuple(dmap)))


CORPUS = list(small_multigraphs(3, 4))


@pytest.mark.parametrize("g", CORPUS, ids=lambda g: str(g.edges))
def test_galois_group_is_the_voltage_group(g):
    """coker(pi_*) has the covering degree as order for connected derived graphs."""
    for volts in itertools.islice(itertools.product(range(3), repeat=g.num_edges), 0, None, 5):
        va = VoltageAssignment(g, volts)
        for m in (2, 3, 4):
            d = derive(va, m)
            if d.connected:
                assert pushforward_cokernel(d.projection) == AbelianGroupStructure(0, (m,))


def test_connectivity_criterion_examples():
    assert connectivity_criterion(VoltageAssignment(bouquet(2), (1, 1)), 2) == 0
    assert connectivity_criterion(VoltageAssignment(bouquet(1), (2,)), 2) == 1
    tree = two_bond_path(1, 1)
    assert connectivity_criterion(VoltageAssignment(tree, (1, 1)), 2) == math.inf
    assert not derive(VoltageAssignment(bouquet(1), (2,)), 2).connected


@pytest.mark.parametrize("g", CORPUS, ids=lambda g: str(g.edges))
@pytest.mark.parametrize("p", [2, 3])
def test_connectivity_criterion_matches_search(g, p):
    for volts in itertools.product(range(4), repeat=g.num_edges):
        va = VoltageAssignment(g, volts)
        u = connectivity_criterion(va, p)
        for n in range(1, 5 if p == 2 else 4):
            assert derive(va, p ** n).connected == (u == 0)


def test_holonomy_of_bouquet_is_voltages():
    assert holonomies(VoltageAssignment(bouquet(3), (1, 4, -2))) == [1, 4, -2]


@pytest.mark.parametrize("a,b", [(2, 3), (1, 1), (3, 4)])
def test_enumerate_trees_x_ab(a, b):
    assert enumerate_trees(two_bond_path(a, b)) == a * b


def test_enumerate_trees_k4_and_trees(k4):
    count, trees = enumerate_trees(k4, listing=True)
    assert count == 16 == len(set(trees))
    assert enumerate_trees(Graph.from_edges(4, [(0, 1), (0, 2), (2, 3)])) == 1
    assert enumerate_trees(Graph.from_edges(1, [])) == 1


def test_enumerate_trees_cap():
    with pytest.raises(TooLarge):
        enumerate_trees(complete_graph(8))
    assert enumerate_trees(complete_graph(5), max_edges=10) == 125


def test_count_lifted_trees_examples(k4, b2_z4):
    assert count_lifted_trees(GraphMorphism.identity(k4)) == 16
    assert count_lifted_trees(derive(b2_z4, 4).projection) == 4
    # a tree has no connected cover; the disconnected double cover still lifts twice
    d = derive(VoltageAssignment(two_bond_path(1, 1), (1, 0)), 2)
    assert not d.connected
    assert count_lifted_trees(d.projection) == 2


@pytest.mark.parametrize("g", CORPUS[::3], ids=lambda g: str(g.edges))
def test_lifted_trees_cardinality(g):
    kappa = enumerate_trees(g)
    for volts in itertools.islice(itertools.product(range(3), repeat=g.num_edges), 0, None, 4):
        for m in (2, 3):
            d = derive(VoltageAssignment(g, volts), m)
            if d.connected:
                assert count_lifted_trees(d.projection) == kappa * m
                assert jacobian_report(g).order == kappa
