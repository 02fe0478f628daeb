import itertools
import json

import pytest

from graph_iwasawa.covers import VoltageAssignment, derive
from graph_iwasawa.errors import NotConnected
from graph_iwasawa.graph import (Graph, GraphMorphism, Path, check_covering, components,
                                 covering_degree, find_path, graph_from_dict, graph_to_dict, is_connected,
                                 spanning_tree, two_bond_path, validate, GraphFormatError, bouquet)
from graph_iwasawa.jacobian import boundary_matrix


def test_validate_single_vertex():
    assert validate(Graph.from_edges(1, [])) == []


def test_validate_fixed_dart():
    g = Graph(1, origin=(0,), target=(0,), involution=(0,), positive=(0,))
    problems = validate(g)
    assert len(problems) == 1
    assert "dart 0" in problems[0] and "fixed" in problems[0]


def test_validate_k4(k4):
    assert validate(k4) == []
    assert k4.num_edges == 6


def test_validate_bad_endpoints_and_orientation():
    g = Graph(2, origin=(0, 0), target=(1, 0), involution=(1, 0), positive=(0,))
    assert any("swap" in s for s in validate(g))
    g = Graph(2, origin=(0, 1), target=(1, 0), involution=(1, 0), positive=(0, 1))
    assert any("both darts" in s for s in validate(g))


def test_dart_counts(k4, x23, b2):
    for g in (k4, x23, b2):
        assert g.num_darts % 2 == 0
        assert g.num_edges == g.num_darts // 2


def test_is_connected_examples(x23):
    assert is_connected(Graph.from_edges(1, []))
    assert not is_connected(Graph.from_edges(2, []))
    assert is_connected(x23)


def _is_spanning_tree(g, tree):
    if len(tree) != g.num_vertices - 1:
        return False
    sub = Graph.from_edges(g.num_vertices, [g.edges[k] for k in tree])
    return is_connected(sub)


def test_spanning_tree_examples(k4):
    assert spanning_tree(Graph.from_edges(1, [])) == []
    assert spanning_tree(two_bond_path(1, 1)) == [0, 1]
    t = spanning_tree(k4)
    assert _is_spanning_tree(k4, t)
    all_trees = [c for c in itertools.combinations(range(6), 3) if _is_spanning_tree(k4, c)]
    assert tuple(t) in all_trees


def test_spanning_tree_disconnected():
    with pytest.raises(NotConnected):
        spanning_tree(Graph.from_edges(3, [(0, 1)]))


def test_find_path_examples():
    g = two_bond_path(1, 1)
    assert find_path(g, 0, 0) == Path(0, ())
    p = find_path(g, 0, 2)
    assert len(p) == 2 and p.is_valid(g) and p.end(g) == 2
    level = derive(VoltageAssignment(bouquet(2), (1, 1)), 2)
    q = find_path(level.graph, 0, 1)
    assert q.darts == (0,)


def test_find_path_closed_walk_has_zero_boundary(k4):
    for a, b in itertools.product(range(4), repeat=2):
        p = find_path(k4, a, b)
        walk = Path(a, p.darts + p.reversed(k4).darts)
        assert walk.is_valid(k4) and walk.end(k4) == a
        assert not any(boundary_matrix(k4).dot(walk.edge_chain(k4)))


def test_find_path_disconnected():
    with pytest.raises(NotConnected):
        find_path(Graph.from_edges(2, []), 0, 1)


def test_check_covering_identity(k4):
    assert check_covering(GraphMorphism.identity(k4))


def test_check_covering_bouquet_cover(b2):
    d = derive(VoltageAssignment(b2, (1, 1)), 4)
    assert check_covering(d.projection)
    assert covering_degree(d.projection) == 4


def test_check_covering_collapsing_parallel_edges():
    x21, x11 = two_bond_path(2, 1), two_bond_path(1, 1)
    # e1, e2 -> f ; e1' -> f'
    dmap = []
    for k in (0, 0, 1):
        dmap += [2 * k, 2 * k + 1]
    phi = GraphMorphism(x21, x11, (0, 1, 2), tuple(dmap))
    assert phi.is_morphism
    assert not check_covering(phi)


def test_morphism_violations():
    g = two_bond_path(1, 1)
    bad = GraphMorphism(g, g, (0, 1, 2), (1, 0, 2, 3))
    assert bad.violations()
    assert not check_covering(bad)


def test_covering_has_constant_fibers():
    va = VoltageAssignment(two_bond_path(2, 1), (0, 1, 0))
    for m in (1, 2, 3, 4):
        d = derive(va, m)
        if d.connected:
            assert check_covering(d.projection)
            phi = d.projection
            for x in range(phi.target.num_darts):
                assert sum(1 for y in phi.dart_map if y == x) == m


def test_json_round_trip(k4):
    data = graph_to_dict(k4, [1, 0, 0, 0, 0, 2])
    g, volts = graph_from_dict(json.loads(json.dumps(data)))
    assert g.edges == k4.edges
    assert volts == [1, 0, 0, 0, 0, 2]
    assert validate(g) == []


@pytest.mark.parametrize("data, fragment", [
    ({"edges": []}, "vertices"),
    ({"vertices": ["a"], "edges": [{"from": "a"}]}, "'to'"),
    ({"vertices": ["a"], "edges": [{"from": "a", "to": "b"}]}, "unknown vertex"),
    ({"vertices": ["a"], "edges": [{"from": "a", "to": "a", "voltage": "1"}]}, "integer"),
    ({"vertices": ["a", "a"], "edges": []}, "duplicate"),
])
def test_json_errors(data, fragment):
    with pytest.raises(GraphFormatError, match=fragment):
        graph_from_dict(data)


def test_components_ordering():
    g = Graph.from_edges(4, [(2, 3), (0, 1)])
    assert components(g) == [[0, 1], [2, 3]]
