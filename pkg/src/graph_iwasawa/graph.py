"""Finite multigraphs as dart structures.

A graph stores its directed edges ("darts") explicitly: origin, terminus and
the reversal involution. Undirected edge ``k`` built with :meth:`Graph.from_edges`
owns darts ``2k`` (positively oriented) and ``2k + 1``; vertex and edge ids are
dense integers in input order, and every deterministic choice below refers to
that order.

Loops are allowed. Both darts of a loop leave its vertex, so a loop counts
twice in the outgoing star used by :func:`check_covering`.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .errors import NotConnected


@dataclass(frozen=True)
class Graph:
    """Graph ``(V, darts, o, t, iota)`` with an orientation ``E+``.

    ``positive[k]`` is the positively oriented dart of edge ``k``.
    """

    num_vertices: int
    origin: tuple[int, ...]
    target: tuple[int, ...]
    involution: tuple[int, ...]
    positive: tuple[int, ...]
    vertex_labels: tuple[str, ...] = ()
    edge_labels: tuple[str, ...] = ()
    _edge_of: tuple[int, ...] = field(default=(), repr=False, compare=False)
    _sign_of: tuple[int, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        for name in ("origin", "target", "involution", "positive", "vertex_labels", "edge_labels"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.vertex_labels:
            object.__setattr__(self, "vertex_labels", tuple(f"v{i}" for i in range(self.num_vertices)))
        if not self.edge_labels:
            object.__setattr__(self, "edge_labels", tuple(f"e{k}" for k in range(len(self.positive))))
        edge_of = [-1] * len(self.origin)
        sign_of = [0] * len(self.origin)
        for k, d in enumerate(self.positive):
            if 0 <= d < len(self.origin):
                edge_of[d], sign_of[d] = k, 1
                r = self.involution[d]
                if 0 <= r < len(self.origin) and r != d:
                    edge_of[r], sign_of[r] = k, -1
        object.__setattr__(self, "_edge_of", tuple(edge_of))
        object.__setattr__(self, "_sign_of", tuple(sign_of))

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Sequence[tuple[int, int]],
                   vertex_labels: Sequence[str] = (), edge_labels: Sequence[str] = ()) -> "Graph":
        origin, target, inv = [], [], []
        for k, (a, b) in enumerate(edges):
            origin += [a, b]
            target += [b, a]
            inv += [2 * k + 1, 2 * k]
        return cls(num_vertices, origin, target, inv, tuple(range(0, 2 * len(edges), 2)),
                   tuple(vertex_labels), tuple(edge_labels))

    # -- basic accessors ---------------------------------------------------

    @property
    def num_darts(self) -> int:
        return len(self.origin)

    @property
    def num_edges(self) -> int:
        return len(self.positive)

    @property
    def vertices(self) -> range:
        return range(self.num_vertices)

    @property
    def edges(self) -> list[tuple[int, int]]:
        """``(o(e), t(e))`` for each positively oriented edge, in order."""
        return [(self.origin[d], self.target[d]) for d in self.positive]

    def edge_of(self, dart: int) -> int:
        return self._edge_of[dart]

    def sign_of(self, dart: int) -> int:
        """+1 for a positively oriented dart, -1 for its reversal."""
        return self._sign_of[dart]

    def is_loop(self, k: int) -> bool:
        d = self.positive[k]
        return self.origin[d] == self.target[d]

    def out_darts(self, v: int) -> list[int]:
        return [d for d in range(self.num_darts) if self.origin[d] == v]

    def adjacency(self) -> list[list[int]]:
        """Outgoing darts per vertex, in dart order."""
        out = [[] for _ in range(self.num_vertices)]
        for d, o in enumerate(self.origin):
            out[o].append(d)
        return out

    def degree(self, v: int) -> int:
        """Number of darts leaving ``v``; a loop counts twice."""
        return sum(1 for o in self.origin if o == v)

    def __repr__(self) -> str:
        return f"Graph(|V|={self.num_vertices}, |E+|={self.num_edges})"


@dataclass(frozen=True)
class Path:
    """A walk ``e_1 ... e_l`` of darts starting at ``start``."""

    start: int
    darts: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.darts)

    def end(self, g: Graph) -> int:
        return g.target[self.darts[-1]] if self.darts else self.start

    def is_valid(self, g: Graph) -> bool:
        at = self.start
        for d in self.darts:
            if g.origin[d] != at:
                return False
            at = g.target[d]
        return True

    def edge_chain(self, g: Graph) -> list[int]:
        """Signed count of traversals of each positively oriented edge."""
        chain = [0] * g.num_edges
        for d in self.darts:
            chain[g.edge_of(d)] += g.sign_of(d)
        return chain

    def reversed(self, g: Graph) -> "Path":
        return Path(self.end(g), tuple(g.involution[d] for d in reversed(self.darts)))


@dataclass(frozen=True)
class GraphMorphism:
    """A pair of maps ``(phi_V, phi_E)`` between graphs."""

    source: Graph
    target: Graph
    vertex_map: tuple[int, ...]
    dart_map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertex_map", tuple(self.vertex_map))
        object.__setattr__(self, "dart_map", tuple(self.dart_map))

    def violations(self) -> list[str]:
        X, Y = self.source, self.target
        out = []
        if len(self.vertex_map) != X.num_vertices or len(self.dart_map) != X.num_darts:
            return ["map sizes do not match the source graph"]
        for d in range(X.num_darts):
            e = self.dart_map[d]
            if self.dart_map[X.involution[d]] != Y.involution[e]:
                out.append(f"dart {d}: does not commute with the involution")
            if self.vertex_map[X.origin[d]] != Y.origin[e]:
                out.append(f"dart {d}: origin not preserved")
            if self.vertex_map[X.target[d]] != Y.target[e]:
                out.append(f"dart {d}: terminus not preserved")
        return out

    @property
    def is_morphism(self) -> bool:
        return not self.violations()

    @property
    def oriented(self) -> bool:
        Ypos = set(self.target.positive)
        return all(self.dart_map[d] in Ypos for d in self.source.positive)

    def compose(self, other: "GraphMorphism") -> "GraphMorphism":
        """``other`` after ``self``."""
        return GraphMorphism(self.source, other.target,
                             tuple(other.vertex_map[v] for v in self.vertex_map),
                             tuple(other.dart_map[d] for d in self.dart_map))

    @classmethod
    def identity(cls, g: Graph) -> "GraphMorphism":
        return cls(g, g, tuple(g.vertices), tuple(range(g.num_darts)))


# ---------------------------------------------------------------------------

def validate(g: Graph) -> list[str]:
    """Return a description of every violated graph axiom (empty when valid)."""
    out = []
    nd = g.num_darts
    if len(g.target) != nd or len(g.involution) != nd:
        return ["origin, terminus and involution arrays differ in length"]
    for d in range(nd):
        for name, v in (("origin", g.origin[d]), ("terminus", g.target[d])):
            if not 0 <= v < g.num_vertices:
                out.append(f"dart {d}: {name} {v} is not a vertex")
        r = g.involution[d]
        if not 0 <= r < nd:
            out.append(f"dart {d}: involution image {r} is not a dart")
            continue
        if r == d:
            out.append(f"dart {d}: fixed by the involution")
            continue
        if g.involution[r] != d:
            out.append(f"dart {d}: involution is not an involution (iota(iota(d)) = {g.involution[r]})")
        if g.origin[r] != g.target[d] or g.target[r] != g.origin[d]:
            out.append(f"dart {d}: reversal {r} does not swap its endpoints")
    pos = list(g.positive)
    if len(set(pos)) != len(pos):
        out.append("orientation lists a dart twice")
    pos_set = set(pos)
    if any(not 0 <= d < nd for d in pos_set):
        out.append("orientation names a dart that does not exist")
    else:
        neg = {g.involution[d] for d in pos_set if 0 <= g.involution[d] < nd and g.involution[d] != d}
        if pos_set & neg:
            out.append(f"orientation contains both darts of an edge: {sorted(pos_set & neg)}")
        missing = set(range(nd)) - pos_set - neg
        if missing:
            out.append(f"darts {sorted(missing)} are in neither E+ nor E-")
    if len(g.vertex_labels) != g.num_vertices:
        out.append("vertex label count differs from the vertex count")
    if len(g.edge_labels) != g.num_edges:
        out.append("edge label count differs from the edge count")
    return out


def components(g: Graph) -> list[list[int]]:
    """Connected components as sorted vertex lists, ordered by smallest vertex."""
    adj = g.adjacency()
    seen = [False] * g.num_vertices
    comps = []
    for s in g.vertices:
        if seen[s]:
            continue
        seen[s] = True
        comp, stack = [s], [s]
        while stack:
            v = stack.pop()
            for d in adj[v]:
                w = g.target[d]
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return len(components(g)) <= 1


def _require_connected(g: Graph) -> None:
    comps = components(g)
    if len(comps) > 1:
        raise NotConnected(f"graph has {len(comps)} components", components=comps)


def _bfs(g: Graph, root: int):
    adj = g.adjacency()
    parent = [None] * g.num_vertices
    parent[root] = -1
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for d in adj[v]:
            w = g.target[d]
            if parent[w] is None:
                parent[w] = d
                order.append(w)
                queue.append(w)
    return parent, order


def spanning_tree(g: Graph) -> list[int]:
    """Edge ids of a spanning tree found by breadth-first search from vertex 0."""
    _require_connected(g)
    if g.num_vertices == 0:
        return []
    parent, order = _bfs(g, 0)
    return sorted(g.edge_of(parent[v]) for v in order[1:])


def find_path(g: Graph, source: int, dest: int) -> Path:
    """Shortest dart path from ``source`` to ``dest``; ties go to lower dart ids."""
    parent, _ = _bfs(g, source)
    if parent[dest] is None:
        raise NotConnected(f"no path from vertex {source} to vertex {dest}", components=components(g))
    darts = []
    v = dest
    while v != source:
        d = parent[v]
        darts.append(d)
        v = g.origin[d]
    return Path(source, tuple(reversed(darts)))


def check_covering(phi: GraphMorphism) -> bool:
    """True iff ``phi`` is an oriented morphism, onto on vertices, and a local bijection.

    The local condition asks that the darts leaving each source vertex map
    bijectively onto the darts leaving its image.
    """
    if not phi.is_morphism or not phi.oriented:
        return False
    X, Y = phi.source, phi.target
    if set(phi.vertex_map) != set(Y.vertices):
        return False
    adj_x, adj_y = X.adjacency(), Y.adjacency()
    for v in X.vertices:
        image = [phi.dart_map[d] for d in adj_x[v]]
        if sorted(image) != adj_y[phi.vertex_map[v]]:
            return False
    return True


def covering_degree(phi: GraphMorphism) -> int:
    """Common fiber size of a covering map."""
    counts = [0] * phi.target.num_vertices
    for w in phi.vertex_map:
        counts[w] += 1
    if len(set(counts)) != 1:
        raise ValueError("fibers have different sizes")
    return counts[0] if counts else 0


# ---------------------------------------------------------------------------
# JSON format
# ---------------------------------------------------------------------------

class GraphFormatError(ValueError):
    pass


def graph_from_dict(data: dict) -> tuple[Graph, list[int | None]]:
    """Parse the JSON graph format; returns the graph and per-edge voltages."""
    if not isinstance(data, dict):
        raise GraphFormatError("top level must be an object")
    if "vertices" not in data or not isinstance(data["vertices"], list):
        raise GraphFormatError("field 'vertices' missing or not a list")
    labels = [str(v) for v in data["vertices"]]
    if len(set(labels)) != len(labels):
        raise GraphFormatError("duplicate vertex names")
    index = {v: i for i, v in enumerate(labels)}
    raw_edges = data.get("edges", [])
    if not isinstance(raw_edges, list):
        raise GraphFormatError("field 'edges' is not a list")
    edges, names, volts = [], [], []
    for k, e in enumerate(raw_edges):
        if not isinstance(e, dict):
            raise GraphFormatError(f"edges[{k}] is not an object")
        for key in ("from", "to"):
            if key not in e:
                raise GraphFormatError(f"edges[{k}]: field '{key}' missing")
            if str(e[key]) not in index:
                raise GraphFormatError(f"edges[{k}].{key}: unknown vertex {e[key]!r}")
        edges.append((index[str(e["from"])], index[str(e["to"])]))
        names.append(str(e.get("id", f"e{k}")))
        v = e.get("voltage")
        if v is not None and (isinstance(v, bool) or not isinstance(v, int)):
            raise GraphFormatError(f"edges[{k}].voltage must be an integer")
        volts.append(v)
    return Graph.from_edges(len(labels), edges, labels, names), volts


def graph_to_dict(g: Graph, voltages: Sequence[int] | None = None) -> dict:
    edges = []
    for k, (a, b) in enumerate(g.edges):
        rec = {"id": g.edge_labels[k], "from": g.vertex_labels[a], "to": g.vertex_labels[b]}
        if voltages is not None and voltages[k] is not None:
            rec["voltage"] = int(voltages[k])
        edges.append(rec)
    return {"vertices": list(g.vertex_labels), "edges": edges}


def load_graph(path) -> tuple[Graph, list[int | None]]:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GraphFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return graph_from_dict(data)


def dump_graph(g: Graph, path, voltages: Sequence[int] | None = None) -> None:
    with open(path, "w") as fh:
        json.dump(graph_to_dict(g, voltages), fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Named families
# ---------------------------------------------------------------------------

def bouquet(k: int) -> Graph:
    """One vertex with ``k`` loops."""
    return Graph.from_edges(1, [(0, 0)] * k, ["*"], [f"e{i}" for i in range(k)])


def complete_graph(n: int) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return Graph.from_edges(n, edges)


def two_bond_path(a: int, b: int) -> Graph:
    """``v1 - v2 - v3`` with ``a`` parallel edges, then ``b`` parallel edges."""
    edges = [(0, 1)] * a + [(1, 2)] * b
    names = [f"e{i + 1}" for i in range(a)] + [f"e{i + 1}'" for i in range(b)]
    return Graph.from_edges(3, edges, ["v1", "v2", "v3"], names)
