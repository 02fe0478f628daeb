"""Z_p-towers of graphs and their Iwasawa invariants.

Level ``n`` of the tower is the derived graph of the voltages read mod
``p**n``. With the id conventions of :mod:`graph_iwasawa.covers` the lift
``(x, 0)`` of each base vertex or edge ``x`` identifies ``Z E_n^+`` with
``Z[Gamma_n] E_0^+`` through ``(x, g) <-> gamma^g x``, and flattening a
group-ring matrix reproduces the level-n matrices with no reindexing.

The finite-level module is ``J(n) = Z_p E_n^+ / (H(n) + S(n))`` where ``H(n)``
is the lattice of level-n cycles whose total voltage is zero, i.e. the cycles
that still close up at every higher level. ``H_1(X_n) / H(n)`` is infinite
cyclic, and adding the norm of the level-one path ``delta_0`` recovers the
p-part of the Jacobian.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path as FilePath
from typing import Sequence

import numpy as np

from .algebra import (DEFAULT_MAX_DIM, AbelianGroupStructure, GroupRingMatrix, cokernel_structure,
                      flatten_group_ring, int_matrix, is_prime, kernel_basis, p_part, valuation,
                      zeros)
from .covers import DerivedGraph, VoltageAssignment, connectivity_criterion, derive
from .errors import CapExceeded, Disconnected, InsufficientLevels
from .graph import Graph, Path, find_path
from .jacobian import boundary_matrix, fundamental_cycles, laplacian_matrix, star_matrix, vertex_jacobian


@dataclass(frozen=True)
class TowerSpec:
    """A Z_p-tower: base graph, integer voltages read in Z_p, prime, top level."""

    base: Graph
    voltages: tuple[int, ...]
    p: int
    max_level: int = 4
    base_vertex: int = 0

    def __post_init__(self):
        object.__setattr__(self, "voltages", tuple(int(a) for a in self.voltages))
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.max_level < 0:
            raise ValueError("max_level must be nonnegative")
        if len(self.voltages) != self.base.num_edges:
            raise ValueError("one voltage per positively oriented edge is required")

    @property
    def assignment(self) -> VoltageAssignment:
        return VoltageAssignment(self.base, self.voltages, 0)

    @property
    def holonomy_valuation(self):
        return connectivity_criterion(self.assignment, self.p)

    @property
    def is_connected_tower(self) -> bool:
        return self.holonomy_valuation == 0

    def check(self) -> None:
        if not self.is_connected_tower:
            raise Disconnected(
                f"voltages do not give a connected tower (minimal holonomy valuation "
                f"{self.holonomy_valuation})")

    def key(self) -> str:
        payload = json.dumps({"edges": self.base.edges, "n_vertices": self.base.num_vertices,
                              "voltages": self.voltages, "p": self.p,
                              "v0": self.base_vertex}, sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:24]


def build_level(spec: TowerSpec, n: int) -> DerivedGraph:
    level = derive(spec.assignment, spec.p ** n)
    if not level.connected:
        raise Disconnected(f"level {n} of the tower is disconnected")
    return level


def twisted_boundary(spec: TowerSpec, n: int) -> GroupRingMatrix:
    """``d`` over ``Z[T]/(T^(p^n) - 1)``: edge ``e`` goes to ``T^a(e) t(e) - o(e)``."""
    polys = [[{} for _ in range(spec.base.num_edges)] for _ in range(spec.base.num_vertices)]
    for k, (o, t) in enumerate(spec.base.edges):
        a = spec.voltages[k]
        _add(polys[t][k], a, 1)
        _add(polys[o][k], 0, -1)
    return GroupRingMatrix.from_polys(polys, spec.p, n)


def twisted_star(spec: TowerSpec, n: int) -> GroupRingMatrix:
    """``s`` over the group ring: ``s(v) = sum_{t(e)=v} T^-a(e) e - sum_{o(e)=v} e``."""
    polys = [[{} for _ in range(spec.base.num_vertices)] for _ in range(spec.base.num_edges)]
    for k, (o, t) in enumerate(spec.base.edges):
        a = spec.voltages[k]
        _add(polys[k][t], -a, 1)
        _add(polys[k][o], 0, -1)
    return GroupRingMatrix.from_polys(polys, spec.p, n)


def _add(poly, power, c):
    poly[power] = poly.get(power, 0) + c


def check_commuting_diagrams(spec: TowerSpec, n: int, max_dim: int = DEFAULT_MAX_DIM) -> None:
    """Assert that the flattened twisted maps are the level-n ``d``, ``s`` and Laplacian."""
    level = build_level(spec, n)
    D = flatten_group_ring(twisted_boundary(spec, n), max_dim)
    S = flatten_group_ring(twisted_star(spec, n), max_dim)
    if not np.array_equal(D, boundary_matrix(level.graph)):
        raise AssertionError(f"twisted boundary disagrees with level {n}")
    if not np.array_equal(S, star_matrix(level.graph)):
        raise AssertionError(f"twisted star disagrees with level {n}")
    if not np.array_equal(D.dot(S), laplacian_matrix(level.graph)):
        raise AssertionError(f"d s is not the Laplacian at level {n}")


def _check_dim(spec: TowerSpec, n: int, max_dim: int) -> None:
    dim = spec.p ** n * max(spec.base.num_edges, spec.base.num_vertices)
    if dim > max_dim:
        raise CapExceeded(f"level {n} needs dimension {dim} > cap {max_dim}")


def level_homology(spec: TowerSpec, n: int) -> np.ndarray:
    """Cycle basis of ``H_1(X_n)`` as columns."""
    level = build_level(spec, n)
    cycles = fundamental_cycles(level.graph)
    if not cycles:
        return zeros(level.graph.num_edges, 0)
    return int_matrix(cycles).T


def voltage_row(spec: TowerSpec, n: int) -> list[int]:
    """Integer voltage of the base edge under each level-n edge."""
    m = spec.p ** n
    return [a for a in spec.voltages for _ in range(m)]


def module_homology(spec: TowerSpec, n: int) -> np.ndarray:
    """Generators of ``H(n)``: level-n cycles with zero total voltage."""
    B = level_homology(spec, n)
    if B.shape[1] == 0:
        return B
    w = int_matrix([voltage_row(spec, n)]).dot(B)
    K = kernel_basis(w)
    return B.dot(K)


def j_module_structure(spec: TowerSpec, n: int, max_dim: int = DEFAULT_MAX_DIM) -> AbelianGroupStructure:
    """``J(n) = C(n) / (H(n) + S(n))`` as a Z_p-module (free rank plus p-torsion)."""
    _check_dim(spec, n, max_dim)
    H = module_homology(spec, n)
    S = flatten_group_ring(twisted_star(spec, n), max_dim)
    return p_part(cokernel_structure(np.hstack([H, S])), spec.p, keep_free=True)


def delta_zero(spec: TowerSpec) -> Path:
    """Projection to the base of a shortest path from ``(v0, 0)`` to ``(v0, 1)`` at level 1."""
    level = build_level(spec, 1)
    v0 = spec.base_vertex
    path = find_path(level.graph, level.vertex(v0, 0), level.vertex(v0, 1))
    proj = level.projection
    return Path(v0, tuple(proj.dart_map[d] for d in path.darts))


def lift_path(spec: TowerSpec, path: Path, n: int, start: int = 0) -> list[int]:
    """Edge chain at level ``n`` of the lift of a base path starting at ``(v, start)``."""
    m = spec.p ** n
    base = spec.base
    chain = [0] * (base.num_edges * m)
    g = start % m
    for d in path.darts:
        k = base.edge_of(d)
        a = spec.voltages[k]
        if base.sign_of(d) > 0:
            chain[k * m + g] += 1
            g = (g + a) % m
        else:
            g = (g - a) % m
            chain[k * m + g] -= 1
    return chain


def norm_delta(spec: TowerSpec, n: int, delta: Path | None = None) -> list[int]:
    """``N_n(gamma) delta_0``: sum over the Galois orbit of a lift of ``delta_0``."""
    delta = delta_zero(spec) if delta is None else delta
    m = spec.p ** n
    total = [0] * (spec.base.num_edges * m)
    for i in range(m):
        for j, c in enumerate(lift_path(spec, delta, n, start=i)):
            total[j] += c
    return total


def p_primary_jacobian_via_module(spec: TowerSpec, n: int, max_dim: int = DEFAULT_MAX_DIM,
                                  delta: Path | None = None) -> AbelianGroupStructure:
    """``J(n) / Z_p N_n(gamma) delta_0``, which is ``Jac(X_n)[p^inf]``."""
    _check_dim(spec, n, max_dim)
    H = module_homology(spec, n)
    S = flatten_group_ring(twisted_star(spec, n), max_dim)
    N = int_matrix([norm_delta(spec, n, delta)]).T
    group = cokernel_structure(np.hstack([H, S, N]))
    return p_part(group, spec.p)


def p_primary_jacobian_direct(spec: TowerSpec, n: int, max_dim: int = DEFAULT_MAX_DIM) -> AbelianGroupStructure:
    """p-part of the vertex Jacobian of the level-n graph."""
    dim = spec.p ** n * spec.base.num_vertices - 1
    if dim > max_dim:
        raise CapExceeded(f"level {n} reduced Laplacian has dimension {dim} > cap {max_dim}")
    return p_part(vertex_jacobian(build_level(spec, n).graph), spec.p)


# ---------------------------------------------------------------------------
# Invariant fit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IwasawaInvariants:
    """``e_n = lam * p**n + mu * n + nu`` for ``n0 <= n <= N`` when ``fitted``."""

    lam: int | None
    mu: int | None
    nu: int | None
    n0: int | None
    fitted: bool
    note: str = ""

    def predict(self, n: int, p: int) -> int:
        return self.lam * p ** n + self.mu * n + self.nu

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "mu": self.mu, "nu": self.nu, "n0": self.n0,
                "fitted": self.fitted, "note": self.note}


def fit_invariants(e: Sequence[int], p: int) -> IwasawaInvariants:
    """Exact fit of ``e_n = lam p^n + mu n + nu`` on a trailing window.

    Tries ``n0 = 0, 1, ...`` and keeps the first for which the three levels
    ``n0, n0+1, n0+2`` determine integers ``lam >= 0``, ``mu``, ``nu`` that
    reproduce every ``e_n`` with ``n >= n0``.
    """
    e = [int(x) for x in e]
    N = len(e) - 1
    if N < 3:
        raise InsufficientLevels(f"need levels 0..3 at least, got 0..{N}")
    for n0 in range(N - 1):
        d0 = e[n0 + 1] - e[n0]
        d1 = e[n0 + 2] - e[n0 + 1]
        lam = Fraction(d1 - d0, p ** n0 * (p - 1) ** 2)
        if lam.denominator != 1 or lam < 0:
            continue
        lam = int(lam)
        mu = d0 - lam * p ** n0 * (p - 1)
        nu = e[n0] - lam * p ** n0 - mu * n0
        if all(lam * p ** n + mu * n + nu == e[n] for n in range(n0, N + 1)):
            return IwasawaInvariants(lam, mu, nu, n0, True)
    return IwasawaInvariants(None, None, None, None, False, "no exact fit on three trailing levels")


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------

@dataclass
class TowerLevelReport:
    n: int
    p: int
    vertices: int
    edges: int
    direct: AbelianGroupStructure | None = None
    module: AbelianGroupStructure | None = None
    j_module: AbelianGroupStructure | None = None
    error: str | None = None

    @property
    def group(self) -> AbelianGroupStructure | None:
        return self.direct if self.direct is not None else self.module

    @property
    def e_n(self) -> int | None:
        g = self.group
        if g is None:
            return None
        return sum(valuation(d, self.p) for d in g.torsion)

    @property
    def order(self) -> int | None:
        g = self.group
        return None if g is None else g.order

    @property
    def route_agree(self) -> bool | None:
        if self.direct is None or self.module is None:
            return None
        return self.direct == self.module

    @property
    def j_rank_ok(self) -> bool | None:
        return None if self.j_module is None else self.j_module.free_rank == 1

    def to_dict(self) -> dict:
        g = self.group
        return {
            "n": self.n,
            "vertices": self.vertices,
            "edges": self.edges,
            "order": None if g is None else str(g.order),
            "invariant_factors": None if g is None else list(g.torsion),
            "e_n": self.e_n,
            "route_agree": self.route_agree,
            "j_module": None if self.j_module is None else self.j_module.to_dict(),
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TowerLevelReport":
        def grp(x):
            return None if x is None else AbelianGroupStructure(x["free_rank"], tuple(x["invariant_factors"]))
        return cls(d["n"], d["p"], d["vertices"], d["edges"], grp(d.get("direct")), grp(d.get("module")),
                   grp(d.get("j_module")), d.get("error"))


@dataclass
class TowerResult:
    spec: TowerSpec
    levels: list[TowerLevelReport]
    invariants: IwasawaInvariants | None = None

    @property
    def e(self) -> list[int | None]:
        return [lv.e_n for lv in self.levels]

    @property
    def all_agree(self) -> bool:
        return all(lv.route_agree is not False and lv.j_rank_ok is not False for lv in self.levels)

    def to_dict(self) -> dict:
        return {
            "p": self.spec.p,
            "voltages": list(self.spec.voltages),
            "levels": [lv.to_dict() for lv in self.levels],
            "fit": None if self.invariants is None else self.invariants.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "vertices", "edges", "order", "invariant_factors", "e_n", "route_agree"])
        for lv in self.levels:
            d = lv.to_dict()
            factors = "" if d["invariant_factors"] is None else " ".join(map(str, d["invariant_factors"]))
            w.writerow([d["n"], d["vertices"], d["edges"], d["order"] or "", factors,
                        "" if d["e_n"] is None else d["e_n"],
                        "" if d["route_agree"] is None else str(d["route_agree"]).lower()])
        if self.invariants is not None:
            f = self.invariants
            w.writerow(["#fit", "lambda", "mu", "nu", "n0", "fitted"])
            w.writerow(["fit"] + ["" if x is None else x for x in (f.lam, f.mu, f.nu, f.n0)]
                       + [str(f.fitted).lower()])
        return buf.getvalue()


def _cache_path(cache_dir, spec: TowerSpec, n: int, routes: str) -> FilePath:
    return FilePath(cache_dir) / f"{spec.key()}-{routes}-n{n}.json"


def _cache_put(path: FilePath, report: TowerLevelReport) -> None:
    # write-then-rename: concurrent writers of the same value are harmless
    path.parent.mkdir(parents=True, exist_ok=True)
    data = {"n": report.n, "p": report.p, "vertices": report.vertices, "edges": report.edges, "error": report.error}
    for name in ("direct", "module", "j_module"):
        g = getattr(report, name)
        data[name] = None if g is None else g.to_dict()
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(data, fh)
    os.replace(tmp, path)


def compute_level(spec: TowerSpec, n: int, routes: str = "both", max_dim: int = DEFAULT_MAX_DIM,
                  debug: bool = False, cache_dir=None) -> TowerLevelReport:
    """Compute one level; cap errors are recorded in the report, not raised."""
    if cache_dir is not None:
        path = _cache_path(cache_dir, spec, n, routes)
        if path.exists():
            with open(path) as fh:
                return TowerLevelReport.from_dict(json.load(fh))
    m = spec.p ** n
    report = TowerLevelReport(n, spec.p, m * spec.base.num_vertices, m * spec.base.num_edges)
    errors = []
    if debug:
        check_commuting_diagrams(spec, n, max_dim)
    if routes in ("both", "direct"):
        try:
            report.direct = p_primary_jacobian_direct(spec, n, max_dim)
        except CapExceeded as exc:
            errors.append(f"direct: {exc}")
    if routes in ("both", "module"):
        try:
            report.module = p_primary_jacobian_via_module(spec, n, max_dim)
            report.j_module = j_module_structure(spec, n, max_dim)
        except CapExceeded as exc:
            errors.append(f"module: {exc}")
    report.error = "; ".join(errors) or None
    if cache_dir is not None and report.error is None:
        _cache_put(_cache_path(cache_dir, spec, n, routes), report)
    return report


def run_tower(spec: TowerSpec, routes: str = "both", max_dim: int = DEFAULT_MAX_DIM,
              jobs: int = 1, debug: bool = False, cache_dir=None, fit: bool = True) -> TowerResult:
    """Compute every level ``0..max_level`` and fit the invariants.

    ``routes`` is ``"both"``, ``"direct"`` or ``"module"``. Levels are
    independent, so ``jobs > 1`` farms them out to worker processes.
    """
    spec.check()
    levels = range(spec.max_level + 1)
    args = [(spec, n, routes, max_dim, debug, cache_dir) for n in levels]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_compute_level_star, args))
    else:
        reports = [compute_level(*a) for a in args]
    result = TowerResult(spec, reports)
    if fit:
        e = []
        for r in reports:
            if r.e_n is None:
                break
            e.append(r.e_n)
        try:
            result.invariants = fit_invariants(e, spec.p)
        except InsufficientLevels as exc:
            result.invariants = IwasawaInvariants(None, None, None, None, False, f"InsufficientLevels: {exc}")
    return result


def _compute_level_star(args):
    return compute_level(*args)


def bouquet_closed_form(p: int, k: int, n: int) -> int:
    """``p^n (p^u)^(p^n - 1)`` with ``u = v_p(k)``."""
    u = valuation(k, p)
    return p ** n * (p ** u) ** (p ** n - 1)
