"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 internal-consistency failure (route
or vertex/edge disagreement), 3 cap exceeded with no partial result.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import algebra
from .algebra import det, is_prime
from .covers import DEFAULT_MAX_ENUM_EDGES, VoltageAssignment, derive, enumerate_trees
from .errors import CapExceeded, Disconnected, NotConnected, TooLarge
from .graph import GraphFormatError, dump_graph, graph_to_dict, load_graph
from .jacobian import boundary_matrix, jacobian_report, laplacian_matrix, reduced_laplacian, star_matrix
from .tower import TowerSpec, run_tower

EXIT_OK, EXIT_INPUT, EXIT_CONSISTENCY, EXIT_CAP = 0, 1, 2, 3


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _load(path):
    try:
        return load_graph(path)
    except OSError as exc:
        raise GraphFormatError(f"{path}: {exc.strerror}") from exc


def cmd_jacobian(args) -> int:
    g, _ = _load(args.input)
    report = jacobian_report(g)
    data = report.to_dict()
    if args.dump_matrices:
        data["matrices"] = {
            "laplacian": _jsonable(laplacian_matrix(g)),
            "boundary": _jsonable(boundary_matrix(g)),
            "star": _jsonable(star_matrix(g)),
        }
    if args.format == "json":
        print(json.dumps(data, indent=2))
    elif args.format == "csv":
        print("order,invariant_factors,vertex_edge_agree")
        print(f"{data['order']},{' '.join(map(str, data['invariant_factors']))},{str(report.agree).lower()}")
    else:
        print(f"order {data['order']}, factors {data['invariant_factors']}")
        if not report.agree:
            print(f"vertex Jacobian {report.vertex} != edge Jacobian {report.edge}")
    return EXIT_OK if report.agree else EXIT_CONSISTENCY


def _jsonable(M):
    return [[int(x) for x in row] for row in M]


def cmd_trees(args) -> int:
    g, _ = _load(args.input)
    try:
        count, trees = enumerate_trees(g, args.max_enum_edges, listing=True)
    except TooLarge as exc:
        _err(f"{exc} (matrix-tree count: {det(reduced_laplacian(g))})")
        return EXIT_CAP
    if args.format == "json":
        out = {"count": str(count)}
        if args.list:
            out["trees"] = [[g.edge_labels[k] for k in t] for t in trees]
        print(json.dumps(out, indent=2))
    else:
        print(count)
        if args.list:
            for t in trees:
                print(" ".join(g.edge_labels[k] for k in t) or "(empty)")
    return EXIT_OK


def cmd_derive(args) -> int:
    g, volts = _load(args.input)
    missing = [g.edge_labels[k] for k, v in enumerate(volts) if v is None]
    if missing:
        raise GraphFormatError(f"edges without a voltage: {', '.join(missing)}")
    if args.modulus < 1:
        raise GraphFormatError("--modulus must be at least 1")
    d = derive(VoltageAssignment(g, volts), args.modulus)
    if args.out:
        dump_graph(d.graph, args.out)
    else:
        print(json.dumps(graph_to_dict(d.graph), indent=2))
    info = {"connected": d.connected, "fiber_size": d.modulus,
            "vertices": d.graph.num_vertices, "edges": d.graph.num_edges}
    print(json.dumps(info) if args.format == "json" else
          f"connected: {str(d.connected).lower()}, fiber size {d.modulus}, "
          f"{d.graph.num_vertices} vertices, {d.graph.num_edges} edges",
          file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_tower(args) -> int:
    g, volts = _load(args.input)
    if any(v is None for v in volts):
        raise GraphFormatError("every edge needs a voltage for a tower")
    if not is_prime(args.p):
        raise GraphFormatError(f"--p {args.p} is not prime")
    spec = TowerSpec(g, volts, args.p, args.levels)
    cache = args.cache_dir or os.environ.get("GRAPH_IWASAWA_CACHE")
    result = run_tower(spec, routes="both" if args.oracle else "module", max_dim=args.max_matrix_dim,
                       jobs=args.jobs, debug=args.debug_asserts, cache_dir=cache, fit=args.fit)
    if args.format == "json":
        print(result.to_json())
    elif args.format == "csv":
        print(result.to_csv(), end="")
    else:
        _print_tower_table(result)
    if not result.all_agree:
        return EXIT_CONSISTENCY
    if all(lv.group is None for lv in result.levels):
        return EXIT_CAP
    return EXIT_OK


def _print_tower_table(result) -> None:
    head = f"{'n':>3} {'|V|':>6} {'|E|':>6} {'e_n':>5}  {'agree':>5}  invariant factors / note"
    print(head)
    print("-" * len(head))
    for lv in result.levels:
        d = lv.to_dict()
        agree = {None: "-", True: "yes", False: "NO"}[lv.route_agree]
        e = "-" if d["e_n"] is None else d["e_n"]
        tail = d["invariant_factors"] if d["invariant_factors"] is not None else ""
        if lv.error:
            tail = f"{tail} [{lv.error}]"
        print(f"{lv.n:>3} {lv.vertices:>6} {lv.edges:>6} {e:>5}  {agree:>5}  {tail}")
    f = result.invariants
    if f is not None:
        if f.fitted:
            print(f"fit: lambda={f.lam}, mu={f.mu}, nu={f.nu}, n0={f.n0}")
        else:
            print(f"fit: fitted=false ({f.note})")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--max-matrix-dim", type=int, default=algebra.DEFAULT_MAX_DIM)
    common.add_argument("--max-enum-edges", type=int, default=DEFAULT_MAX_ENUM_EDGES)
    common.add_argument("--debug-asserts", action="store_true")
    common.add_argument("--cache-dir", default=None)

    parser = argparse.ArgumentParser(prog="graph-iwasawa", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jacobian", parents=[common], help="vertex and edge Jacobian of a graph")
    p.add_argument("input")
    p.add_argument("--dump-matrices", action="store_true")
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("trees", parents=[common], help="count spanning trees exhaustively")
    p.add_argument("input")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("derive", parents=[common], help="derived graph of a voltage graph")
    p.add_argument("input")
    p.add_argument("--modulus", "-m", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("tower", parents=[common], help="p-parts of Jacobians up a Z_p-tower")
    p.add_argument("input")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--fit", action="store_true")
    p.add_argument("--oracle", action="store_true", help="also compute the direct route and compare")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_tower)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GraphFormatError as exc:
        _err(f"{args.input}: {exc}")
        return EXIT_INPUT
    except NotConnected as exc:
        comps = exc.components or []
        _err(f"{exc}; components: {comps}")
        return EXIT_INPUT
    except Disconnected as exc:
        _err(str(exc))
        return EXIT_INPUT
    except CapExceeded as exc:
        _err(str(exc))
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
