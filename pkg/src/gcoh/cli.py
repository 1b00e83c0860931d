"""Command-line front end.

Subcommands: cohomology, forest, torsion, tropical, core, spanning-tree,
verify.  All reports are JSON on stdout with big integers as decimal
strings and sorted keys, so identical inputs (and seeds) give byte-
identical output.

Exit codes: 0 success, 2 malformed input, 3 resource cap exceeded,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .graphs import WeightedGraph, full_subgraph, load_graph, require_prime
from .cohomology import cohomology_groups
from .forest import build_forest, forest_to_dot, torsion_structure
from .intlinalg import AbelianGroup
from .tropical import (
    EnumerationCapExceeded,
    eval_expr,
    render,
    z_complete,
    z_gamma,
)
from .verify import VerificationConfig, run_all
from .weights import oriented_core, oriented_torsion_exponent, \
    weighted_spanning_tree

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_VERIFY = 4


class InputError(Exception):
    pass


def _group_doc(g: AbelianGroup) -> dict:
    return {"rank": g.rank, "divisors": [str(d) for d in g.divisors]}


def _load(path: str) -> WeightedGraph:
    try:
        return load_graph(path)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read graph file {path}: {exc}") from exc


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, sort_keys=True, indent=2)
    sys.stdout.write("\n")


def cmd_cohomology(args) -> int:
    g = _load(args.graph)
    h0, h1 = cohomology_groups(full_subgraph(g))
    _emit({"h0": _group_doc(h0), "h1": _group_doc(h1)})
    return EXIT_OK


def cmd_forest(args) -> int:
    g = _load(args.graph)
    forest = build_forest(g, args.prime)
    doc = {
        "prime": args.prime,
        "nodes": [n.label() for n in forest.nodes],
        "node_count": len(forest.nodes),
        "counted_minimal": [n.label() for n in forest.counted_minimal],
        "peaks": [n.label() for n in forest.peak_nodes],
        "torsion_exponents": torsion_structure(forest),
        "infinite_tails": [
            "{" + ",".join(c.vertices) + "}"
            for c in forest.bipartite_components],
    }
    _emit(doc)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(forest_to_dot(forest))
            fh.write("\n")
    return EXIT_OK


def cmd_torsion(args) -> int:
    g = _load(args.graph)
    _, h1 = cohomology_groups(full_subgraph(g))
    forest = build_forest(g, args.prime)
    exponents = list(h1.p_part_exponents(args.prime))
    structure = torsion_structure(forest)
    _emit({
        "prime": args.prime,
        "divisors": [str(d) for d in h1.divisors],
        "p_torsion_exponents": exponents,
        "p_torsion_order": str(args.prime ** sum(exponents)),
        "forest_exponents": structure,
        "forest_matches_divisors": structure == exponents,
    })
    return EXIT_OK


def _load_valuations(path: str, g: WeightedGraph) -> dict[str, int]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        vals = {str(v): int(a) for v, a in doc.items()}
    except (OSError, ValueError, AttributeError) as exc:
        raise InputError(f"cannot read valuation file {path}: {exc}") from exc
    missing = [v for v in g.vertices if v not in vals]
    if missing:
        raise InputError(f"valuation file misses vertices: {missing}")
    return vals


def cmd_tropical(args) -> int:
    g = _load(args.graph)
    if args.complete_formula:
        n = len(g.vertices)
        expected = n * (n - 1) // 2
        if len(g.edges) != expected or n < 3:
            raise InputError("--complete-formula needs a complete graph "
                             "on at least 3 vertices")
        expr = z_complete(n, g.vertices)
    else:
        expr = z_gamma(g)
    doc = {"expression": render(expr)}
    if args.eval:
        vals = _load_valuations(args.eval, g)
        doc["valuations"] = vals
        doc["value"] = repr(eval_expr(expr, vals))
    _emit(doc)
    return EXIT_OK


def cmd_core(args) -> int:
    g = _load(args.graph)
    dec = oriented_core(g, args.prime)
    _emit({
        "prime": args.prime,
        "core_vertices": list(dec.core.vertices),
        "core_edges": [[u, v] for u, v in dec.core.edges],
        "special_edges": sorted([u, v] for u, v in dec.special_edges),
        "components": [
            {
                "vertices": list(part.graph.vertices),
                "edges": [[u, v] for u, v in part.graph.edges],
                "sup_level": part.sup_level,
                "min_valuation": part.min_val,
                "bipartite": part.bipartite,
                "from_forest": part.from_forest,
            }
            for part in dec.per_component
        ],
    })
    return EXIT_OK


def cmd_spanning_tree(args) -> int:
    g = _load(args.graph)
    sub = full_subgraph(g)
    try:
        tree = weighted_spanning_tree(sub, args.prime)
        exponent = oriented_torsion_exponent(sub, args.prime)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit({
        "prime": args.prime,
        "tree_edges": [[u, v] for u, v in tree.edges],
        "torsion_exponent": exponent,
    })
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = VerificationConfig(
        instance_count=args.instances,
        max_vertices=args.max_vertices,
        max_valuation=args.max_valuation,
        primes=tuple(args.primes),
        seed=args.seed,
        parallelism=args.parallelism,
    )
    results = run_all(cfg)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} properties passed "
          f"(seed {cfg.seed})")
    return EXIT_VERIFY if failed else EXIT_OK


def _primes_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        p = int(part)
        require_prime(p)
        out.append(p)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gcoh",
        description="exact cohomology of vertex-weighted graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cohomology", help="H0 and H1 with elementary divisors")
    p.add_argument("graph")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("forest", help="fundamental forest at a prime")
    p.add_argument("graph")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--dot", help="write a Graphviz rendering here")
    p.set_defaults(func=cmd_forest)

    p = sub.add_parser("torsion", help="p-torsion, divisors vs forest")
    p.add_argument("graph")
    p.add_argument("--prime", type=int, required=True)
    p.set_defaults(func=cmd_torsion)

    p = sub.add_parser("tropical", help="min-plus torsion-exponent function")
    p.add_argument("graph")
    p.add_argument("--eval", help="JSON file of vertex valuations")
    p.add_argument("--complete-formula", action="store_true",
                   help="use the closed form for complete graphs")
    p.set_defaults(func=cmd_tropical)

    p = sub.add_parser("core", help="oriented core decomposition")
    p.add_argument("graph")
    p.add_argument("--prime", type=int, required=True)
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("spanning-tree", help="weighted spanning tree (odd p)")
    p.add_argument("graph")
    p.add_argument("--prime", type=int, required=True)
    p.set_defaults(func=cmd_spanning_tree)

    p = sub.add_parser("verify", help="randomized oracle cross-checks")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--instances", type=int, default=500)
    p.add_argument("--max-vertices", type=int, default=6)
    p.add_argument("--max-valuation", type=int, default=3)
    p.add_argument("--primes", type=_primes_list, default=[2, 3, 5])
    p.add_argument("--parallelism", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "prime", None) is not None:
            require_prime(args.prime)
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        if isinstance(exc, EnumerationCapExceeded):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CAP
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
