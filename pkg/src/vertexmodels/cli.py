"""Command-line interface.

Exit codes: 0 when the computation succeeds or the identity holds, 1 when a
violation or witness is found, 2 for usage errors, bad input files and
precondition failures.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional, Sequence

from . import certify, connection, graphs, models, partition, scalars, suite, symbolic
from .errors import VertexModelError
from .graphs import DirectedMultigraph, LabeledGraph, Multigraph, PinMap

OK, VIOLATION, ERROR = 0, 1, 2


class UsageError(Exception):
    """Bad command-line input; reported with exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(args, text: str, payload: Optional[dict] = None) -> None:
    if args.format == "json" and payload is not None:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _int_list(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _load_plain_graph(path: str):
    G = graphs.load_graph(path)
    return G.graph if isinstance(G, LabeledGraph) else G


def _oracle(text: str, directed: bool = False) -> certify.ParamOracle:
    """``model:PATH`` or the name of a builtin oracle."""
    if text.startswith("model:"):
        return certify.model_oracle(models.load_model(text[len("model:"):]))
    if text == "vertex-power":
        return certify.vertex_power_oracle(directed=directed)
    if text in certify.BUILTIN_ORACLES:
        return certify.BUILTIN_ORACLES[text]()
    names = ", ".join(["model:PATH"] + sorted(certify.BUILTIN_ORACLES))
    raise UsageError(f"unknown oracle {text!r}; choose from {names}")


# --------------------------------------------------------------------------
# Subcommands


def cmd_partition(args) -> int:
    G = _load_plain_graph(args.graph)
    y = models.load_model(args.model)
    if isinstance(G, DirectedMultigraph):
        if args.method == "contract":
            raise UsageError("the contraction engine handles undirected graphs only")
        value = partition.directed_partition(G, y, cap_edges=args.cap_edges)
    elif args.method == "contract":
        order = args.order
        if order.startswith("given:"):
            order = list(_int_list(order[len("given:"):]))
        elif order != "greedy":
            raise UsageError("--order must be 'greedy' or 'given:<comma list>'")
        value = partition.partition_contract(G, y, order=order, max_width=args.cap_width)
    else:
        value = partition.partition_brute(G, y, cap_edges=args.cap_edges)
    _emit(args, scalars.format_scalar(value), {"value": scalars.to_json(value)})
    return OK


_IDENTITIES = {
    "thm1": (False, "pins"),
    "thm2": (False, "contract"),
    "thm3": (True, "pins"),
    "thm4": (True, "contract"),
}


def _certify_identity(args) -> int:
    directed, mode = _IDENTITIES[args.identity]
    G = _load_plain_graph(args.graph)
    if isinstance(G, DirectedMultigraph) != directed:
        kind = "a directed" if directed else "an undirected"
        raise UsageError(f"{args.identity} needs {kind} graph")
    if (args.model is None) == (args.oracle is None):
        raise UsageError("give exactly one of --model or --oracle")
    f = certify.model_oracle(models.load_model(args.model)) if args.model else _oracle(args.oracle, directed)
    p = PinMap(_int_list(args.u), _int_list(args.s))
    table = {
        (False, "pins"): certify.alt_sum_pins,
        (False, "contract"): certify.alt_sum_contract,
        (True, "pins"): certify.directed_alt_sum_pins,
        (True, "contract"): certify.directed_alt_sum_contract,
    }
    value = table[directed, mode](f, G, p, cap_usize=args.cap_usize)
    holds = not value
    verdict = "identity holds" if holds else "violation"
    _emit(args, f"{scalars.format_scalar(value)} ({verdict})",
          {"value": scalars.to_json(value), "holds": holds})
    return OK if holds else VIOLATION


def _certify_search(args) -> int:
    f = _oracle(args.oracle, args.directed)
    if args.usize > args.cap_usize:
        raise UsageError(f"--usize {args.usize} exceeds --cap-usize {args.cap_usize}")
    w = certify.search_violation(f, args.usize, args.max_n, args.max_e, args.mode, args.allow_overlap)
    if w is None:
        _emit(args, "no witness", {"witness": None})
        return OK
    print(json.dumps(w.to_json(), sort_keys=True))
    return VIOLATION


def _certify_multiplicative(args) -> int:
    f = _oracle(args.oracle, args.directed)
    rng = random.Random(args.seed)
    pairs = [(suite.random_graph(rng, args.max_n, args.max_e, 0, args.directed),
              suite.random_graph(rng, args.max_n, args.max_e, 0, args.directed))
             for _ in range(args.pairs)]
    holds = certify.check_multiplicative(f, pairs)
    _emit(args, f"{len(pairs)} pairs: {'multiplicative' if holds else 'not multiplicative'}",
          {"pairs": len(pairs), "holds": holds})
    return OK if holds else VIOLATION


def cmd_certify(args) -> int:
    if args.identity in _IDENTITIES:
        return _certify_identity(args)
    if args.identity == "search":
        return _certify_search(args)
    return _certify_multiplicative(args)


def cmd_symbolic(args) -> int:
    if args.what == "p":
        G = _load_plain_graph(args.graph)
        poly = symbolic.p_poly(G, args.k, cap_edges=args.cap_edges)
        _emit(args, poly.to_text(), {"polynomial": poly.to_text()})
        return OK
    q = symbolic.parse_x_monomial(args.monomial)
    sides = symbolic.diagram_sides(q, args.k, args.n)
    verdict = "commutes" if sides.holds else "fails"
    text = "\n".join([f"p(mu(q))      = {sides.left.to_text()}",
                      f"sigma(tau(q)) = {sides.right.to_text()}",
                      verdict])
    _emit(args, text, {"left": sides.left.to_text(), "right": sides.right.to_text(), "holds": sides.holds})
    return OK if sides.holds else VIOLATION


def cmd_connection(args) -> int:
    f = _oracle(args.oracle)
    fam = connection.enumerate_labeled(args.l, args.max_extra, args.max_edges)
    rank = models.exact_rank(connection.connection_slice(f, fam)) if len(fam) else 0
    bound = None
    if args.r is not None:
        bound = args.r ** args.l
    elif args.oracle == "counterexample":
        bound = 4 ** args.l
    ok = bound is None or rank <= bound
    lines = [f"family size: {len(fam)}", f"rank: {rank}"]
    if bound is not None:
        lines.append(f"bound: {bound}")
        lines.append("ok" if ok else "violation")
    _emit(args, "\n".join(lines), {"family_size": len(fam), "rank": rank, "bound": bound, "ok": ok})
    return OK if ok else VIOLATION


def cmd_moment_rank(args) -> int:
    y = models.load_model(args.model)
    if y.degree_cap is not None and 2 * args.d > y.degree_cap:
        raise UsageError(f"the moment slice needs entries up to degree {2 * args.d}, "
                         f"model is capped at {y.degree_cap}")
    target = y.as_vertex_model() if isinstance(y, models.DirectedVertexModel) else y
    M = models.moment_slice(target, args.d)
    rank = models.exact_rank(M)
    ok = args.r is None or rank <= args.r
    lines = [f"size: {M.size}", f"rank: {rank}"]
    if args.r is not None:
        lines.append("ok" if ok else "violation")
    _emit(args, "\n".join(lines), {"size": M.size, "rank": rank, "bound": args.r, "ok": ok})
    return OK if ok else VIOLATION


def cmd_suite(args) -> int:
    if args.scale not in suite.SCALES:
        raise UsageError(f"unknown scale {args.scale!r}; choose from {', '.join(suite.SCALES)}")
    report = suite.run_suite(args.scale, args.seed, args.inject_fault, cap_width=args.cap_width)
    text = report.render(args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return OK if report.ok else VIOLATION


# --------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vertexmodels", description="Exact vertex-model partition functions and identities.")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--cap-edges", type=int, default=partition.DEFAULT_EDGE_CAP)
    parser.add_argument("--cap-width", type=int, default=partition.DEFAULT_WIDTH_CAP)
    parser.add_argument("--cap-usize", type=int, default=certify.DEFAULT_USIZE_CAP)
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("partition", help="evaluate f_y(G)")
    p.add_argument("--graph", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--method", choices=("brute", "contract"), default="brute")
    p.add_argument("--order", default="greedy", help="greedy or given:<comma list of edge indices>")
    p.set_defaults(func=cmd_partition)

    c = sub.add_parser("certify", help="alternating-sum identities and searches")
    c.add_argument("identity", choices=("thm1", "thm2", "thm3", "thm4", "search", "multiplicative"))
    c.add_argument("--graph")
    c.add_argument("--model")
    c.add_argument("--oracle")
    c.add_argument("--u", default="")
    c.add_argument("--s", default="")
    c.add_argument("--usize", type=int, default=2)
    c.add_argument("--max-n", type=int, default=4)
    c.add_argument("--max-e", type=int, default=4)
    c.add_argument("--mode", choices=("pins", "contract"), default="pins")
    c.add_argument("--allow-overlap", action="store_true")
    c.add_argument("--directed", action="store_true")
    c.add_argument("--pairs", type=int, default=50)
    c.set_defaults(func=cmd_certify)

    s = sub.add_parser("symbolic", help="the polynomial map p and the diagram check")
    s.add_argument("what", choices=("p", "diagram"))
    s.add_argument("--graph")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--monomial")
    s.add_argument("--n", type=int, default=1)
    s.set_defaults(func=cmd_symbolic)

    n = sub.add_parser("connection", help="connection matrix slices")
    n.add_argument("what", choices=("rank",))
    n.add_argument("--oracle", required=True)
    n.add_argument("--l", type=int, default=1)
    n.add_argument("--max-extra", type=int, default=2)
    n.add_argument("--max-edges", type=int, default=3)
    n.add_argument("--r", type=int, help="rank of the model, if known; the bound is r^l")
    n.set_defaults(func=cmd_connection)

    m = sub.add_parser("moment-rank", help="exact rank of a moment matrix slice")
    m.add_argument("--model", required=True)
    m.add_argument("--d", type=int, default=2)
    m.add_argument("--r", type=int, help="expected rank bound")
    m.set_defaults(func=cmd_moment_rank)

    u = sub.add_parser("suite", help="run the property battery")
    u.add_argument("--scale", default="smoke")
    u.add_argument("--inject-fault", action="store_true")
    u.add_argument("--output")
    u.add_argument("--seed", type=int, dest="suite_seed")
    u.set_defaults(func=cmd_suite)
    return parser


def _check_required(args) -> None:
    needs = {
        ("certify", "thm1"): ["graph"], ("certify", "thm2"): ["graph"],
        ("certify", "thm3"): ["graph"], ("certify", "thm4"): ["graph"],
        ("certify", "search"): ["oracle"], ("certify", "multiplicative"): ["oracle"],
        ("symbolic", "p"): ["graph"], ("symbolic", "diagram"): ["monomial"],
    }
    key = (args.command, getattr(args, "identity", None) or getattr(args, "what", None))
    for name in needs.get(key, []):
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for {' '.join(key)}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "suite_seed", None) is not None:
            args.seed = args.suite_seed
        _check_required(args)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
    except (VertexModelError, ValueError, TypeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return ERROR


if __name__ == "__main__":
    sys.exit(main())
