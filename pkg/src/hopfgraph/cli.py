"""Command line interface: ``hopfgraph COMMAND FILE [options]``.

Every command prints one JSON document per graph in the file, one per line,
in file order.  ``--pretty`` prints a readable table instead.

Exit status: 0 success, 1 unreadable, unparsable or invalid input, 2 an axiom
check failed, 3 arithmetic left the Laurent window.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .canon import plain_key, ribbon_key
from .dsl import DSLError, load_graphs, to_dsl
from .graph import FeynmanGraph, GraphError, is_connected
from .hopf import HopfAlgebra, element_to_json, tensor_to_json
from .renorm import (
    DEFAULT_WINDOW,
    FeynmanRules,
    Renormalizer,
    TruncationError,
    WindowError,
    parse_window,
)
from .ribbon import topology, topology_by_component
from .surgery import Theory

EXIT_INPUT = 1
EXIT_AXIOM = 2
EXIT_TRUNCATION = 3

THEORIES = [t.value for t in Theory]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _window(args) -> tuple[int, int]:
    if args.window:
        return parse_window(args.window)
    env = os.environ.get("HOPFGRAPH_WINDOW")
    return parse_window(env) if env else DEFAULT_WINDOW


def _names(graphs: list[FeynmanGraph], algebra: HopfAlgebra) -> dict[bytes, str]:
    out: dict[bytes, str] = {}
    for g in graphs:
        if is_connected(g):
            out.setdefault(algebra.key(g), g.name)
    return out


def _emit(rows: list[tuple[str, object]], pretty: bool, render) -> None:
    for name, payload in rows:
        if pretty:
            print(f"== {name}")
            render(payload)
        else:
            print(json.dumps(payload))


def _print_terms(payload) -> None:
    if not payload:
        print("  0")
    for t in payload:
        if "monomial" in t:
            print(f"  {t['coeff']:>6}  {' '.join(t['monomial']) or '1'}")
        else:
            print(f"  {t['coeff']:>6}  {' '.join(t['left']) or '1'}  (x)  {' '.join(t['right']) or '1'}")


def _print_dict(payload) -> None:
    items = payload if isinstance(payload, list) else [payload]
    for d in items:
        print("  " + "  ".join(f"{k}={v}" for k, v in d.items()))


def cmd_classify(args, graphs):
    rows = []
    for g in graphs:
        if is_connected(g):
            rows.append((g.name, topology(g).as_dict()))
        else:
            rows.append((g.name, [t.as_dict() for t in topology_by_component(g)]))
    _emit(rows, args.pretty, _print_dict)
    return 0


def cmd_subgraphs(args, graphs):
    A = HopfAlgebra(args.theory)
    rows = []
    for g in graphs:
        out = []
        for sel in A.subgraphs(g):
            out.append({
                "edges": [g.edges[i].label for i in sorted(sel.edges)],
                "vertices": [g.vertex_name(v) for v in sorted(sel.vertices)],
                "cograph": A.key(A.cograph(g, sel)).decode("ascii"),
            })
        rows.append((g.name, out))

    def render(payload):
        if not payload:
            print("  (none)")
        for s in payload:
            print(f"  edges {','.join(s['edges'])}  vertices {','.join(s['vertices'])}")

    _emit(rows, args.pretty, render)
    return 0


def cmd_coproduct(args, graphs):
    A = HopfAlgebra(args.theory)
    names = _names(graphs, A)
    op = A.reduced_coproduct if args.reduced else A.coproduct
    rows = [(g.name, tensor_to_json(op(g), names)) for g in graphs]
    _emit(rows, args.pretty, _print_terms)
    return 0


def cmd_antipode(args, graphs):
    A = HopfAlgebra(args.theory)
    names = _names(graphs, A)
    rows = [(g.name, element_to_json(A.antipode(g), names)) for g in graphs]
    _emit(rows, args.pretty, _print_terms)
    return 0


def _rules(args, graphs, window) -> FeynmanRules:
    if not args.rules:
        return FeynmanRules(window=window)
    return FeynmanRules.load(args.rules, names={g.name: g for g in graphs}, window=window)


def cmd_renormalize(args, graphs):
    window = _window(args)
    R = Renormalizer(_rules(args, graphs, window), theory=args.theory)
    rows = [(g.name, R.renormalize(g).to_json()) for g in graphs]
    _emit(rows, args.pretty, lambda d: print("  " + (", ".join(f"e^{k}: {v}" for k, v in d.items()) or "0")))
    return 0


def cmd_check(args, graphs):
    if not args.axioms:
        raise _UsageError("nothing to check; pass --axioms")
    theories = THEORIES if args.theory == "all" else [args.theory]
    window = _window(args)
    failed = False
    rows = []
    for g in graphs:
        result = {}
        for th in theories:
            A = HopfAlgebra(th)
            R = Renormalizer(FeynmanRules(window=window), theory=th, algebra=A)
            checks = {
                "coassociativity": A.check_coassociativity(g)[0],
                "counit": A.check_counit(g),
                "antipode": A.check_antipode_axiom(g) and A.check_antipode_sides(g),
                "grading": A.check_grading(g),
                "pole_free": not R.renormalize(g).has_poles(),
            }
            failed |= not all(checks.values())
            result[th] = checks
        rows.append((g.name, result))

    def render(payload):
        for th, checks in payload.items():
            bad = [k for k, ok in checks.items() if not ok]
            print(f"  {th:5} " + ("ok" if not bad else "FAILED: " + ", ".join(bad)))

    _emit(rows, args.pretty, render)
    return EXIT_AXIOM if failed else 0


def cmd_canon(args, graphs):
    keyf = plain_key if args.plain else ribbon_key
    rows = [(g.name, keyf(g).decode("ascii")) for g in graphs]
    _emit(rows, args.pretty, lambda k: print(f"  {k}"))
    return 0


def cmd_format(args, graphs):
    for g in graphs:
        sys.stdout.write(to_dsl(g, canonical=args.canonical))
    return 0


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hopfgraph", description="Hopf algebras of Feynman and ribbon graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help_, theory=False, theory_default="phi4"):
        c = sub.add_parser(name, help=help_)
        c.add_argument("file", help="graph file in the .g format")
        c.add_argument("--pretty", action="store_true", help="readable table instead of JSON")
        if theory:
            choices = THEORIES + (["all"] if theory_default == "all" else [])
            c.add_argument("--theory", choices=choices, default=theory_default)
        c.set_defaults(func=func)
        return c

    command("classify", cmd_classify, "face counts and genus")
    command("subgraphs", cmd_subgraphs, "divergent subgraphs", theory=True)
    c = command("coproduct", cmd_coproduct, "coproduct of each graph", theory=True)
    c.add_argument("--reduced", action="store_true", help="drop the primitive part")
    command("antipode", cmd_antipode, "antipode of each graph", theory=True)
    c = command("renormalize", cmd_renormalize, "renormalized value under minimal subtraction", theory=True)
    c.add_argument("--rules", help="JSON rules: graph name or canonical key -> series")
    c.add_argument("--window", help="exponent window MIN:MAX (default -8:8 or $HOPFGRAPH_WINDOW)")
    c = command("check", cmd_check, "verify Hopf axioms and pole-freeness", theory=True, theory_default="all")
    c.add_argument("--axioms", action="store_true")
    c.add_argument("--window", help="exponent window MIN:MAX")
    c = command("canon", cmd_canon, "canonical keys")
    c.add_argument("--plain", action="store_true", help="ignore the rotation (plain isomorphism)")
    c = command("format", cmd_format, "re-emit graphs as text")
    c.add_argument("--canonical", action="store_true", help="emit the canonical representative")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help and usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        graphs = load_graphs(args.file)
        return args.func(args, graphs)
    except OSError as exc:
        print(f"hopfgraph: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DSLError as exc:
        print(f"hopfgraph: {args.file}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (GraphError, WindowError, KeyError, ValueError, _UsageError) as exc:
        print(f"hopfgraph: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TruncationError as exc:
        print(f"hopfgraph: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION


if __name__ == "__main__":
    sys.exit(main())
