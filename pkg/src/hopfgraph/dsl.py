"""Text format for graphs.

::

    # one-loop correction to the propagator
    graph tadpole_p {
        vertex v0;
        edge e1: v0.0 -- v0.1;
        ext f1: v0.2;
        ext f2: v0.3;
    }

Ports are written ``vertex.port`` and their numbering is the rotation at the
vertex, so a graph's ribbon structure is fully determined by the text.
``#`` starts a comment.  Statements end with ``;``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .canon import canonical_key, graph_from_key
from .graph import PHI4_VALENCE, ExternalLeg, FeynmanGraph, InternalEdge, PortRef, validate


class DSLError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<dash>--)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<int>[0-9]+)
  | (?P<sym>[{};:.])
""", re.VERBOSE)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lex(text: str) -> list[_Tok]:
    toks = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DSLError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _lex(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Tok:
        tok = self.next()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = repr(text) if text else kind
            got = repr(tok.text) if tok.text else "end of input"
            raise DSLError(f"expected {want}, found {got}", tok.line, tok.col)
        return tok

    def graphs(self) -> list[FeynmanGraph]:
        out = []
        seen: set[str] = set()
        while self.peek().kind != "eof":
            head = self.expect("ident", "graph")
            name = self.expect("ident")
            if name.text in seen:
                raise DSLError(f"duplicate graph name {name.text!r}", name.line, name.col)
            seen.add(name.text)
            out.append(self.body(name.text, head))
        return out

    def port(self, verts: dict[str, int]) -> tuple[PortRef, _Tok]:
        vt = self.expect("ident")
        self.expect("sym", ".")
        pt = self.expect("int")
        if vt.text not in verts:
            raise DSLError(f"unknown vertex {vt.text!r}", vt.line, vt.col)
        p = int(pt.text)
        if p >= PHI4_VALENCE:
            raise DSLError(f"bad port index {p}: ports run 0..{PHI4_VALENCE - 1}", pt.line, pt.col)
        return PortRef(verts[vt.text], p), vt

    def body(self, name: str, head: _Tok) -> FeynmanGraph:
        self.expect("sym", "{")
        verts: dict[str, int] = {}
        edges: list[InternalEdge] = []
        legs: list[ExternalLeg] = []
        labels: set[str] = set()
        used: set[PortRef] = set()

        def occupy(p: PortRef, tok: _Tok) -> None:
            if p in used:
                raise DSLError(f"port reused: {tok.text}.{p.port}", tok.line, tok.col)
            used.add(p)

        while True:
            tok = self.next()
            if tok.kind == "sym" and tok.text == "}":
                break
            if tok.kind != "ident" or tok.text not in ("vertex", "edge", "ext"):
                got = repr(tok.text) if tok.text else "end of input"
                raise DSLError(f"expected 'vertex', 'edge', 'ext' or '}}', found {got}", tok.line, tok.col)
            label = self.expect("ident")
            if tok.text == "vertex":
                if label.text in verts:
                    raise DSLError(f"duplicate vertex {label.text!r}", label.line, label.col)
                verts[label.text] = len(verts)
            else:
                if label.text in labels:
                    raise DSLError(f"duplicate label {label.text!r}", label.line, label.col)
                labels.add(label.text)
                self.expect("sym", ":")
                a, at = self.port(verts)
                occupy(a, at)
                if tok.text == "edge":
                    self.expect("dash")
                    b, bt = self.port(verts)
                    occupy(b, bt)
                    edges.append(InternalEdge(a, b, label.text))
                else:
                    legs.append(ExternalLeg(a, label.text))
            self.expect("sym", ";")
        graph = FeynmanGraph((PHI4_VALENCE,) * len(verts), tuple(edges), tuple(legs), name=name,
                             vertex_names=tuple(verts))
        report = validate(graph)
        if not report.ok:
            raise DSLError(f"graph {name!r} is invalid: " + "; ".join(report.violations), head.line, head.col)
        return graph


def parse_graph_source(text: str) -> list[FeynmanGraph]:
    """Every graph in ``text``, validated, in file order."""
    return _Parser(text).graphs()


def load_graphs(path) -> list[FeynmanGraph]:
    with open(path, encoding="utf-8") as fh:
        return parse_graph_source(fh.read())


def to_dsl(graph: FeynmanGraph, name: str | None = None, *, canonical: bool = False) -> str:
    """Text for ``graph``; with ``canonical`` the representative of its ribbon class."""
    name = name or graph.name or "g"
    if canonical:
        graph = graph_from_key(canonical_key(graph))
    vnames = [graph.vertex_name(v) if not canonical else f"v{v}" for v in range(graph.V)]
    if len(set(vnames)) != len(vnames) or not all(_IDENT.match(n) for n in vnames):
        vnames = [f"v{v}" for v in range(graph.V)]
    lines = [f"graph {name} {{"]
    lines += [f"    vertex {n};" for n in vnames]

    def ref(p: PortRef) -> str:
        return f"{vnames[p.vertex]}.{p.port}"

    taken: set[str] = set()

    def label(text: str, fallback: str) -> str:
        out = text if _IDENT.match(text) and text not in taken else fallback
        while out in taken:
            out += "_"
        taken.add(out)
        return out

    for i, e in enumerate(graph.edges):
        lines.append(f"    edge {label(e.label, f'e{i + 1}')}: {ref(e.a)} -- {ref(e.b)};")
    for i, leg in enumerate(graph.legs):
        lines.append(f"    ext {label(leg.label, f'f{i + 1}')}: {ref(leg.end)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
