"""Canonical keys: byte strings equal exactly for isomorphic graphs.

Two notions of isomorphism are supported.  Ribbon keys (prefix ``R``) allow
vertex relabelling and a cyclic rotation of each vertex's ports; they are
computed by a breadth-first map traversal from every possible starting port.
Plain keys (prefix ``P``) allow any permutation of the ports of a vertex,
i.e. ordinary multigraph isomorphism; they are computed by colour refinement
followed by exhaustive search inside colour classes.

External leg labels never enter a key.  Keys decode back to a representative
graph with :func:`graph_from_key`.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product

from .graph import ExternalLeg, FeynmanGraph, InternalEdge, PortRef, components

CanonicalKey = bytes

RIBBON = b"R"
PLAIN = b"P"


def _ribbon_code(graph: FeynmanGraph, start: PortRef) -> tuple[tuple[int, ...], ...]:
    val = graph.valences
    mate = graph.mate
    order = [start.vertex]
    entry = {start.vertex: start.port}
    index = {start.vertex: 0}
    code = []
    i = 0
    while i < len(order):
        u = order[i]
        k = val[u]
        e = entry[u]
        row = [k]
        for j in range(k):
            partner = mate[PortRef(u, (e + j) % k)]
            if partner is None:
                row.extend((-1, -1))
                continue
            w, q = partner
            if w not in index:
                index[w] = len(order)
                order.append(w)
                entry[w] = q
            row.extend((index[w], (q - entry[w]) % val[w]))
        code.append(tuple(row))
        i += 1
    return tuple(code)


def _ribbon_component(graph: FeynmanGraph, verts: list[int]) -> str:
    best = min(_ribbon_code(graph, PortRef(v, p)) for v in verts for p in range(graph.valences[v]))
    rows = []
    for row in best:
        ents = []
        for j in range(1, len(row), 2):
            ents.append("x" if row[j] < 0 else f"{row[j]}.{row[j + 1]}")
        rows.append(f"{row[0]}:" + ",".join(ents))
    return "/".join(rows)


def _plain_component(graph: FeynmanGraph, verts: list[int]) -> str:
    local = {v: n for n, v in enumerate(verts)}
    n = len(verts)
    mult = [[0] * n for _ in range(n)]
    ext = [0] * n
    for e in graph.edges:
        if e.a.vertex in local:
            a, b = local[e.a.vertex], local[e.b.vertex]
            mult[a][b] += 1
            if a != b:
                mult[b][a] += 1
    for leg in graph.legs:
        if leg.end.vertex in local:
            ext[local[leg.end.vertex]] += 1
    base = [(graph.valences[v], ext[local[v]], mult[local[v]][local[v]]) for v in verts]

    colour = _relabel(base)
    for _ in range(n):
        sig = [
            (colour[a], tuple(sorted((colour[b], mult[a][b]) for b in range(n) if b != a and mult[a][b])))
            for a in range(n)
        ]
        new = _relabel(sig)
        if len(set(new)) == len(set(colour)):
            break
        colour = new

    classes: dict[int, list[int]] = {}
    for a in range(n):
        classes.setdefault(colour[a], []).append(a)
    groups = [classes[c] for c in sorted(classes)]
    best = None
    for choice in product(*(permutations(g) for g in groups)):
        order = [a for part in choice for a in part]
        code = tuple(
            (base[a], tuple(mult[a][b] for b in order[i + 1:])) for i, a in enumerate(order)
        )
        if best is None or code < best:
            best = code
    rows = []
    for (k, x, loops), row in best:
        rows.append(f"{k}.{x}.{loops}:" + ",".join(map(str, row)))
    return "/".join(rows)


def _relabel(items: list) -> list[int]:
    ranks = {c: r for r, c in enumerate(sorted(set(items)))}
    return [ranks[c] for c in items]


def canonical_key(graph: FeynmanGraph, *, ribbon: bool = True) -> CanonicalKey:
    """Canonical encoding of ``graph`` up to (ribbon or plain) isomorphism."""
    comp = _ribbon_component if ribbon else _plain_component
    parts = sorted(comp(graph, verts) for verts in components(graph))
    return (RIBBON if ribbon else PLAIN) + "|".join(parts).encode("ascii")


def ribbon_key(graph: FeynmanGraph) -> CanonicalKey:
    return canonical_key(graph, ribbon=True)


def plain_key(graph: FeynmanGraph) -> CanonicalKey:
    return canonical_key(graph, ribbon=False)


def is_ribbon_key(key: CanonicalKey) -> bool:
    return key[:1] == RIBBON


def _decode_ribbon(body: str):
    valences, pairs, ext = [], [], []
    off = 0
    for comp in body.split("|"):
        rows = comp.split("/")
        for i, row in enumerate(rows):
            k, ents = row.split(":")
            valences.append(int(k))
            for j, ent in enumerate(ents.split(",")):
                here = PortRef(off + i, j)
                if ent == "x":
                    ext.append(here)
                else:
                    w, q = map(int, ent.split("."))
                    there = PortRef(off + w, q)
                    if here < there:
                        pairs.append((here, there))
        off += len(rows)
    return valences, pairs, ext


def _decode_plain(body: str):
    valences, pairs, ext = [], [], []
    off = 0
    for comp in body.split("|"):
        rows = comp.split("/")
        n = len(rows)
        heads = []
        mult = [[0] * n for _ in range(n)]
        for i, row in enumerate(rows):
            head, tail = row.split(":")
            k, x, loops = map(int, head.split("."))
            heads.append((k, x))
            valences.append(k)
            mult[i][i] = loops
            for d, m in enumerate(tail.split(",") if tail else []):
                mult[i][i + 1 + d] = mult[i + 1 + d][i] = int(m)
        nxt = [0] * n

        def take(i: int) -> PortRef:
            nxt[i] += 1
            return PortRef(off + i, nxt[i] - 1)

        # ports per vertex: self-loops, then edges by neighbour, then legs
        port_of: dict[tuple[int, int, int], PortRef] = {}
        for i in range(n):
            for _ in range(mult[i][i]):
                pairs.append((take(i), take(i)))
            for j in range(n):
                if j != i:
                    for c in range(mult[i][j]):
                        port_of[(i, j, c)] = take(i)
        for i in range(n):
            for j in range(i + 1, n):
                for c in range(mult[i][j]):
                    pairs.append((port_of[(i, j, c)], port_of[(j, i, c)]))
        for i, (k, x) in enumerate(heads):
            for _ in range(x):
                ext.append(take(i))
        off += n
    return valences, pairs, ext


@lru_cache(maxsize=None)
def graph_from_key(key: CanonicalKey) -> FeynmanGraph:
    """Representative graph of an isomorphism class (legs labelled f1, f2, ...)."""
    body = key[1:].decode("ascii")
    if not body:
        return FeynmanGraph(())
    decode = _decode_ribbon if is_ribbon_key(key) else _decode_plain
    valences, pairs, ext = decode(body)
    edges = tuple(InternalEdge(a, b, f"e{i + 1}") for i, (a, b) in enumerate(pairs))
    legs = tuple(ExternalLeg(p, f"f{i + 1}") for i, p in enumerate(sorted(ext)))
    return FeynmanGraph(tuple(valences), edges, legs)
