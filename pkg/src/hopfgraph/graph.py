"""Feynman graph data model.

A graph is a set of vertices, each carrying an ordered list of ports, a set of
internal edges pairing two ports, and a set of labelled external legs sitting
on single ports.  The port order of a vertex is its rotation: it is ignored by
the commutative (phi^4, core) machinery and read cyclically by :mod:`ribbon`.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

PHI4_VALENCE = 4


class GraphError(ValueError):
    """Raised when an operation receives a graph it cannot act on."""


class PortRef(NamedTuple):
    vertex: int
    port: int

    def __str__(self) -> str:
        return f"v{self.vertex}.{self.port}"


class InternalEdge(NamedTuple):
    a: PortRef
    b: PortRef
    label: str = ""


class ExternalLeg(NamedTuple):
    end: PortRef
    label: str


def _port(p) -> PortRef:
    return p if isinstance(p, PortRef) else PortRef(*p)


@dataclass(frozen=True)
class FeynmanGraph:
    """Immutable Feynman graph.

    ``valences[v]`` is the number of ports of vertex ``v``; ports are numbered
    ``0 .. valences[v] - 1`` in rotation order.  Equality is structural and
    includes labels; isomorphism is decided by :func:`hopfgraph.canon.canonical_key`.
    """

    valences: tuple[int, ...]
    edges: tuple[InternalEdge, ...] = ()
    legs: tuple[ExternalLeg, ...] = ()
    name: str | None = field(default=None, compare=False)
    vertex_names: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "valences", tuple(int(k) for k in self.valences))
        edges = []
        for i, e in enumerate(self.edges):
            a, b, *rest = e
            label = rest[0] if rest and rest[0] else f"e{i + 1}"
            edges.append(InternalEdge(_port(a), _port(b), label))
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(
            self, "legs", tuple(ExternalLeg(_port(end), str(lab)) for end, lab in self.legs)
        )
        if self.vertex_names is not None:
            object.__setattr__(self, "vertex_names", tuple(self.vertex_names))

    @property
    def V(self) -> int:
        return len(self.valences)

    @property
    def I(self) -> int:  # noqa: E743
        return len(self.edges)

    @property
    def E(self) -> int:
        return len(self.legs)

    def ports(self) -> Iterable[PortRef]:
        for v, k in enumerate(self.valences):
            for p in range(k):
                yield PortRef(v, p)

    def vertex_name(self, v: int) -> str:
        if self.vertex_names is not None:
            return self.vertex_names[v]
        return f"v{v}"

    @cached_property
    def mate(self) -> dict[PortRef, PortRef | None]:
        """Port -> opposite port of its internal edge, or ``None`` for a leg.

        Only meaningful on graphs that pass :func:`validate`.
        """
        m: dict[PortRef, PortRef | None] = {}
        for e in self.edges:
            m[e.a] = e.b
            m[e.b] = e.a
        for leg in self.legs:
            m[leg.end] = None
        return m

    @cached_property
    def edge_at(self) -> dict[PortRef, int]:
        out = {}
        for i, e in enumerate(self.edges):
            out[e.a] = i
            out[e.b] = i
        return out

    @cached_property
    def leg_at(self) -> dict[PortRef, str]:
        return {leg.end: leg.label for leg in self.legs}

    def with_name(self, name: str | None) -> FeynmanGraph:
        return FeynmanGraph(self.valences, self.edges, self.legs, name, self.vertex_names)

    def __repr__(self) -> str:
        tag = f" {self.name!r}" if self.name else ""
        return f"<FeynmanGraph{tag} V={self.V} I={self.I} E={self.E}>"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]
    V: int
    I: int  # noqa: E741
    E: int

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate(graph: FeynmanGraph, *, phi4: bool = True) -> ValidationReport:
    """Check port occupancy, labels and the counting identity.

    With ``phi4`` every vertex must be 4-valent, so the identity reads
    ``4V = 2I + E``; otherwise the sum of valences replaces ``4V``.
    """
    out: list[str] = []
    occupancy: Counter[PortRef] = Counter()
    for v, k in enumerate(graph.valences):
        if k < 1:
            out.append(f"vertex v{v} has no ports")
        elif phi4 and k != PHI4_VALENCE:
            out.append(f"vertex v{v} has valence {k}, expected {PHI4_VALENCE}")

    def check_end(p: PortRef, what: str) -> None:
        if not 0 <= p.vertex < graph.V:
            out.append(f"{what} dangles at missing vertex v{p.vertex}")
        elif not 0 <= p.port < graph.valences[p.vertex]:
            out.append(f"{what} uses bad port {p.port} of v{p.vertex}")
        else:
            occupancy[p] += 1

    for e in graph.edges:
        if e.a == e.b:
            out.append(f"edge {e.label} uses port {e.a.port} of v{e.a.vertex} twice")
        check_end(e.a, f"edge {e.label}")
        check_end(e.b, f"edge {e.label}")
    labels: Counter[str] = Counter()
    for leg in graph.legs:
        labels[leg.label] += 1
        check_end(leg.end, f"external leg {leg.label}")
    for lab, n in sorted(labels.items()):
        if n > 1:
            out.append(f"duplicate external label {lab}")
    for p in graph.ports():
        n = occupancy[p]
        if n == 0:
            out.append(f"port {p.port} of v{p.vertex} unoccupied")
        elif n > 1:
            out.append(f"port {p.port} of v{p.vertex} occupied {n} times")
    lhs = sum(graph.valences)
    if lhs != 2 * graph.I + graph.E:
        lead = f"4V={lhs}" if phi4 else f"sum of valences={lhs}"
        out.append(f"{lead} != 2I+E={2 * graph.I + graph.E}")
    return ValidationReport(tuple(out), graph.V, graph.I, graph.E)


def require_valid(graph: FeynmanGraph, *, phi4: bool = False) -> None:
    report = validate(graph, phi4=phi4)
    if not report.ok:
        raise GraphError("invalid graph: " + "; ".join(report.violations))


def components(graph: FeynmanGraph) -> list[list[int]]:
    """Vertex sets of the connected components, each sorted, ordered by least vertex."""
    parent = list(range(graph.V))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in graph.edges:
        ra, rb = find(e.a.vertex), find(e.b.vertex)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for v in range(graph.V):
        groups.setdefault(find(v), []).append(v)
    return [groups[r] for r in sorted(groups)]


def is_connected(graph: FeynmanGraph) -> bool:
    return graph.V > 0 and len(components(graph)) == 1


def loop_number(graph: FeynmanGraph) -> int:
    """First Betti number ``I - V + C``."""
    return graph.I - graph.V + len(components(graph))


def _connected_without(graph: FeynmanGraph, skip: int) -> bool:
    adj: dict[int, list[int]] = {v: [] for v in range(graph.V)}
    for i, e in enumerate(graph.edges):
        if i != skip:
            adj[e.a.vertex].append(e.b.vertex)
            adj[e.b.vertex].append(e.a.vertex)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == graph.V


def is_one_particle_irreducible(graph: FeynmanGraph) -> bool:
    """Connected, with no internal edge whose removal disconnects the graph."""
    if not is_connected(graph):
        return False
    return all(
        e.a.vertex == e.b.vertex or _connected_without(graph, i)
        for i, e in enumerate(graph.edges)
    )


def relabel(graph: FeynmanGraph, order: Sequence[int], port_maps: Sequence[Sequence[int]] | None = None,
            *, shuffle_edges: Sequence[int] | None = None) -> FeynmanGraph:
    """An isomorphic copy: old vertex ``order[n]`` becomes vertex ``n``.

    ``port_maps[v][p]`` is the new port of old port ``p`` of old vertex ``v``
    (a cyclic shift keeps the ribbon class, any permutation the plain class).
    ``shuffle_edges`` reorders the edge list.
    """
    new_v = {old: n for n, old in enumerate(order)}

    def move(p: PortRef) -> PortRef:
        q = port_maps[p.vertex][p.port] if port_maps is not None else p.port
        return PortRef(new_v[p.vertex], q)

    edges = [InternalEdge(move(e.a), move(e.b), e.label) for e in graph.edges]
    if shuffle_edges is not None:
        edges = [edges[i] for i in shuffle_edges]
    legs = [ExternalLeg(move(leg.end), leg.label) for leg in graph.legs]
    return FeynmanGraph(tuple(graph.valences[old] for old in order), tuple(edges), tuple(legs), name=graph.name)


def disjoint_union(*graphs: FeynmanGraph) -> FeynmanGraph:
    """Juxtapose graphs; leg labels are suffixed with the factor index when they clash."""
    valences: list[int] = []
    edges: list[InternalEdge] = []
    legs: list[ExternalLeg] = []
    seen: set[str] = set()
    for n, g in enumerate(graphs):
        off = len(valences)
        valences.extend(g.valences)
        for e in g.edges:
            edges.append(InternalEdge(PortRef(e.a.vertex + off, e.a.port),
                                      PortRef(e.b.vertex + off, e.b.port)))
        for leg in g.legs:
            label = leg.label if leg.label not in seen else f"{leg.label}_{n}"
            seen.add(label)
            legs.append(ExternalLeg(PortRef(leg.end.vertex + off, leg.end.port), label))
    return FeynmanGraph(tuple(valences), tuple(edges), tuple(legs))


@dataclass(frozen=True)
class SubgraphSel:
    """A set of internal edges together with the vertices they are hooked to."""

    edges: frozenset[int]
    vertices: frozenset[int]

    @classmethod
    def of(cls, graph: FeynmanGraph, edges: Iterable[int]) -> SubgraphSel:
        es = frozenset(edges)
        vs = set()
        for i in es:
            e = graph.edges[i]
            vs.add(e.a.vertex)
            vs.add(e.b.vertex)
        return cls(es, frozenset(vs))

    def is_proper(self, graph: FeynmanGraph) -> bool:
        return len(self.edges) != graph.I or len(self.vertices) != graph.V

    def sorted_edges(self) -> tuple[int, ...]:
        return tuple(sorted(self.edges))

    def components(self, graph: FeynmanGraph) -> list[SubgraphSel]:
        """Split into connected pieces, ordered by least edge index."""
        parent: dict[int, int] = {v: v for v in self.vertices}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in self.edges:
            e = graph.edges[i]
            ra, rb = find(e.a.vertex), find(e.b.vertex)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        groups: dict[int, list[int]] = {}
        for i in sorted(self.edges):
            groups.setdefault(find(graph.edges[i].a.vertex), []).append(i)
        return sorted((SubgraphSel.of(graph, es) for es in groups.values()),
                      key=lambda s: min(s.edges))


def subgraph_graph(graph: FeynmanGraph, sel: SubgraphSel) -> tuple[FeynmanGraph, dict[PortRef, PortRef]]:
    """Standalone copy of a (truncated) subgraph.

    Every port of a hooked vertex not covered by a selected edge becomes an
    external leg.  Returns the graph and the map from its ports to the host's.
    """
    verts = sorted(sel.vertices)
    index = {v: n for n, v in enumerate(verts)}
    back: dict[PortRef, PortRef] = {}
    for v in verts:
        for p in range(graph.valences[v]):
            back[PortRef(index[v], p)] = PortRef(v, p)
    edges = []
    covered = set()
    for i in sorted(sel.edges):
        e = graph.edges[i]
        edges.append(InternalEdge(PortRef(index[e.a.vertex], e.a.port),
                                  PortRef(index[e.b.vertex], e.b.port), e.label))
        covered.update((e.a, e.b))
    legs = []
    for v in verts:
        for p in range(graph.valences[v]):
            port = PortRef(v, p)
            if port not in covered:
                label = graph.leg_at.get(port, f"h{v}.{p}")
                legs.append(ExternalLeg(PortRef(index[v], p), label))
    names = tuple(graph.vertex_name(v) for v in verts)
    return FeynmanGraph(tuple(graph.valences[v] for v in verts), tuple(edges), tuple(legs),
                        vertex_names=names), back
