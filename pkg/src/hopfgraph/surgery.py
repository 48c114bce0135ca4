"""Subgraph enumeration, divergence classes, contraction and insertion."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations, permutations
from typing import Iterable

from .canon import ribbon_key
from .graph import (
    ExternalLeg,
    FeynmanGraph,
    GraphError,
    InternalEdge,
    PortRef,
    SubgraphSel,
    is_connected,
    is_one_particle_irreducible,
    require_valid,
    subgraph_graph,
)
from .ribbon import boundary_legs, is_planar_regular, trace_faces


class Theory(str, Enum):
    """Which subgraphs a coproduct sums over."""

    PHI4 = "phi4"
    GW = "gw"
    CORE = "core"


def is_superficially_divergent(graph: FeynmanGraph, theory: Theory | str = Theory.PHI4) -> bool:
    theory = Theory(theory)
    if not is_one_particle_irreducible(graph):
        raise GraphError("superficial divergence is defined for connected 1PI graphs only")
    if theory is Theory.CORE:
        return True
    if graph.E not in (2, 4):
        return False
    return theory is Theory.PHI4 or is_planar_regular(graph)


def _component_ok(graph: FeynmanGraph, sel: SubgraphSel, theory: Theory) -> bool:
    sub, _ = subgraph_graph(graph, sel)
    if not is_one_particle_irreducible(sub):
        return False
    return is_superficially_divergent(sub, theory)


def divergent_subgraphs(graph: FeynmanGraph, theory: Theory | str = Theory.PHI4) -> list[SubgraphSel]:
    """Proper non-empty selections whose connected pieces are all admissible.

    Admissible means 1PI with two or four legs (phi4), additionally planar
    regular (gw), or merely 1PI (core).  Ordered by sorted edge tuple.
    """
    theory = Theory(theory)
    require_valid(graph)
    cache: dict[frozenset[int], bool] = {}
    out = []
    n = graph.I
    for size in range(1, n + 1):
        for es in combinations(range(n), size):
            sel = SubgraphSel.of(graph, es)
            if not sel.is_proper(graph):
                continue
            good = True
            for comp in sel.components(graph):
                ok = cache.get(comp.edges)
                if ok is None:
                    ok = cache[comp.edges] = _component_ok(graph, comp, theory)
                if not ok:
                    good = False
                    break
            if good:
                out.append(sel)
    out.sort(key=SubgraphSel.sorted_edges)
    return out


def connected_divergent_subgraphs(graph: FeynmanGraph, theory: Theory | str = Theory.PHI4) -> list[SubgraphSel]:
    return [s for s in divergent_subgraphs(graph, theory) if len(s.components(graph)) == 1]


class _Builder:
    """Mutable half-edge structure used while rewiring a graph."""

    def __init__(self, graph: FeynmanGraph):
        self.valence: dict[int, int] = dict(enumerate(graph.valences))
        self.edges: dict[int, tuple[PortRef, PortRef]] = {}
        self.edge_at: dict[PortRef, int] = {}
        self.leg_at: dict[PortRef, str] = {}
        self.next_vertex = graph.V
        self.next_edge = 0
        for e in graph.edges:
            self.add_edge(e.a, e.b)
        for leg in graph.legs:
            self.leg_at[leg.end] = leg.label

    def add_vertex(self, k: int) -> int:
        v = self.next_vertex
        self.next_vertex += 1
        self.valence[v] = k
        return v

    def add_edge(self, a: PortRef, b: PortRef) -> int:
        i = self.next_edge
        self.next_edge += 1
        self.edges[i] = (a, b)
        self.edge_at[a] = i
        self.edge_at[b] = i
        return i

    def remove_edge(self, i: int) -> None:
        a, b = self.edges.pop(i)
        del self.edge_at[a]
        del self.edge_at[b]

    def partner(self, p: PortRef) -> PortRef | str:
        """Opposite port of the edge at ``p``, or the label of the leg there."""
        if p in self.leg_at:
            return self.leg_at[p]
        a, b = self.edges[self.edge_at[p]]
        return b if a == p else a

    def detach(self, p: PortRef) -> None:
        if p in self.leg_at:
            del self.leg_at[p]
        elif p in self.edge_at:
            self.remove_edge(self.edge_at[p])

    def remove_vertex(self, v: int) -> None:
        for q in range(self.valence[v]):
            self.detach(PortRef(v, q))
        del self.valence[v]

    def freeze(self) -> tuple[FeynmanGraph, dict[int, int], dict[int, int]]:
        vmap = {v: n for n, v in enumerate(sorted(self.valence))}
        emap = {i: n for n, i in enumerate(sorted(self.edges))}

        def rn(p: PortRef) -> PortRef:
            return PortRef(vmap[p.vertex], p.port)

        edges = []
        for i in sorted(self.edges):
            a, b = self.edges[i]
            a, b = sorted((rn(a), rn(b)))
            edges.append(InternalEdge(a, b, f"e{len(edges) + 1}"))
        legs = sorted((ExternalLeg(rn(p), lab) for p, lab in self.leg_at.items()), key=lambda l: l.end)
        graph = FeynmanGraph(tuple(self.valence[v] for v in sorted(self.valence)), tuple(edges), tuple(legs))
        return graph, vmap, emap


def _leg_order(graph: FeynmanGraph, sub: FeynmanGraph, back: dict[PortRef, PortRef]) -> list[PortRef]:
    """Host ports of a component's legs, in boundary order when it has one broken face."""
    if trace_faces(sub).B == 1:
        return [back[p] for p in boundary_legs(sub)]
    return sorted(back[leg.end] for leg in sub.legs)


@dataclass(frozen=True)
class Contraction:
    graph: FeynmanGraph
    sites: tuple[tuple[str, int], ...]
    # host edge index -> result edge index, for host edges that survive
    edge_map: dict[int, int]


def contract_sites(graph: FeynmanGraph, sel: SubgraphSel, *, to_vertex: bool = False) -> Contraction:
    """Shrink every component of ``sel``; also report where each one went.

    Each site is ``("vertex", v)`` or ``("edge", i)`` in the result, listed in
    component order.  With ``to_vertex`` every component becomes a single vertex
    of its own leg count (core Hopf algebra); otherwise two-leg components become
    an edge and four-leg components a vertex.
    """
    require_valid(graph)
    if not sel.edges or not sel.is_proper(graph):
        raise GraphError("contraction needs a proper non-empty selection")
    b = _Builder(graph)
    pending: list[tuple[str, int]] = []
    current = {i: i for i in range(graph.I) if i not in sel.edges}
    for comp in sel.components(graph):
        sub, back = subgraph_graph(graph, comp)
        if not is_one_particle_irreducible(sub):
            raise GraphError(f"component {sorted(comp.edges)} is not 1PI")
        if not to_vertex and sub.E not in (2, 4):
            raise GraphError(f"component {sorted(comp.edges)} has {sub.E} legs; only 2 or 4 shrink")
        order = _leg_order(graph, sub, back)
        outer = [b.partner(p) for p in order]
        # edges leaving the component get rebuilt; earlier sites on them must follow
        old_edge = {p: b.edge_at[p] for p in order if p in b.edge_at}
        new_edge: dict[PortRef, int] = {}
        for i in comp.edges:
            b.remove_edge(i)
        for v in comp.vertices:
            b.remove_vertex(v)
        if to_vertex or sub.E == 4:
            nv = b.add_vertex(len(order))
            slot = {p: PortRef(nv, j) for j, p in enumerate(order)}
            for j, o in enumerate(outer):
                here = PortRef(nv, j)
                if isinstance(o, str):
                    b.leg_at[here] = o
                elif o in slot:
                    # chord between two legs of the component: becomes a self-loop
                    if slot[o] > here:
                        new_edge[order[j]] = b.add_edge(here, slot[o])
                else:
                    new_edge[order[j]] = b.add_edge(here, o)
            pending.append(("vertex", nv))
        else:
            o1, o2 = outer
            if isinstance(o1, str) and isinstance(o2, str):
                raise GraphError("two-leg component with both legs external shrinks to a bare line")
            if o1 in order or o2 in order:
                raise GraphError("two-leg component closed on itself shrinks to a vacuum loop")
            if isinstance(o1, str):
                b.leg_at[o2] = o1
                pending.append(("leg", o1))
            elif isinstance(o2, str):
                b.leg_at[o1] = o2
                pending.append(("leg", o2))
            else:
                e = b.add_edge(o1, o2)
                new_edge = {p: e for p in order}
                pending.append(("edge", e))
        moved = {old_edge[p]: new_edge[p] for p in old_edge if p in new_edge}
        pending = [(k, moved.get(x, x)) if k == "edge" else (k, x) for k, x in pending]
        current = {h: moved.get(x, x) for h, x in current.items()}
        current = {h: x for h, x in current.items() if x in b.edges}
    result, vmap, emap = b.freeze()
    sites = []
    for kind, x in pending:
        if kind == "vertex":
            sites.append(("vertex", vmap[x]))
        elif kind == "edge":
            sites.append(("edge", emap[x]))
        else:
            sites.append(("leg", next(i for i, leg in enumerate(result.legs) if leg.label == x)))
    return Contraction(result, tuple(sites), {h: emap[x] for h, x in sorted(current.items())})


def contract(graph: FeynmanGraph, sel: SubgraphSel | Iterable[int], *, to_vertex: bool = False) -> FeynmanGraph:
    """Cograph ``graph / sel``."""
    if not isinstance(sel, SubgraphSel):
        sel = SubgraphSel.of(graph, sel)
    return contract_sites(graph, sel, to_vertex=to_vertex).graph


@dataclass(frozen=True)
class GluingData:
    """Where and how a guest graph is glued into a host.

    ``kind`` is ``"vertex"`` or ``"edge"``; ``site`` the host vertex or internal
    edge index.  ``assignment`` maps each guest leg label to a host port number
    (vertex site) or to an end ``0``/``1`` of the host edge (edge site).
    """

    kind: str
    site: int
    assignment: tuple[tuple[str, int], ...]

    @classmethod
    def make(cls, kind: str, site: int, assignment: dict[str, int]) -> GluingData:
        return cls(kind, site, tuple(sorted(assignment.items())))

    def as_dict(self) -> dict[str, int]:
        return dict(self.assignment)


def _check_gluing(host: FeynmanGraph, guest: FeynmanGraph, gluing: GluingData) -> None:
    labels = sorted(leg.label for leg in guest.legs)
    mapping = gluing.as_dict()
    if gluing.kind == "vertex":
        if not 0 <= gluing.site < host.V:
            raise GraphError(f"no vertex {gluing.site} in host")
        arity = host.valences[gluing.site]
    elif gluing.kind == "edge":
        if not 0 <= gluing.site < host.I:
            raise GraphError(f"no internal edge {gluing.site} in host")
        arity = 2
    else:
        raise GraphError(f"unknown site kind {gluing.kind!r}")
    if guest.E != arity:
        raise GraphError(f"guest has {guest.E} legs but the {gluing.kind} site takes {arity}")
    if sorted(mapping) != labels or sorted(mapping.values()) != list(range(arity)):
        raise GraphError("gluing is not a bijection between guest legs and site slots")


@dataclass(frozen=True)
class Insertion:
    graph: FeynmanGraph
    image: tuple[int, ...]


def insert_image(host: FeynmanGraph, guest: FeynmanGraph, gluing: GluingData) -> Insertion:
    """Insert and report the edge indices that carry the guest in the result."""
    require_valid(host)
    require_valid(guest)
    if not is_one_particle_irreducible(guest):
        raise GraphError("only connected 1PI graphs can be inserted")
    _check_gluing(host, guest, gluing)
    b = _Builder(host)
    vshift = {}
    for v, k in enumerate(guest.valences):
        vshift[v] = b.add_vertex(k)

    def gp(p: PortRef) -> PortRef:
        return PortRef(vshift[p.vertex], p.port)

    image = [b.add_edge(gp(e.a), gp(e.b)) for e in guest.edges]
    guest_port = {leg.label: gp(leg.end) for leg in guest.legs}
    mapping = gluing.as_dict()
    if gluing.kind == "vertex":
        v = gluing.site
        slot = {}
        for label, p in mapping.items():
            slot[PortRef(v, p)] = guest_port[label]
        outer = {h: b.partner(h) for h in sorted(slot)}
        b.remove_vertex(v)
        for h, o in outer.items():
            here = slot[h]
            if isinstance(o, str):
                b.leg_at[here] = o
            elif o.vertex == v:
                if h < o:
                    b.add_edge(here, slot[o])
            else:
                b.add_edge(here, o)
    else:
        ends = host.edges[gluing.site][:2]
        b.remove_edge(gluing.site)
        for label, end in sorted(mapping.items(), key=lambda kv: kv[1]):
            b.add_edge(guest_port[label], ends[end])
    result, _, emap = b.freeze()
    return Insertion(result, tuple(emap[i] for i in image))


def insert(host: FeynmanGraph, guest: FeynmanGraph, gluing: GluingData) -> FeynmanGraph:
    """Graph obtained by gluing ``guest`` into ``host`` at the gluing's site."""
    return insert_image(host, guest, gluing).graph


def guest_leg_order(guest: FeynmanGraph) -> list[str]:
    """Guest leg labels in boundary order when the guest has one broken face, else sorted."""
    if is_connected(guest) and trace_faces(guest).B == 1:
        at = guest.leg_at
        return [at[p] for p in boundary_legs(guest)]
    return sorted(leg.label for leg in guest.legs)


def enumerate_gluings(host: FeynmanGraph, site: tuple[str, int], guest: FeynmanGraph,
                      *, up_to_rotation: bool = True) -> list[GluingData]:
    """Gluing data for inserting ``guest`` at ``site`` (``("vertex", v)`` or ``("edge", i)``).

    At a k-valent vertex all k! bijections are produced, or, with
    ``up_to_rotation``, the (k-1)! that send the first guest leg (in boundary
    order) to port 0.  At an edge the two orientations are produced; with
    ``up_to_rotation`` orientations giving ribbon-isomorphic results are merged.
    """
    kind, where = site
    legs = guest_leg_order(guest)
    if kind == "vertex":
        k = host.valences[where]
        if guest.E != k:
            raise GraphError(f"guest has {guest.E} legs but vertex {where} has valence {k}")
        if up_to_rotation:
            ports = [(0,) + rest for rest in permutations(range(1, k))]
        else:
            ports = list(permutations(range(k)))
        return [GluingData.make("vertex", where, dict(zip(legs, ps))) for ps in ports]
    if kind == "edge":
        if guest.E != 2:
            raise GraphError(f"guest has {guest.E} legs but an edge site takes 2")
        out = [GluingData.make("edge", where, dict(zip(legs, ends))) for ends in ((0, 1), (1, 0))]
        if up_to_rotation:
            seen = set()
            kept = []
            for g in out:
                key = ribbon_key(insert(host, guest, g))
                if key not in seen:
                    seen.add(key)
                    kept.append(g)
            out = kept
        return out
    raise GraphError(f"unknown site kind {kind!r}")


def is_order_respecting(host: FeynmanGraph, guest: FeynmanGraph, gluing: GluingData) -> bool:
    """True if boundary-consecutive guest legs land on rotation-consecutive host ports."""
    legs = guest_leg_order(guest)
    mapping = gluing.as_dict()
    if gluing.kind == "edge":
        return True
    k = host.valences[gluing.site]
    first = mapping[legs[0]]
    return all(mapping[lab] == (first + i) % k for i, lab in enumerate(legs))


def sites(graph: FeynmanGraph, arity: int) -> list[tuple[str, int]]:
    """All insertion sites accepting a guest with ``arity`` legs."""
    if arity == 2:
        return [("edge", i) for i in range(graph.I)]
    return [("vertex", v) for v, k in enumerate(graph.valences) if k == arity]
