"""Ribbon-graph topology read off the port rotation.

Half-edges are ports.  ``sigma`` steps to the next port of the same vertex,
``alpha`` swaps the two ports of an internal edge and fixes ports carrying an
external leg.  Faces are the cycles of ``sigma . alpha``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graph import FeynmanGraph, GraphError, PortRef, components, is_connected, subgraph_graph, SubgraphSel


@dataclass(frozen=True)
class FaceTrace:
    faces: tuple[tuple[PortRef, ...], ...]
    broken: frozenset[int]

    @property
    def F(self) -> int:
        return len(self.faces)

    @property
    def B(self) -> int:
        return len(self.broken)


@dataclass(frozen=True)
class TopologyReport:
    V: int
    I: int  # noqa: E741
    E: int
    F: int
    B: int
    g: int

    def as_dict(self) -> dict[str, int]:
        return {"V": self.V, "I": self.I, "E": self.E, "F": self.F, "B": self.B, "g": self.g}


def face_step(graph: FeynmanGraph, h: PortRef) -> PortRef:
    m = graph.mate.get(h)
    a = h if m is None else m
    return PortRef(a.vertex, (a.port + 1) % graph.valences[a.vertex])


def trace_faces(graph: FeynmanGraph) -> FaceTrace:
    """Boundary components of the ribbon surface.

    Each face is listed starting from its least half-edge; faces are ordered
    by that half-edge.
    """
    seen: set[PortRef] = set()
    faces = []
    broken = set()
    legs = graph.leg_at
    for h in sorted(graph.ports()):
        if h in seen:
            continue
        cycle = []
        x = h
        while x not in seen:
            seen.add(x)
            cycle.append(x)
            x = face_step(graph, x)
        if any(x in legs for x in cycle):
            broken.add(len(faces))
        faces.append(tuple(cycle))
    return FaceTrace(tuple(faces), frozenset(broken))


def topology(graph: FeynmanGraph) -> TopologyReport:
    """Counts and genus of a connected ribbon graph."""
    if not is_connected(graph):
        raise GraphError("topology needs a connected graph; use topology_by_component")
    trace = trace_faces(graph)
    twice = 2 - graph.V + graph.I - trace.F
    if twice < 0 or twice % 2:
        raise GraphError(f"Euler characteristic gives genus {twice}/2: corrupt rotation system")
    return TopologyReport(graph.V, graph.I, graph.E, trace.F, trace.B, twice // 2)


def topology_by_component(graph: FeynmanGraph) -> list[TopologyReport]:
    out = []
    for verts in components(graph):
        edges = [i for i, e in enumerate(graph.edges) if e.a.vertex in verts]
        if edges:
            sub, _ = subgraph_graph(graph, SubgraphSel.of(graph, edges))
            # legs of the component are exactly its uncovered ports
            out.append(topology(sub))
        else:
            (v,) = verts
            out.append(TopologyReport(1, 0, graph.valences[v], 1, 1, 0))
    return out


def genus(graph: FeynmanGraph) -> int:
    return topology(graph).g


def is_planar_regular(graph: FeynmanGraph) -> bool:
    t = topology(graph)
    return t.g == 0 and t.B == 1


def is_gw_divergent(graph: FeynmanGraph) -> bool:
    """Planar regular with two or four external legs."""
    from .graph import is_one_particle_irreducible

    if not is_one_particle_irreducible(graph):
        raise GraphError("GW divergence is defined for 1PI graphs only")
    return graph.E in (2, 4) and is_planar_regular(graph)


def boundary_legs(graph: FeynmanGraph) -> list[PortRef]:
    """Ports carrying external legs in the order the broken face meets them.

    Requires exactly one broken face.  The list starts at the least such port.
    """
    trace = trace_faces(graph)
    if trace.B != 1:
        raise GraphError(f"boundary order needs exactly one broken face, found {trace.B}")
    (k,) = trace.broken
    legs = graph.leg_at
    order = [h for h in trace.faces[k] if h in legs]
    start = order.index(min(order))
    return order[start:] + order[:start]


def insertion_defect(host: FeynmanGraph, guest: FeynmanGraph, gluing) -> int:
    """Genus excess ``g(host o guest) - g(host) - g(guest)`` of an insertion."""
    from .surgery import insert

    result = insert(host, guest, gluing)
    return genus(result) - genus(host) - genus(guest)
