"""Exhaustive structural checks over graph corpora.

Each function returns a list of failure descriptions; an empty list means the
property held on every instance examined.  A ``stats`` dict, when passed, is
filled with the number of instances checked.
"""
from __future__ import annotations

from typing import Iterable

from .canon import canonical_key
from .graph import FeynmanGraph, SubgraphSel, is_one_particle_irreducible, subgraph_graph
from .ribbon import genus, is_planar_regular, topology, trace_faces
from .surgery import (
    Theory,
    connected_divergent_subgraphs,
    contract,
    contract_sites,
    divergent_subgraphs,
    enumerate_gluings,
    insert,
    insert_image,
    is_order_respecting,
    is_superficially_divergent,
    sites,
)


def _bump(stats: dict | None, name: str, n: int = 1) -> None:
    if stats is not None:
        stats[name] = stats.get(name, 0) + n


def _guests(graphs: Iterable[FeynmanGraph]) -> list[FeynmanGraph]:
    return [g for g in graphs if g.E in (2, 4) and is_one_particle_irreducible(g)]


def insertion_count_laws(graphs: list[FeynmanGraph], stats: dict | None = None) -> list[str]:
    """``V``, ``I`` and ``E`` of every insertion among ``graphs`` against the counting laws."""
    bad = []
    for host in graphs:
        for guest in _guests(graphs):
            for site in sites(host, guest.E):
                for gl in enumerate_gluings(host, site, guest, up_to_rotation=False):
                    r = insert(host, guest, gl)
                    two = guest.E == 2
                    v = host.V + guest.V - (0 if two else 1)
                    i = host.I + guest.I + (1 if two else 0)
                    ok = (r.V, r.I, r.E) == (v, i, host.E) and 4 * r.V == 2 * r.I + r.E
                    _bump(stats, "insertions")
                    if not ok:
                        bad.append(f"{host.name}<-{guest.name} at {site}: V,I,E={r.V},{r.I},{r.E}")
    return bad


def contraction_duality(graphs: list[FeynmanGraph], *, ribbon: bool = False, max_edges: int = 8,
                        stats: dict | None = None) -> list[str]:
    """``g'' = g / g'`` exactly when some gluing gives ``g = g'' o_G g'``.

    Forward: every connected divergent ``g'`` of every corpus graph ``g`` is
    contracted, and some gluing of ``g'`` into the resulting site must rebuild
    ``g``.  Backward: every insertion ``g'' o_G g'`` of corpus graphs within the
    size bound must contract back to ``g''`` at the image of ``g'``, and that
    image must be a divergent subgraph isomorphic to ``g'``.

    With ``ribbon`` the backward direction runs over order-respecting gluings
    only: contraction lays out the new vertex in boundary order, so a twisted
    gluing contracts back to a rotated cousin of ``g''``, not to ``g''``.
    """
    theory = Theory.GW if ribbon else Theory.PHI4
    bad = []

    def key(g: FeynmanGraph) -> bytes:
        return canonical_key(g, ribbon=ribbon)

    for g in graphs:
        target = key(g)
        for sel in connected_divergent_subgraphs(g, theory):
            guest, _ = subgraph_graph(g, sel)
            c = contract_sites(g, sel)
            (site,) = c.sites
            _bump(stats, "forward")
            if site[0] == "leg":
                bad.append(f"{g.name}: subgraph {sorted(sel.edges)} contracts onto a leg")
                continue
            if not any(key(insert(c.graph, guest, gl)) == target
                       for gl in enumerate_gluings(c.graph, site, guest, up_to_rotation=False)):
                bad.append(f"{g.name}: no gluing rebuilds it from subgraph {sorted(sel.edges)}")

    guests = [g for g in _guests(graphs) if is_superficially_divergent(g, theory)]
    for host in graphs:
        hk = key(host)
        for guest in guests:
            extra = 1 if guest.E == 2 else 0
            if host.I + guest.I + extra > max_edges:
                continue
            gk = key(guest)
            for site in sites(host, guest.E):
                for gl in enumerate_gluings(host, site, guest, up_to_rotation=False):
                    ins = insert_image(host, guest, gl)
                    image = SubgraphSel.of(ins.graph, ins.image)
                    if ribbon and not is_order_respecting(host, guest, gl):
                        continue
                    _bump(stats, "backward")
                    sub = subgraph_graph(ins.graph, image)[0]
                    ok = (
                        key(contract(ins.graph, image)) == hk
                        and key(sub) == gk
                        and image.is_proper(ins.graph)
                        and is_superficially_divergent(sub, theory)
                    )
                    if not ok:
                        bad.append(f"{host.name}<-{guest.name} at {site} via {gl.as_dict()}")
    return bad


def regular_cograph_closure(graphs: list[FeynmanGraph], stats: dict | None = None) -> list[str]:
    """Shrinking a planar-regular divergent subgraph of a planar-regular graph keeps it planar regular."""
    bad = []
    for g in graphs:
        if not is_planar_regular(g):
            continue
        for sel in divergent_subgraphs(g, Theory.GW):
            _bump(stats, "cographs")
            q = contract(g, sel)
            if not is_planar_regular(q):
                t = topology(q)
                bad.append(f"{g.name}/{sorted(sel.edges)}: g={t.g} B={t.B}")
    return bad


def regular_gluing_exists(graphs: list[FeynmanGraph], stats: dict | None = None) -> list[str]:
    """Each pair of planar-regular graphs admits a gluing with defect 0 and one broken face."""
    regular = [g for g in graphs if is_planar_regular(g)]
    bad = []
    for host in regular:
        for guest in _guests(regular):
            _bump(stats, "pairs")
            found = False
            for site in sites(host, guest.E):
                for gl in enumerate_gluings(host, site, guest, up_to_rotation=False):
                    r = insert(host, guest, gl)
                    if genus(r) == genus(host) + genus(guest) and trace_faces(r).B == 1:
                        found = True
                        break
                if found:
                    break
            if not found:
                bad.append(f"{host.name}<-{guest.name}")
    return bad


def four_point_defects(hosts: list[FeynmanGraph], guests: list[FeynmanGraph], *, max_edges: int = 6,
                       order_respecting_only: bool = False, stats: dict | None = None) -> list[str]:
    """Every gluing of a regular 4-point guest into a vertex: ``n >= 0``, ``B0 >= B1`` and the face law.

    The face law is ``F0 = F2 - 1 + F1 - 2n``, which Euler's formula forces.
    Order-respecting gluings must have ``n = 0``.
    """
    bad = []
    regular = [g for g in _guests(guests) if g.E == 4 and is_planar_regular(g)]
    for host in hosts:
        th = topology(host)
        for guest in regular:
            if host.I + guest.I > max_edges:
                continue
            tg = topology(guest)
            for site in sites(host, 4):
                for gl in enumerate_gluings(host, site, guest, up_to_rotation=False):
                    respects = is_order_respecting(host, guest, gl)
                    if order_respecting_only and not respects:
                        continue
                    t0 = topology(insert(host, guest, gl))
                    n = t0.g - th.g - tg.g
                    _bump(stats, "gluings")
                    problems = []
                    if n < 0:
                        problems.append(f"n={n}")
                    if t0.B < th.B:
                        problems.append(f"B0={t0.B} < B1={th.B}")
                    if t0.F != tg.F - 1 + th.F - 2 * n:
                        problems.append(f"F0={t0.F}")
                    if respects and n != 0:
                        problems.append("order-respecting gluing with n>0")
                    if problems:
                        bad.append(f"{host.name}<-{guest.name} {gl.as_dict()}: " + ", ".join(problems))
    return bad
