"""Named small graphs and the insertion-generated corpus built from them."""
from __future__ import annotations

from .canon import canonical_key
from .graph import FeynmanGraph, PortRef as P
from .surgery import enumerate_gluings, insert, sites

TADPOLE_P = FeynmanGraph(
    (4,), [(P(0, 0), P(0, 1))], [(P(0, 2), "f1"), (P(0, 3), "f2")], name="tadpole_p"
)

# self-loop on opposite ports: planar but with two broken faces
TADPOLE_X = FeynmanGraph(
    (4,), [(P(0, 0), P(0, 2))], [(P(0, 1), "f1"), (P(0, 3), "f2")], name="tadpole_x"
)

BUBBLE = FeynmanGraph(
    (4, 4),
    [(P(0, 0), P(1, 1)), (P(0, 1), P(1, 0))],
    [(P(0, 2), "f1"), (P(0, 3), "f2"), (P(1, 2), "f3"), (P(1, 3), "f4")],
    name="bubble",
)

# BUBBLE glued into vertex 1 of BUBBLE respecting the cyclic order
CHAIN = FeynmanGraph(
    (4, 4, 4),
    [(P(0, 0), P(1, 1)), (P(0, 1), P(1, 0)), (P(1, 2), P(2, 1)), (P(1, 3), P(2, 0))],
    [(P(0, 2), "f1"), (P(0, 3), "f2"), (P(2, 2), "f3"), (P(2, 3), "f4")],
    name="chain",
)

SUNSET_N = FeynmanGraph(
    (4, 4),
    [(P(0, 0), P(1, 0)), (P(0, 1), P(1, 1)), (P(0, 2), P(1, 2))],
    [(P(0, 3), "f1"), (P(1, 3), "f2")],
    name="sunset_n",
)

SUNSET_P = FeynmanGraph(
    (4, 4),
    [(P(0, 0), P(1, 2)), (P(0, 1), P(1, 1)), (P(0, 2), P(1, 0))],
    [(P(0, 3), "f1"), (P(1, 3), "f2")],
    name="sunset_p",
)

FIXTURES = {g.name: g for g in (TADPOLE_P, TADPOLE_X, BUBBLE, CHAIN, SUNSET_N, SUNSET_P)}

SEEDS = (BUBBLE, TADPOLE_P, SUNSET_P)


def insertion_corpus(max_edges: int = 6, seeds=SEEDS, *, up_to_rotation: bool = False,
                     ribbon: bool = True) -> list[FeynmanGraph]:
    """Close ``seeds`` under insertion, keeping graphs with at most ``max_edges`` internal edges.

    Every graph of the current set is inserted at every site of every other,
    with every gluing (or one per rotation class).  Results are deduplicated by
    canonical key and returned sorted by (I, key) as canonical representatives.
    """
    from .canon import graph_from_key

    found: dict[bytes, FeynmanGraph] = {}
    for g in seeds:
        if g.I <= max_edges:
            found.setdefault(canonical_key(g, ribbon=ribbon), g)
    frontier = list(found.values())
    while frontier:
        fresh = []
        pool = list(found.values())
        for new in frontier:
            pairs = [(new, other) for other in pool] + [(other, new) for other in pool if other is not new]
            for host, guest in pairs:
                extra = 1 if guest.E == 2 else 0
                if host.I + guest.I + extra > max_edges:
                    continue
                for site in sites(host, guest.E):
                    for gl in enumerate_gluings(host, site, guest, up_to_rotation=up_to_rotation):
                        result = insert(host, guest, gl)
                        key = canonical_key(result, ribbon=ribbon)
                        if key not in found:
                            found[key] = result
                            fresh.append(result)
        frontier = fresh
    return [graph_from_key(k) for k in sorted(found, key=lambda k: (graph_from_key(k).I, k))]
