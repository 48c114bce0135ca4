import pytest

from hopfgraph.canon import canonical_key, plain_key, ribbon_key
from hopfgraph.fixtures import BUBBLE, CHAIN, SUNSET_P, TADPOLE_P, TADPOLE_X
from hopfgraph.graph import FeynmanGraph, GraphError, PortRef as P, SubgraphSel, loop_number, subgraph_graph, validate
from hopfgraph.ribbon import insertion_defect
from hopfgraph.surgery import (
    GluingData,
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

TRIANGLE = FeynmanGraph(
    (4, 4, 4), [(P(0, 0), P(1, 1)), (P(1, 0), P(2, 1)), (P(2, 0), P(0, 1))],
    [(P(v, p), f"f{2 * v + p - 1}") for v in range(3) for p in (2, 3)],
)


def test_superficial_divergence():
    assert is_superficially_divergent(BUBBLE, "phi4")
    assert not is_superficially_divergent(TRIANGLE, "phi4")
    assert is_superficially_divergent(TADPOLE_X, "phi4")
    assert not is_superficially_divergent(TADPOLE_X, "gw")
    with pytest.raises(GraphError):
        is_superficially_divergent(FeynmanGraph((4, 4), [(P(0, 0), P(1, 0))],
                                                [(P(v, p), f"f{v}{p}") for v in (0, 1) for p in (1, 2, 3)]))


def test_divergent_subgraph_lists():
    assert divergent_subgraphs(BUBBLE) == []
    assert divergent_subgraphs(TADPOLE_P) == []
    chain = divergent_subgraphs(CHAIN)
    assert [s.sorted_edges() for s in chain] == [(0, 1), (2, 3)]
    assert [s.sorted_edges() for s in divergent_subgraphs(CHAIN, "gw")] == [(0, 1), (2, 3)]


def test_chain_contracts_to_bubble_on_either_side():
    left, right = divergent_subgraphs(CHAIN)
    for sel in (left, right):
        q = contract(CHAIN, sel)
        assert validate(q).ok
        assert ribbon_key(q) == ribbon_key(BUBBLE)


def test_contract_rejects_bad_selections():
    with pytest.raises(GraphError):
        contract(CHAIN, range(4))
    with pytest.raises(GraphError):
        contract(BUBBLE, [0])  # a single rung is not 1PI


def test_self_energy_on_an_edge_round_trips():
    gl = enumerate_gluings(BUBBLE, ("edge", 0), TADPOLE_P)[0]
    ins = insert_image(BUBBLE, TADPOLE_P, gl)
    g = ins.graph
    assert (g.V, g.I, g.E) == (3, 4, 4)
    assert g.I == BUBBLE.I + TADPOLE_P.I + 1
    c = contract_sites(g, SubgraphSel.of(g, ins.image))
    assert c.sites[0][0] == "edge"
    assert ribbon_key(c.graph) == ribbon_key(BUBBLE)


def test_two_point_part_next_to_a_leg_becomes_that_leg():
    g = FeynmanGraph((4, 4), [(P(0, 0), P(0, 1)), (P(0, 3), P(1, 0))],
                     [(P(0, 2), "f1"), (P(1, 1), "a"), (P(1, 2), "b"), (P(1, 3), "c")])
    c = contract_sites(g, SubgraphSel.of(g, [0]))
    assert c.sites == (("leg", 0),)
    assert {leg.label for leg in c.graph.legs} == {"f1", "a", "b", "c"}
    assert c.graph.V == 1 and c.graph.I == 0


def test_order_respecting_bubble_into_bubble_is_chain():
    g = GluingData.make("vertex", 1, {"f1": 0, "f2": 1, "f3": 2, "f4": 3})
    assert is_order_respecting(BUBBLE, BUBBLE, g)
    assert ribbon_key(insert(BUBBLE, BUBBLE, g)) == ribbon_key(CHAIN)
    # the quarter turn is order respecting too, but the inner bubble then carries
    # one leg per vertex: a different graph, still planar regular
    turned = GluingData.make("vertex", 1, {"f1": 1, "f2": 2, "f3": 3, "f4": 0})
    other = insert(BUBBLE, BUBBLE, turned)
    assert plain_key(other) != plain_key(CHAIN)
    assert insertion_defect(BUBBLE, BUBBLE, turned) == 0


def test_four_point_insertion_counts():
    for g in enumerate_gluings(BUBBLE, ("vertex", 0), BUBBLE, up_to_rotation=False):
        r = insert(BUBBLE, BUBBLE, g)
        assert (r.V, r.I, r.E) == (BUBBLE.V * 2 - 1, BUBBLE.I * 2, BUBBLE.E)


def test_gluing_enumeration_counts():
    assert len(enumerate_gluings(BUBBLE, ("vertex", 0), BUBBLE, up_to_rotation=False)) == 24
    assert len(enumerate_gluings(BUBBLE, ("vertex", 0), BUBBLE)) == 6
    assert len(enumerate_gluings(BUBBLE, ("edge", 0), TADPOLE_P, up_to_rotation=False)) == 2
    # the tadpole loop hangs into the inner or the outer face: two ribbon classes
    assert len(enumerate_gluings(BUBBLE, ("edge", 0), TADPOLE_P)) == 2
    # a sunset reads the same from either end
    assert len(enumerate_gluings(BUBBLE, ("edge", 0), SUNSET_P)) == 1


def test_arity_mismatch():
    with pytest.raises(GraphError):
        enumerate_gluings(BUBBLE, ("edge", 0), BUBBLE)
    with pytest.raises(GraphError):
        enumerate_gluings(BUBBLE, ("vertex", 0), TADPOLE_P)
    with pytest.raises(GraphError):
        insert(BUBBLE, BUBBLE, GluingData.make("vertex", 0, {"f1": 0, "f2": 0, "f3": 1, "f4": 2}))


def test_sites():
    assert sites(CHAIN, 4) == [("vertex", 0), ("vertex", 1), ("vertex", 2)]
    assert sites(CHAIN, 2) == [("edge", i) for i in range(4)]


def test_insert_preserves_host_legs():
    for site in sites(CHAIN, 2):
        for g in enumerate_gluings(CHAIN, site, SUNSET_P, up_to_rotation=False):
            r = insert(CHAIN, SUNSET_P, g)
            assert sorted(leg.label for leg in r.legs) == sorted(leg.label for leg in CHAIN.legs)


@pytest.mark.parametrize("theory", ["phi4", "gw", "core"])
def test_nested_contraction_and_loop_additivity(ribbon_corpus, theory):
    ribbon = theory == "gw"
    to_vertex = theory == "core"
    key = ribbon_key if ribbon else plain_key
    for G in ribbon_corpus[:60]:
        sels = divergent_subgraphs(G, theory)
        for big in sels:
            q = contract(G, big, to_vertex=to_vertex)
            sub_loops = sum(loop_number(subgraph_graph(G, c)[0]) for c in big.components(G))
            assert loop_number(q) + sub_loops == loop_number(G)
            for small in sels:
                if not small.edges < big.edges:
                    continue
                c = contract_sites(G, small, to_vertex=to_vertex)
                image = sorted({c.edge_map[e] for e in big.edges - small.edges if e in c.edge_map})
                twice = contract(c.graph, image, to_vertex=to_vertex) if image else c.graph
                assert key(twice) == key(q), (G.name, big, small)
                if image:
                    # the image is again an admissible selection of the cograph
                    found = {s.edges for s in divergent_subgraphs(c.graph, theory)}
                    assert frozenset(image) in found


def test_contract_respects_plain_isomorphism(ribbon_corpus):
    for G in ribbon_corpus[:40]:
        for sel in divergent_subgraphs(G):
            assert canonical_key(contract(G, sel), ribbon=False) == plain_key(contract(G, sel))
