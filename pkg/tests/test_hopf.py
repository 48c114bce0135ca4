import random
from fractions import Fraction

import pytest

from hopfgraph.canon import plain_key, ribbon_key
from hopfgraph.fixtures import BUBBLE, CHAIN, TADPOLE_P
from hopfgraph.graph import FeynmanGraph, GraphError, PortRef as P, disjoint_union
from hopfgraph.hopf import (
    UNIT,
    AlgebraElement,
    HopfAlgebra,
    TensorElement,
    counit,
    element_to_json,
    grade,
    product,
    tensor_to_json,
)
from hopfgraph.surgery import GluingData, insert

B = plain_key(BUBBLE)
C = plain_key(CHAIN)


@pytest.fixture(scope="module")
def phi4():
    return HopfAlgebra("phi4")


def test_product_and_unit():
    one = AlgebraElement.unit()
    b = AlgebraElement.of(B)
    assert one * b == b
    assert product(b, b) == AlgebraElement({(B, B): 1})
    assert (2 * b) * (3 * AlgebraElement.of(C)) == AlgebraElement({tuple(sorted((B, C))): 6})


def test_counit():
    assert counit(AlgebraElement.unit()) == 1
    assert counit(AlgebraElement.of(B)) == 0
    assert counit(3 * AlgebraElement.unit() + 5 * AlgebraElement.of(C)) == 3


def test_zero_coefficients_are_pruned():
    b = AlgebraElement.of(B)
    assert not (b - b)
    assert len(b - b) == 0


def test_bubble_is_primitive(phi4):
    assert phi4.coproduct(BUBBLE) == TensorElement({((B,), UNIT): 1, (UNIT, (B,)): 1})
    assert not phi4.reduced_coproduct(BUBBLE)


def test_chain_reduced_coproduct(phi4):
    assert phi4.reduced_coproduct(CHAIN) == TensorElement({((B,), (B,)): 2})


def test_tadpole_reduced_coproduct_gw():
    assert not HopfAlgebra("gw").reduced_coproduct(TADPOLE_P)


def test_core_mode_sums_over_all_1pi_subgraphs(ribbon_corpus):
    # on the chain the only 1PI proper subgraphs are the two bubbles
    core = HopfAlgebra("core")
    assert core.reduced_coproduct(CHAIN) == TensorElement({((B,), (B,)): 2})
    # somewhere in the corpus a six-leg 1PI subgraph shows up in core mode only
    phi4 = HopfAlgebra("phi4")
    assert any(len(core.subgraphs(g)) > len(phi4.subgraphs(g)) for g in ribbon_corpus)


def test_grade():
    assert grade(AlgebraElement.of(B)) == {1: AlgebraElement.of(B)}
    assert grade(AlgebraElement.of(C)) == {2: AlgebraElement.of(C)}
    assert list(grade(AlgebraElement({(B, B): 1}))) == [2]


def test_antipode_values(phi4):
    assert phi4.antipode(AlgebraElement.unit()) == AlgebraElement.unit()
    assert phi4.antipode(BUBBLE) == -AlgebraElement.of(B)
    assert phi4.antipode(CHAIN) == -AlgebraElement.of(C) + AlgebraElement({(B, B): 2})


def test_antipode_sides_agree(phi4):
    assert phi4.antipode(CHAIN, "left") == phi4.antipode(CHAIN, "right")


def test_non_1pi_generator_rejected(phi4):
    dumbbell = FeynmanGraph((4, 4), [(P(0, 0), P(1, 0))],
                            [(P(v, p), f"f{v}{p}") for v in (0, 1) for p in (1, 2, 3)])
    with pytest.raises(GraphError):
        phi4.coproduct(dumbbell)


def test_coassociativity_on_chain(phi4):
    ok, witness = phi4.check_coassociativity(CHAIN)
    assert ok and witness is None


def test_corrupted_subgraph_list_breaks_coassociativity():
    # a chain of three bubbles; forgetting one of its subgraphs must be caught
    chain3 = insert(CHAIN, BUBBLE, GluingData.make("vertex", 2, {"f1": 0, "f2": 1, "f3": 2, "f4": 3}))

    def drop_last(graph, sels):
        return sels[:-1] if graph.I == 6 else sels

    assert HopfAlgebra("phi4").check_coassociativity(chain3)[0]
    ok, witness = HopfAlgebra("phi4", subgraph_filter=drop_last).check_coassociativity(chain3)
    assert not ok
    assert witness is not None


def test_antipode_axiom_on_unit_and_fixtures(phi4):
    assert phi4.check_antipode_axiom(AlgebraElement.unit())
    assert phi4.check_antipode_axiom(BUBBLE)
    assert phi4.check_antipode_axiom(CHAIN)


@pytest.mark.parametrize("theory", ["phi4", "gw", "core"])
def test_axioms_on_corpus(ribbon_corpus, theory):
    A = HopfAlgebra(theory)
    seen = set()
    for g in ribbon_corpus:
        k = A.key(g)
        if k in seen:
            continue
        seen.add(k)
        assert A.check_coassociativity(g)[0], g.name
        assert A.check_counit(g)
        assert A.check_antipode_axiom(g)
        assert A.check_antipode_sides(g)
        assert A.check_grading(g)


@pytest.mark.parametrize("theory", ["phi4", "gw", "core"])
def test_bialgebra_compatibility(ribbon_corpus, theory):
    A = HopfAlgebra(theory)
    assert A.coproduct(AlgebraElement.unit()) == TensorElement.pure(UNIT, UNIT)
    rng = random.Random(7)
    small = [g for g in ribbon_corpus if g.I <= 4]
    for _ in range(25):
        a, b = rng.choice(small), rng.choice(small)
        direct = A.coproduct_of_graph(disjoint_union(a, b))
        assert direct == A.coproduct(a) * A.coproduct(b)


def test_degree_zero_is_spanned_by_unit(ribbon_corpus):
    A = HopfAlgebra("phi4")
    for g in ribbon_corpus[:50]:
        for (left, right), _ in A.coproduct(g).items():
            for m in (left, right):
                degrees = set(grade(AlgebraElement({m: 1})))
                assert degrees == {0} if m == UNIT else 0 not in degrees


def test_json_shapes(phi4):
    names = {B: "bubble", C: "chain"}
    t = tensor_to_json(phi4.reduced_coproduct(CHAIN), names)
    assert t == [{"left": ["bubble"], "right": ["bubble"], "coeff": "2"}]
    s = element_to_json(phi4.antipode(CHAIN).scale(Fraction(1, 2)), names)
    assert {"monomial": ["chain"], "coeff": "-1/2"} in s


def test_ribbon_mode_separates_rotations():
    gw = HopfAlgebra("gw")
    assert gw.key(BUBBLE) == ribbon_key(BUBBLE)
    assert gw.key(BUBBLE) != HopfAlgebra("phi4").key(BUBBLE)
