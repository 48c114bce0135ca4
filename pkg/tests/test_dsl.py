from pathlib import Path

import pytest

from hopfgraph.canon import ribbon_key
from hopfgraph.dsl import DSLError, load_graphs, parse_graph_source, to_dsl
from hopfgraph.fixtures import BUBBLE, FIXTURES

GRAPHS = Path(__file__).resolve().parents[1] / "graphs"

BUBBLE_SRC = """
# two vertices, two rungs
graph bubble {
    vertex v0; vertex v1;
    edge e1: v0.0 -- v1.1;
    edge e2: v0.1 -- v1.0;
    ext f1: v0.2; ext f2: v0.3;
    ext f3: v1.2; ext f4: v1.3;
}
"""


def test_parse_bubble():
    [g] = parse_graph_source(BUBBLE_SRC)
    assert g.name == "bubble"
    assert (g.V, g.I, g.E) == (2, 2, 4)
    assert ribbon_key(g) == ribbon_key(BUBBLE)


def test_fixture_files_match_fixtures():
    for name, g in FIXTURES.items():
        [h] = load_graphs(GRAPHS / f"{name}.g")
        assert ribbon_key(h) == ribbon_key(g), name
    assert len(load_graphs(GRAPHS / "fixtures.g")) == len(FIXTURES)


def _error(src):
    with pytest.raises(DSLError) as info:
        parse_graph_source(src)
    return info.value


def test_port_reuse_reports_position():
    err = _error("graph t {\n  vertex v0;\n  edge e1: v0.0 -- v0.0;\n}")
    assert "port reused: v0.0" in str(err)
    assert (err.line, err.column) == (3, 20)
    assert str(err).startswith("line 3, column 20:")


@pytest.mark.parametrize("src, needle", [
    ("graph t { vertex v0; edge e: v0.0 -- v1.0; }", "unknown vertex"),
    ("graph t { vertex v0; ext f: v0.4; }", "bad port index"),
    ("graph t { vertex v0; vertex v0; }", "duplicate vertex"),
    ("graph t { vertex v0; edge e: v0.0 -- v0.1; edge e: v0.2 -- v0.3; }", "duplicate label"),
    ("graph t { vertex v0; edge e: v0.0 -- v0.1; ext f: v0.2; ext f: v0.3; }", "duplicate label"),
    ("graph t { vertex v0 }", "expected"),
    ("graph t { vertex v0; @ }", "unexpected character"),
    ("graph t { vertex v0; }", "invalid"),
])
def test_errors(src, needle):
    assert needle in str(_error(src))


def test_duplicate_graph_names():
    src = "graph a { vertex v; edge e: v.0 -- v.1; ext x: v.2; ext y: v.3; }\n" * 2
    assert "duplicate graph name" in str(_error(src))


def test_round_trip(ribbon_corpus):
    for g in list(FIXTURES.values()) + ribbon_corpus[:40]:
        for canonical in (False, True):
            [back] = parse_graph_source(to_dsl(g, canonical=canonical))
            assert ribbon_key(back) == ribbon_key(g)


def test_canonical_text_is_a_normal_form(ribbon_corpus):
    from hopfgraph.graph import relabel

    g = ribbon_corpus[17]
    order = list(reversed(range(g.V)))
    h = relabel(g, order, [[(p + 1) % 4 for p in range(4)] for _ in range(g.V)])
    assert to_dsl(h, "x", canonical=True) == to_dsl(g, "x", canonical=True)
