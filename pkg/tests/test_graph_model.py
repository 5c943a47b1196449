from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reebforge.fuzz import Bounds, random_graph
from reebforge.graph_model import (
    DuplicateVertex,
    GivenHeightsNotGood,
    GraphSyntaxError,
    Kind,
    LabeledGraph,
    LoopPresent,
    NegativeGenus,
    Side,
    UnknownVertex,
    classify_vertices,
    export_dot,
    format_graph,
    has_good_function,
    parse_graph,
    synthesize_good_function,
    validate,
)


def test_parse_two_vertices_one_edge():
    g = parse_graph("vertex a\nvertex b\nedge a b genus=2")
    assert g.vertex_ids == ("a", "b")
    assert [(e.u, e.v, e.genus) for e in g.edges] == [("a", "b", 2)]
    assert not g.edges[0].loop


def test_parse_self_loop_is_flagged():
    g = parse_graph("vertex a\nedge a a genus=0\n")
    assert g.edges[0].loop
    assert g.loops == [g.edges[0]]


def test_parse_heights_and_comments():
    g = parse_graph("# header\nvertex a height=-3/4  # trailing\n\nvertex b height=5\nedge a b genus=0\n")
    assert g.vertex("a").height == Fraction(-3, 4)
    assert g.vertex("b").height == 5


@pytest.mark.parametrize(
    "text, exc, lineno",
    [
        ("vertex a\nvertex b\nedge a b genus=-1", NegativeGenus, 3),
        ("vertex a\nvertex a", DuplicateVertex, 2),
        ("vertex a\nedge a b genus=0", UnknownVertex, 2),
        ("vertex a\nedge a", GraphSyntaxError, 2),
        ("vertex a height=1.5", GraphSyntaxError, 1),
        ("vertex a height=1/0", GraphSyntaxError, 1),
        ("vertex a\nvertex b\nedge a b genus=x", GraphSyntaxError, 3),
        ("vertices a", GraphSyntaxError, 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, exc, lineno):
    with pytest.raises(exc) as info:
        parse_graph(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_validate():
    assert validate(parse_graph("vertex a\nvertex b\nedge a b genus=0")) == []
    two = parse_graph("vertex a\nvertex b\nvertex c\nvertex d\nedge a b genus=0\nedge c d genus=0")
    assert [d.message for d in validate(two)] == ["not connected"]
    lonely = parse_graph("vertex a")
    assert "no edge" in [d.message for d in validate(lonely)]


def test_has_good_function_cases():
    tree = LabeledGraph.from_edges([("r", "a", 0), ("r", "b", 1), ("b", "c", 2)])
    assert has_good_function(tree)
    assert not has_good_function(LabeledGraph.from_edges([("a", "b", 0), ("b", "b", 0)]))
    # parallel edges ask for the same inequality as a single edge
    assert has_good_function(LabeledGraph.from_edges([("a", "b", 0), ("a", "b", 3)]))


def test_default_policy_is_declaration_order():
    g = LabeledGraph.from_edges([("a", "b", 0), ("b", "c", 0)])
    gf = synthesize_good_function(g)
    assert [gf[v] for v in "abc"] == [0, 1, 2]


def test_given_heights_kept():
    g = LabeledGraph.from_edges(
        [("c", "x", 0), ("c", "y", 0), ("c", "z", 0)],
        heights={"c": 0, "x": 1, "y": 1, "z": -1},
    )
    gf = synthesize_good_function(g, "respect-given-heights")
    assert dict(gf.heights) == {"c": 0, "x": 1, "y": 1, "z": -1}


def test_given_heights_rejected():
    g = LabeledGraph.from_edges([("a", "b", 0)], heights={"a": 5, "b": 5})
    with pytest.raises(GivenHeightsNotGood):
        synthesize_good_function(g, "respect-given-heights")
    with pytest.raises(GivenHeightsNotGood):
        synthesize_good_function(LabeledGraph.from_edges([("a", "b", 0)], heights={"a": 1}),
                                 "respect-given-heights")


def test_loop_rejected():
    with pytest.raises(LoopPresent):
        synthesize_good_function(LabeledGraph.from_edges([("a", "b", 0), ("a", "a", 1)]))


def test_classify_path():
    g = LabeledGraph.from_edges([("a", "b", 0), ("b", "c", 2)])
    cls = classify_vertices(g, synthesize_good_function(g))
    assert cls["b"].kind is Kind.INTERIOR
    assert (cls["a"].kind, cls["a"].side) == (Kind.EXTREMUM_DEG1, Side.MIN)
    assert (cls["c"].kind, cls["c"].side) == (Kind.EXTREMUM_DEG1, Side.MAX)


def test_classify_descending_star():
    g = LabeledGraph.from_edges(
        [("c", "x", 0), ("c", "y", 0), ("c", "z", 0)], heights={"c": 2, "x": 0, "y": 1, "z": 1}
    )
    cls = classify_vertices(g, synthesize_good_function(g, "respect-given-heights"))
    assert (cls["c"].kind, cls["c"].side) == (Kind.EXTREMUM_MULTI, Side.MAX)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**63 - 1), st.booleans())
def test_random_graph_properties(seed, heights):
    g = random_graph(seed, Bounds(8, 12, 3), heights=heights)
    assert validate(g) == [] and has_good_function(g)
    policy = "respect-given-heights" if heights else "distinct-integers"
    gf = synthesize_good_function(g, policy)
    assert all(gf[e.u] != gf[e.v] for e in g.edges)
    cls = classify_vertices(g, gf)
    for v in g.vertex_ids:
        if g.degree(v) == 1:
            assert cls[v].kind is Kind.EXTREMUM_DEG1
        else:
            assert cls[v].kind is not Kind.EXTREMUM_DEG1
    # round trip through the file format
    assert parse_graph(format_graph(g)).structure() == g.structure()


def test_dot_export():
    g = parse_graph("vertex a\nvertex b\nedge a b genus=2\n")
    dot = export_dot(g)
    assert dot.count(" -- ") == 1
    assert '[label="2"]' in dot
    assert dot == export_dot(parse_graph("vertex a\nvertex b\nedge a b genus=2\n"))
    with_h = export_dot(g, synthesize_good_function(g))
    assert "h=0" in with_h and "h=1" in with_h


def test_dot_export_escapes_quotes():
    g = LabeledGraph.from_edges([('a"x', "b", 0)])
    assert '"a\\"x"' in export_dot(g)
