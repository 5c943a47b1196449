import dataclasses
import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reebforge.assembler import assemble
from reebforge.fuzz import Bounds, random_graph
from reebforge.graph_model import (
    GoodFunction,
    LabeledGraph,
    LoopPresent,
    synthesize_good_function,
)
from reebforge.local_models import FoldCapModel
from reebforge.reeb_sweep import (
    DanglingComponent,
    LeftoverComponent,
    ReebGraph,
    UnionFind,
    find_isomorphism,
    run_sweep,
    sweep,
    sweep_events,
    verify_plan,
    verify_realization,
)


def brute_force_isomorphic(w: ReebGraph, g: LabeledGraph, gf: GoodFunction) -> bool:
    """Try every bijection."""
    wv = [v for v, _ in w.vertices]
    if len(wv) != len(g.vertices) or len(w.edges) != len(g.edges):
        return False
    wh = dict(w.vertices)
    target = Counter((frozenset((e.u, e.v)), e.genus) for e in g.edges)
    for perm in itertools.permutations(g.vertex_ids):
        phi = dict(zip(wv, perm))
        if any(wh[v] != gf[phi[v]] for v in wv):
            continue
        if Counter((frozenset((phi[a], phi[b])), q) for a, b, q in w.edges) == target:
            return True
    return False


def plan_for(edges, heights=None):
    g = LabeledGraph.from_edges(edges, heights=heights)
    policy = "respect-given-heights" if heights else "distinct-integers"
    return assemble(g, synthesize_good_function(g, policy))


def test_union_find():
    uf = UnionFind()
    for a, b in [(1, 2), (3, 4), (2, 3)]:
        uf.union(a, b)
    uf.add(9)
    assert uf.find(1) == uf.find(4) and uf.classes() == 2


def test_single_edge_sweep():
    w = sweep(plan_for([("a", "b", 3)]))
    assert w.vertices == ((0, 0), (1, 1))
    assert w.edges == ((0, 1, 3),)


def test_path_sweep():
    w = sweep(plan_for([("a", "b", 0), ("b", "c", 2)]))
    assert [q for _, _, q in w.edges] == [0, 2]
    assert [w.degree(v) for v, _ in w.vertices] == [1, 2, 1]


def test_max_star_sweep():
    p = plan_for([("c", "x", 0), ("c", "y", 0), ("c", "z", 0)],
                 heights={"c": 2, "x": 0, "y": 1, "z": 1})
    w = sweep(p)
    top = max(w.vertices, key=lambda vh: vh[1])[0]
    assert w.height(top) == 2 and w.degree(top) == 3


def test_unstripped_sweep_uses_vertex_ids():
    p = plan_for([("a", "b", 0), ("b", "c", 2)])
    w = sweep(p, strip_identities=False)
    assert w.edges == (("a", "b", 0), ("b", "c", 2))


def test_strip_hides_labels():
    p = plan_for([("a", "b", 4), ("b", "c", 2)])
    events, wiring = sweep_events(p, strip_identities=True)
    assert [e.key for e in events] == [0, 1, 2]
    assert sorted([*wiring, *wiring.values()]) == sorted(
        x for e in events for x in e.ports_below + e.ports_above
    )
    for e in events:
        assert not {"a", "b", "c"} & {str(v) for v in vars(e).values()}


def test_find_isomorphism_path():
    p = plan_for([("a", "b", 0), ("b", "c", 2)])
    iso = find_isomorphism(sweep(p), p.graph, p.gf)
    assert iso is not None and iso.mapping == {0: "a", 1: "b", 2: "c"}


def test_heights_break_the_swap():
    w = ReebGraph(((0, 0), (1, 1), (2, 2)), ((0, 1, 0), (1, 2, 2)))
    g = LabeledGraph.from_edges([("a", "b", 2), ("b", "c", 0)])
    gf = GoodFunction({"a": 0, "b": 1, "c": 2})
    assert find_isomorphism(w, g, gf) is None
    assert not brute_force_isomorphic(w, g, gf)
    # without heights the reversal is an isomorphism
    assert find_isomorphism(w, g, gf, match_height=False) is not None


def test_identity_on_one_edge():
    g = LabeledGraph.from_edges([("a", "b", 1)])
    gf = GoodFunction({"a": 0, "b": 1})
    w = ReebGraph((("a", 0), ("b", 1)), (("a", "b", 1),))
    assert find_isomorphism(w, g, gf).mapping == {"a": "a", "b": "b"}


def test_parallel_edge_multiplicity_matters():
    g = LabeledGraph.from_edges([("a", "b", 1), ("a", "b", 1), ("b", "c", 0)])
    gf = GoodFunction({"a": 0, "b": 1, "c": 2})
    w = ReebGraph(((0, 0), (1, 1), (2, 2)), ((0, 1, 1), (1, 2, 1), (1, 2, 0)))
    assert find_isomorphism(w, g, gf) is None
    assert not brute_force_isomorphic(w, g, gf)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32), st.integers(0, 2**32))
def test_find_isomorphism_agrees_with_brute_force(seed_a, seed_b):
    bounds = Bounds(6, 8, 2)
    g = random_graph(seed_a, bounds, heights=True)
    h = random_graph(seed_b, bounds, heights=True)
    gf = synthesize_good_function(g, "respect-given-heights")
    hf = synthesize_good_function(h, "respect-given-heights")
    w = ReebGraph(tuple((v, hf[v]) for v in h.vertex_ids),
                  tuple((e.u, e.v, e.genus) for e in h.edges))
    assert (find_isomorphism(w, g, gf) is not None) == brute_force_isomorphic(w, g, gf)
    # a graph always matches its own relabeled copy
    w_self = ReebGraph(tuple((f"n{v}", gf[v]) for v in g.vertex_ids),
                       tuple((f"n{e.u}", f"n{e.v}", e.genus) for e in g.edges))
    assert find_isomorphism(w_self, g, gf) is not None


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32), st.booleans())
def test_sweep_reconstructs_input(seed, heights):
    g = random_graph(seed, Bounds(10, 15, 4), heights=heights)
    gf = synthesize_good_function(g, "respect-given-heights" if heights else "distinct-integers")
    p = assemble(g, gf)
    w = sweep(p)
    assert len(w.vertices) == len(p.events)
    assert len(w.edges) == len(g.edges)
    assert w.is_connected()
    assert all(w.height(a) < w.height(b) for a, b, _ in w.edges)
    assert find_isomorphism(w, g, gf) is not None


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32), st.randoms(use_true_random=False))
def test_same_value_events_commute(seed, rnd):
    g = random_graph(seed, Bounds(10, 15, 4), heights=True)
    p = assemble(g, synthesize_good_function(g, "respect-given-heights"))
    events, wiring = sweep_events(p)
    groups = [list(grp) for _, grp in itertools.groupby(events, key=lambda e: e.value)]
    for grp in groups:
        rnd.shuffle(grp)
    shuffled = [e for grp in groups for e in grp]
    a, b = run_sweep(events, wiring), run_sweep(shuffled, wiring)
    assert sorted(a.vertices) == sorted(b.vertices)
    assert sorted(a.edges) == sorted(b.edges)


def test_genus_constant_along_each_edge():
    p = plan_for([("a", "b", 3), ("b", "c", 1), ("b", "d", 2), ("a", "d", 0)])
    w = sweep(p, strip_identities=False)
    assert sorted(w.edges) == sorted(
        (t.low, t.high, p.graph.edges[t.edge].genus) for t in p.tracking.values()
    )


def drop_event(p, vertex):
    return dataclasses.replace(p, events=tuple(ev for ev in p.events if ev.vertex != vertex))


def test_dropped_max_cap_leaves_component():
    p = plan_for([("a", "b", 0), ("b", "c", 2)])
    with pytest.raises(LeftoverComponent):
        sweep(drop_event(p, "c"))


def test_dropped_min_cap_dangles():
    p = plan_for([("a", "b", 0), ("b", "c", 2)])
    with pytest.raises(DanglingComponent):
        sweep(drop_event(p, "a"))


def test_mutated_cap_genus_dangles():
    p = plan_for([("a", "b", 0), ("b", "c", 2)])
    events = list(p.events)
    events[0] = dataclasses.replace(events[0], model=dataclasses.replace(events[0].model, k=3))
    with pytest.raises(DanglingComponent):
        sweep(dataclasses.replace(p, events=tuple(events)))


def test_mutated_graph_label_fails_property2():
    p = plan_for([("a", "b", 0), ("b", "c", 2)])
    g = p.graph
    bad = LabeledGraph(g.vertices, (g.edges[0], dataclasses.replace(g.edges[1], genus=1)))
    report = verify_plan(dataclasses.replace(p, graph=bad))
    assert report.property1 and not report.property2 and not report.passed


def test_random_fault_injection():
    rng = random.Random(3)
    for seed in range(40):
        p = assemble(*_graph_and_gf(seed))
        victim = rng.choice(p.events).vertex
        with pytest.raises((DanglingComponent, LeftoverComponent)):
            sweep(drop_event(p, victim))


def _graph_and_gf(seed):
    g = random_graph(seed, Bounds(8, 12, 3))
    return g, synthesize_good_function(g)


def test_verify_report():
    g = LabeledGraph.from_edges([("a", "b", 0), ("b", "c", 2)])
    r = verify_realization(g, synthesize_good_function(g))
    assert r.passed and r.property1 and r.property2 and r.property3 and r.chi_zero
    assert r.tags == {"Morse": 3, "FoldThenHeight": 2}
    d = r.to_dict()
    assert list(d) == ["property1", "property2", "property3", "chi_zero", "invariants_ok",
                       "tags", "elapsed_ms"]
    assert d["elapsed_ms"] is None
    assert r.to_dict(timing=True)["elapsed_ms"] >= 0


def test_verify_loop_precondition():
    g = LabeledGraph.from_edges([("a", "b", 0), ("a", "a", 1)])
    with pytest.raises(LoopPresent):
        verify_realization(g, GoodFunction({"a": 0, "b": 1}))


def test_cap_model_count_in_sweep():
    p = plan_for([("a", "b", 2)])
    assert all(isinstance(ev.model, FoldCapModel) for ev in p.events)
