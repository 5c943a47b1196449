"""Replay a realization plan level by level and rebuild its Reeb graph.

The replay never looks at the input graph.  In strip mode it runs on an
anonymized copy of the plan: events are numbered by position, ports are
renumbered, and the only wiring left is "this up-port feeds that
down-port".  Genera of newborn components are recomputed from the handle
schedules of the local models, so a successful isomorphism check against
the input graph is a genuine reconstruction.
"""
from __future__ import annotations

import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Optional, Sequence

from .assembler import RealizationPlan, assemble, manifold_chi, plan_invariants
from .graph_model import GoodFunction, LabeledGraph, Side, VertexId, format_fraction
from .local_models import FoldCapModel, FoldedExtremumModel, InteriorModel
from .surface_algebra import HandleMove, SurfaceCollection, SurgeryError, replay


class SweepError(RuntimeError):
    pass


class DanglingComponent(SweepError):
    """An event expects a component that is not active."""


class LeftoverComponent(SweepError):
    """Components are still alive after the last event."""


class UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        self.add(x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx

    def classes(self) -> int:
        return len({self.find(x) for x in self.parent})


@dataclass(frozen=True)
class ReebGraph:
    vertices: tuple[tuple[Hashable, Fraction], ...]
    edges: tuple[tuple[Hashable, Hashable, int], ...]

    def height(self, v) -> Fraction:
        return dict(self.vertices)[v]

    def degree(self, v) -> int:
        return sum((a == v) + (b == v) for a, b, _ in self.edges)

    def is_connected(self) -> bool:
        uf = UnionFind()
        for v, _ in self.vertices:
            uf.add(v)
        for a, b, _ in self.edges:
            uf.union(a, b)
        return uf.classes() == 1

    def betti1(self) -> int:
        uf = UnionFind()
        for v, _ in self.vertices:
            uf.add(v)
        for a, b, _ in self.edges:
            uf.union(a, b)
        return len(self.edges) - len(self.vertices) + uf.classes()

    def as_labeled_graph(self) -> tuple[LabeledGraph, GoodFunction]:
        ids = {v: str(v) for v, _ in self.vertices}
        g = LabeledGraph.from_edges(
            [(ids[a], ids[b], q) for a, b, q in self.edges],
            heights={ids[v]: h for v, h in self.vertices},
        )
        return g, GoodFunction({ids[v]: h for v, h in self.vertices})

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": v, "height": format_fraction(h)} for v, h in self.vertices],
            "edges": [{"u": a, "v": b, "genus": q} for a, b, q in self.edges],
        }

    def to_dot(self) -> str:
        lines = ["graph Reeb {"]
        for v, h in self.vertices:
            lines.append(f'  "{v}" [label="{v}\\nh={format_fraction(h)}"];')
        for a, b, q in self.edges:
            lines.append(f'  "{a}" -- "{b}" [label="{q}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SweepEvent:
    """What the replay is allowed to know about one event."""

    key: Hashable
    value: Fraction
    kind: str
    side: Optional[Side]
    ports_below: tuple[int, ...]
    ports_above: tuple[int, ...]
    expected_below: tuple[int, ...]
    incoming: tuple[int, ...] = ()
    schedule: tuple[HandleMove, ...] = ()
    k: int = 0


@dataclass
class Component:
    cid: int
    genus: int
    birth_value: Fraction
    origin: Hashable


@dataclass
class SweepState:
    active: dict[int, Component] = field(default_factory=dict)
    genealogy: UnionFind = field(default_factory=UnionFind)
    next_cid: int = 0

    def birth(self, port, genus, value, origin) -> Component:
        c = Component(self.next_cid, genus, value, origin)
        self.next_cid += 1
        self.active[port] = c
        self.genealogy.union(("event", origin), ("component", c.cid))
        return c


def _sweep_event(ev, key) -> SweepEvent:
    m = ev.model
    if isinstance(m, FoldCapModel):
        return SweepEvent(key, ev.value, "cap", m.side, ev.ports_below, ev.ports_above,
                          m.below_genera, k=m.k)
    cert = m.cert
    kind = "interior" if isinstance(m, InteriorModel) else "folded"
    side = m.side if isinstance(m, FoldedExtremumModel) else None
    return SweepEvent(key, ev.value, kind, side, ev.ports_below, ev.ports_above,
                      m.below_genera, cert.incoming.genera, cert.schedule)


def sweep_events(p: RealizationPlan, strip_identities: bool = True):
    """The replay's view of ``p``: ``(events, wiring)``."""
    if not strip_identities:
        events = [_sweep_event(ev, ev.vertex) for ev in p.events]
        wiring = {t.up_port: t.down_port for t in p.tracking.values()}
        return events, wiring

    renumber: dict[int, int] = {}

    def port(x):
        return renumber.setdefault(x, len(renumber))

    events = []
    for i, ev in enumerate(p.events):
        se = _sweep_event(ev, i)
        events.append(SweepEvent(
            se.key, se.value, se.kind, se.side,
            tuple(port(x) for x in se.ports_below),
            tuple(port(x) for x in se.ports_above),
            se.expected_below, se.incoming, se.schedule, se.k,
        ))
    wiring = {port(t.up_port): port(t.down_port)
              for t in sorted(p.tracking.values(), key=lambda t: renumber.get(t.up_port, -1))}
    return events, wiring


def _replayed_genera(ev: SweepEvent, start: Sequence[int]) -> tuple[int, ...]:
    try:
        return replay(SurfaceCollection.of(start), ev.schedule).genera
    except SurgeryError as exc:
        raise DanglingComponent(f"event {ev.key}: schedule does not apply ({exc})") from None


def run_sweep(events: Sequence[SweepEvent], wiring: dict[int, int]) -> ReebGraph:
    state = SweepState()
    vertices = []
    edges = []
    # stable: same-value events keep their relative order
    for ev in sorted(events, key=lambda e: e.value):
        vertices.append((ev.key, ev.value))
        state.genealogy.add(("event", ev.key))
        consumed = []
        for port, expect in zip(ev.ports_below, ev.expected_below):
            comp = state.active.get(port)
            if comp is None:
                raise DanglingComponent(f"event {ev.key} at {ev.value}: nothing active on port {port}")
            if comp.genus != expect:
                raise DanglingComponent(
                    f"event {ev.key} at {ev.value}: expects genus {expect} on port {port}, "
                    f"active component has genus {comp.genus}"
                )
            if not comp.birth_value < ev.value:
                raise DanglingComponent(f"event {ev.key}: component on port {port} is born at the same level")
            del state.active[port]
            consumed.append(comp.genus)
            state.genealogy.union(("event", ev.key), ("component", comp.cid))
            edges.append((comp.origin, ev.key, comp.genus))
        if len(consumed) != len(ev.ports_below):
            raise DanglingComponent(f"event {ev.key}: port/genus count mismatch")

        if ev.kind == "cap":
            born = (ev.k,) if ev.side is Side.MIN else ()
        elif ev.kind == "interior":
            born = _replayed_genera(ev, consumed)
        elif ev.side is Side.MIN:
            born = ev.incoming + _replayed_genera(ev, ev.incoming)
        else:
            n = len(ev.incoming)
            if _replayed_genera(ev, consumed[:n]) != tuple(consumed[n:]):
                raise DanglingComponent(f"event {ev.key}: folded groups do not match their schedule")
            born = ()
        if len(born) != len(ev.ports_above):
            raise DanglingComponent(f"event {ev.key}: produces {len(born)} components for "
                                    f"{len(ev.ports_above)} ports")
        for port, genus in zip(ev.ports_above, born):
            if port not in wiring:
                raise DanglingComponent(f"event {ev.key}: up-port {port} is not wired")
            state.birth(wiring[port], genus, ev.value, ev.key)

    if state.active:
        left = sorted(state.active.items())
        raise LeftoverComponent(f"{len(left)} component(s) alive after the last event, "
                                f"on ports {[p for p, _ in left]}")
    return ReebGraph(tuple(vertices), tuple(edges))


def sweep(p: RealizationPlan, strip_identities: bool = True) -> ReebGraph:
    events, wiring = sweep_events(p, strip_identities)
    return run_sweep(events, wiring)


@dataclass(frozen=True)
class Isomorphism:
    mapping: dict

    def __getitem__(self, v):
        return self.mapping[v]


def _pair(a, b):
    return (a, b) if repr(a) <= repr(b) else (b, a)


def _index(vertices, edges, heights, match_genus, match_height):
    pairs = defaultdict(Counter)
    incident = defaultdict(list)
    for a, b, q in edges:
        pairs[_pair(a, b)][q if match_genus else 0] += 1
        incident[a].append(q)
        if a != b:
            incident[b].append(q)
    sig = {}
    for v in vertices:
        deg = sum((a == v) + (b == v) for a, b, _ in edges)
        sig[v] = (
            heights[v] if match_height else None,
            deg,
            tuple(sorted(incident[v])) if match_genus else (),
        )
    return pairs, sig


def find_isomorphism(
    w: ReebGraph,
    g: LabeledGraph,
    gf: GoodFunction,
    match_genus: bool = True,
    match_height: bool = True,
) -> Optional[Isomorphism]:
    """Bijection from ``w``'s vertices to ``g``'s preserving edge
    multiplicities, genus labels and heights (the latter two optional)."""
    wv = [v for v, _ in w.vertices]
    gv = list(g.vertex_ids)
    if len(wv) != len(gv) or len(w.edges) != len(g.edges):
        return None
    wpairs, wsig = _index(wv, w.edges, dict(w.vertices), match_genus, match_height)
    gpairs, gsig = _index(gv, [(e.u, e.v, e.genus) for e in g.edges], gf.heights,
                          match_genus, match_height)
    if Counter(wsig.values()) != Counter(gsig.values()):
        return None

    by_sig = defaultdict(list)
    for v in gv:
        by_sig[gsig[v]].append(v)
    cands = {v: by_sig[wsig[v]] for v in wv}

    wadj = defaultdict(set)
    for a, b, _ in w.edges:
        wadj[a].add(b)
        wadj[b].add(a)
    # most constrained first, then grow along edges so pair checks bite early
    order = []
    placed = set()
    remaining = sorted(wv, key=lambda v: (len(cands[v]), repr(v)))
    while remaining:
        frontier = [v for v in remaining if wadj[v] & placed]
        nxt = frontier[0] if frontier else remaining[0]
        order.append(nxt)
        placed.add(nxt)
        remaining.remove(nxt)

    empty = Counter()
    mapping: dict = {}
    used: set = set()

    def consistent(x, y):
        if wpairs.get((x, x), empty) != gpairs.get((y, y), empty):
            return False
        for x2, y2 in mapping.items():
            if wpairs.get(_pair(x, x2), empty) != gpairs.get(_pair(y, y2), empty):
                return False
        return True

    def extend(i):
        if i == len(order):
            return True
        x = order[i]
        for y in cands[x]:
            if y in used or not consistent(x, y):
                continue
            mapping[x] = y
            used.add(y)
            if extend(i + 1):
                return True
            del mapping[x]
            used.discard(y)
        return False

    return Isomorphism(dict(mapping)) if extend(0) else None


@dataclass(frozen=True)
class VerificationReport:
    property1: bool
    property2: bool
    property3: bool
    chi_zero: bool
    invariants_ok: bool
    tags: dict
    elapsed_ms: Optional[float] = None
    isomorphism: Optional[Isomorphism] = field(default=None, compare=False)

    @property
    def passed(self) -> bool:
        return self.property1 and self.property2 and self.property3 and self.chi_zero \
            and self.invariants_ok

    def to_dict(self, timing: bool = False) -> dict:
        return {
            "property1": self.property1,
            "property2": self.property2,
            "property3": self.property3,
            "chi_zero": self.chi_zero,
            "invariants_ok": self.invariants_ok,
            "tags": dict(sorted(self.tags.items())),
            "elapsed_ms": round(self.elapsed_ms, 3) if timing and self.elapsed_ms is not None else None,
        }


def verify_plan(p: RealizationPlan) -> VerificationReport:
    """Sweep ``p`` in strip mode and compare against the graph it was built for."""
    t0 = time.perf_counter()
    inv = plan_invariants(p)
    w = sweep(p, strip_identities=True)
    g, gf = p.graph, p.gf
    # (3) is about the same isomorphism as (1) and (2), so it needs the full match
    full = find_isomorphism(w, g, gf)
    if full is not None:
        p1 = p2 = p3 = True
    else:
        p1 = find_isomorphism(w, g, gf, match_genus=False, match_height=False) is not None
        p2 = p1 and find_isomorphism(w, g, gf, match_height=False) is not None
        p3 = False
    tags = Counter(t for ev in p.events for t in ev.model.normal_form_tags)
    return VerificationReport(
        property1=p1,
        property2=p2,
        property3=p3,
        chi_zero=manifold_chi(p) == 0,
        invariants_ok=inv.ok,
        tags=dict(tags),
        elapsed_ms=(time.perf_counter() - t0) * 1000.0,
        isomorphism=full,
    )


def verify_realization(g: LabeledGraph, gf: GoodFunction) -> VerificationReport:
    t0 = time.perf_counter()
    report = verify_plan(assemble(g, gf))
    return VerificationReport(
        report.property1, report.property2, report.property3, report.chi_zero,
        report.invariants_ok, report.tags, (time.perf_counter() - t0) * 1000.0,
        report.isomorphism,
    )
