"""Glue vertex models and edge cylinders into a realization plan."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .graph_model import (
    EdgeId,
    GoodFunction,
    GraphError,
    Kind,
    LabeledGraph,
    LoopPresent,
    VertexId,
    classify_vertices,
    format_fraction,
    has_good_function,
)
from .local_models import (
    CylinderModel,
    FoldCapModel,
    FoldedExtremumModel,
    InteriorModel,
    VertexModel,
    build_cap_model,
    build_edge_model,
    build_folded_extremum_model,
    build_interior_model,
)


class NotGood(GraphError):
    pass


@dataclass(frozen=True)
class Event:
    """A vertex model placed at its height, wired to cylinder ends.

    ``ports_below`` / ``ports_above`` line up with the model's
    ``below_genera`` / ``above_genera``.
    """

    value: Fraction
    model: VertexModel
    ports_below: tuple[int, ...]
    ports_above: tuple[int, ...]

    @property
    def vertex(self) -> VertexId:
        return self.model.vertex


@dataclass(frozen=True)
class Track:
    """One edge's component line: born at ``low`` through ``up_port``,
    absorbed at ``high`` through ``down_port``."""

    edge: EdgeId
    low: VertexId
    high: VertexId
    up_port: int
    down_port: int


@dataclass(frozen=True)
class InvariantsReport:
    global_chi: int
    connected: bool
    orientable: bool
    singular_values: tuple[Fraction, ...]
    singular_values_match: bool
    certificate_problems: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return (
            self.global_chi == 0
            and self.connected
            and self.orientable
            and self.singular_values_match
            and not self.certificate_problems
        )

    def to_dict(self) -> dict:
        return {
            "global_chi": self.global_chi,
            "connected": self.connected,
            "orientable": self.orientable,
            "singular_values": [format_fraction(h) for h in self.singular_values],
            "singular_values_match": self.singular_values_match,
            "certificate_problems": list(self.certificate_problems),
            "ok": self.ok,
        }


@dataclass(frozen=True)
class RealizationPlan:
    graph: LabeledGraph
    gf: GoodFunction
    events: tuple[Event, ...]
    cylinders: tuple[CylinderModel, ...]
    tracking: dict[EdgeId, Track] = field(hash=False)
    invariants_report: InvariantsReport | None = field(default=None, compare=False)

    def event_of(self, vid: VertexId) -> Event:
        for ev in self.events:
            if ev.vertex == vid:
                return ev
        raise KeyError(vid)


def _up_port(e: EdgeId) -> int:
    return 2 * e


def _down_port(e: EdgeId) -> int:
    return 2 * e + 1


def assemble(g: LabeledGraph, gf: GoodFunction) -> RealizationPlan:
    if not has_good_function(g):
        e = g.loops[0]
        raise LoopPresent(f"no good function: loop present at vertex {e.u!r} (edge {e.id})")
    if not gf.is_good_for(g):
        bad = [e.id for e in gf.bad_edges(g)] if set(gf.heights) == set(g.vertex_ids) else []
        raise NotGood(f"heights are not a good function (constant on edges {bad})")

    classes = classify_vertices(g, gf)
    tracking = {}
    for e in g.edges:
        lo, hi = (e.u, e.v) if gf[e.u] < gf[e.v] else (e.v, e.u)
        tracking[e.id] = Track(e.id, lo, hi, _up_port(e.id), _down_port(e.id))

    order = {vid: i for i, vid in enumerate(g.vertex_ids)}
    events = []
    for vid in sorted(g.vertex_ids, key=lambda w: (gf[w], order[w])):
        h = gf[vid]
        cls = classes[vid]
        inc = sorted(g.incident(vid), key=lambda e: e.id)
        down = [e for e in inc if tracking[e.id].high == vid]
        up = [e for e in inc if tracking[e.id].low == vid]
        if cls.kind is Kind.INTERIOR:
            model = build_interior_model(vid, [e.genus for e in down], [e.genus for e in up], h)
            ev = Event(h, model, tuple(_down_port(e.id) for e in down),
                       tuple(_up_port(e.id) for e in up))
        elif cls.kind is Kind.EXTREMUM_DEG1:
            (e,) = inc
            model = build_cap_model(e.genus, h, cls.side, v=vid)
            ev = Event(h, model, tuple(_down_port(e.id) for e in down),
                       tuple(_up_port(e.id) for e in up))
        else:
            model = build_folded_extremum_model(
                vid, {e.id: e.genus for e in inc}, h, cls.side,
                far_heights={e.id: gf[e.other(vid)] for e in inc},
            )
            port = _down_port if down else _up_port
            ports = tuple(port(eid) for eid in model.port_edges)
            ev = Event(h, model, ports if down else (), () if down else ports)
        events.append(ev)

    cylinders = tuple(
        build_edge_model(e.id, e.genus, gf[tracking[e.id].low], gf[tracking[e.id].high])
        for e in g.edges
    )
    plan = RealizationPlan(g, gf, tuple(events), cylinders, tracking)
    return RealizationPlan(g, gf, plan.events, cylinders, tracking, plan_invariants(plan))


def manifold_chi(p: RealizationPlan) -> int:
    pieces = sum(ev.model.chi for ev in p.events) + sum(c.chi for c in p.cylinders)
    # each cylinder is glued along both of its end surfaces
    gluing = sum(2 * (2 - 2 * c.genus) for c in p.cylinders)
    return pieces - gluing


def _tracking_connected(p: RealizationPlan) -> bool:
    verts = [ev.vertex for ev in p.events]
    if not verts:
        return False
    adj = {v: set() for v in verts}
    for t in p.tracking.values():
        adj[t.low].add(t.high)
        adj[t.high].add(t.low)
    seen, stack = {verts[0]}, [verts[0]]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(verts)


def plan_invariants(p: RealizationPlan) -> InvariantsReport:
    problems = []
    for ev in p.events:
        cert = getattr(ev.model, "cert", None)
        if cert is not None:
            problems.extend(f"{ev.vertex}: {msg}" for msg in cert.check())
        if len(ev.ports_below) != len(ev.model.below_genera) or len(ev.ports_above) != len(
            ev.model.above_genera
        ):
            problems.append(f"{ev.vertex}: ports do not match model")
    values = tuple(sorted({ev.value for ev in p.events}))
    heights = {p.gf[v] for v in p.graph.vertex_ids}
    return InvariantsReport(
        global_chi=manifold_chi(p),
        connected=_tracking_connected(p),
        orientable=True,
        singular_values=values,
        singular_values_match=set(values) == heights,
        certificate_problems=tuple(problems),
    )


def _event_dict(ev: Event) -> dict:
    m = ev.model
    d = {
        "vertex": m.vertex,
        "value": format_fraction(ev.value),
        "kind": m.kind,
        "class": m.vclass.kind.value,
        "side": m.vclass.side.value if m.vclass.side else None,
        "ports_below": list(ev.ports_below),
        "ports_above": list(ev.ports_above),
        "below_genera": list(m.below_genera),
        "above_genera": list(m.above_genera),
    }
    cert = getattr(m, "cert", None)
    if isinstance(m, FoldedExtremumModel):
        d["partition"] = [list(m.partition[0]), list(m.partition[1])]
    if isinstance(m, FoldCapModel):
        d["k"] = m.k
        d["index1_curves"] = m.index1_curves
    d["schedule"] = [mv.to_dict() for mv in cert.schedule] if cert else []
    d["n1"] = cert.n1 if cert else 0
    d["n2"] = cert.n2 if cert else 0
    d["chi"] = m.chi
    d["tags"] = list(m.normal_form_tags)
    return d


def plan_to_dict(p: RealizationPlan) -> dict:
    inv = p.invariants_report or plan_invariants(p)
    return {
        "graph": {
            "vertices": [
                {"id": vx.id, "height": None if vx.height is None else format_fraction(vx.height)}
                for vx in p.graph.vertices
            ],
            "edges": [
                {"id": e.id, "u": e.u, "v": e.v, "genus": e.genus} for e in p.graph.edges
            ],
        },
        "good_function": {vid: format_fraction(p.gf[vid]) for vid in p.graph.vertex_ids},
        "events": [_event_dict(ev) for ev in p.events],
        "cylinders": [
            {
                "edge": c.edge,
                "genus": c.genus,
                "low": format_fraction(c.interval[0]),
                "high": format_fraction(c.interval[1]),
                "below_vertex": p.tracking[c.edge].low,
                "above_vertex": p.tracking[c.edge].high,
                "up_port": p.tracking[c.edge].up_port,
                "down_port": p.tracking[c.edge].down_port,
                "chi": c.chi,
            }
            for c in p.cylinders
        ],
        "invariants": inv.to_dict(),
    }


def plan_to_json(p: RealizationPlan) -> str:
    return json.dumps(plan_to_dict(p), indent=2) + "\n"

