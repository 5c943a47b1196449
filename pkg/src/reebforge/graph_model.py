"""Genus-labeled graphs, good functions and the vertex case split.

Graph file format (UTF-8, one statement per line)::

    # comment
    vertex a height=1/2
    vertex b
    edge a b genus=2

Edges get integer ids in file order, vertices keep declaration order.
"""
from __future__ import annotations

import enum
import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

VertexId = str
EdgeId = int


class GraphError(ValueError):
    """Base class for problems with an input graph."""


class GraphParseError(GraphError):
    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        self.message = message
        where = f"line {lineno}: " if lineno is not None else ""
        super().__init__(where + message)


class GraphSyntaxError(GraphParseError):
    pass


class DuplicateVertex(GraphParseError):
    pass


class UnknownVertex(GraphParseError):
    pass


class NegativeGenus(GraphParseError):
    pass


class LoopPresent(GraphError):
    pass


class GivenHeightsNotGood(GraphError):
    pass


@dataclass(frozen=True)
class Vertex:
    id: VertexId
    height: Optional[Fraction] = None


@dataclass(frozen=True)
class Edge:
    id: EdgeId
    u: VertexId
    v: VertexId
    genus: int

    @property
    def loop(self) -> bool:
        return self.u == self.v

    def other(self, w: VertexId) -> VertexId:
        return self.v if w == self.u else self.u


@dataclass(frozen=True)
class LabeledGraph:
    """Finite multigraph with a genus label on every edge.

    Self-loops are representable (they are what makes a good function
    impossible) and are reported via :attr:`Edge.loop`.
    """

    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        index: dict[VertexId, Vertex] = {}
        for vx in self.vertices:
            if vx.id in index:
                raise DuplicateVertex(f"duplicate vertex {vx.id!r}")
            index[vx.id] = vx
        for e in self.edges:
            for w in (e.u, e.v):
                if w not in index:
                    raise UnknownVertex(f"edge {e.id} references unknown vertex {w!r}")
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[VertexId, VertexId, int]],
        heights: Optional[Mapping[VertexId, object]] = None,
    ) -> "LabeledGraph":
        """Build a graph from ``(u, v, genus)`` triples.

        Vertices are ordered by first appearance; ``heights`` may name
        additional isolated vertices.
        """
        order: dict[VertexId, None] = {}
        triples = list(edges)
        for u, v, _ in triples:
            order.setdefault(u)
            order.setdefault(v)
        for w in heights or ():
            order.setdefault(w)
        hs = {w: Fraction(h) for w, h in (heights or {}).items()}
        verts = tuple(Vertex(w, hs.get(w)) for w in order)
        es = tuple(Edge(i, u, v, int(q)) for i, (u, v, q) in enumerate(triples))
        return cls(verts, es)

    def vertex(self, vid: VertexId) -> Vertex:
        return self._index[vid]

    @property
    def vertex_ids(self) -> tuple[VertexId, ...]:
        return tuple(vx.id for vx in self.vertices)

    def incident(self, vid: VertexId) -> list[Edge]:
        return [e for e in self.edges if vid in (e.u, e.v)]

    def degree(self, vid: VertexId) -> int:
        # a loop counts twice, as usual
        return sum((e.u == vid) + (e.v == vid) for e in self.edges)

    @property
    def loops(self) -> list[Edge]:
        return [e for e in self.edges if e.loop]

    def given_heights(self) -> dict[VertexId, Fraction]:
        return {vx.id: vx.height for vx in self.vertices if vx.height is not None}

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        adj = defaultdict(set)
        for e in self.edges:
            adj[e.u].add(e.v)
            adj[e.v].add(e.u)
        seen = {self.vertices[0].id}
        stack = [self.vertices[0].id]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def structure(self):
        """Hashable abstract structure, used for round-trip comparisons."""
        return (
            tuple((vx.id, vx.height) for vx in self.vertices),
            tuple((e.u, e.v, e.genus) for e in self.edges),
        )


@dataclass(frozen=True)
class GoodFunction:
    heights: Mapping[VertexId, Fraction]

    def __getitem__(self, vid: VertexId) -> Fraction:
        return self.heights[vid]

    def bad_edges(self, g: LabeledGraph) -> list[Edge]:
        return [e for e in g.edges if self.heights[e.u] == self.heights[e.v]]

    def is_good_for(self, g: LabeledGraph) -> bool:
        if set(self.heights) != set(g.vertex_ids):
            return False
        return not self.bad_edges(g)


class Kind(enum.Enum):
    INTERIOR = "interior"
    EXTREMUM_MULTI = "extremum-multi"
    EXTREMUM_DEG1 = "extremum-deg1"


class Side(enum.Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class VertexClass:
    kind: Kind
    side: Optional[Side] = None

    @property
    def is_extremum(self) -> bool:
        return self.kind is not Kind.INTERIOR


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str

    def __str__(self):
        return self.message


_HEIGHT_RE = re.compile(r"^-?\d+(/\d+)?$")
_GENUS_RE = re.compile(r"^-?\d+$")
_ID_RE = re.compile(r"^[^\s#=]+$")


def _parse_height(token: str, lineno: int) -> Fraction:
    if not token.startswith("height="):
        raise GraphSyntaxError(f"expected height=<p>/<q> or height=<int>, got {token!r}", lineno)
    raw = token[len("height="):]
    if not _HEIGHT_RE.match(raw):
        raise GraphSyntaxError(f"malformed height {raw!r}", lineno)
    try:
        return Fraction(raw)
    except ZeroDivisionError:
        raise GraphSyntaxError(f"zero denominator in height {raw!r}", lineno) from None


def parse_graph(text: str) -> LabeledGraph:
    vertices: dict[VertexId, Vertex] = {}
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head, args = words[0], words[1:]
        if head == "vertex":
            if len(args) not in (1, 2) or not _ID_RE.match(args[0]):
                raise GraphSyntaxError("usage: vertex <id> [height=<p>/<q>|<int>]", lineno)
            vid = args[0]
            if vid in vertices:
                raise DuplicateVertex(f"duplicate vertex {vid!r}", lineno)
            height = _parse_height(args[1], lineno) if len(args) == 2 else None
            vertices[vid] = Vertex(vid, height)
        elif head == "edge":
            if len(args) != 3 or not args[2].startswith("genus="):
                raise GraphSyntaxError("usage: edge <u> <v> genus=<nonneg-int>", lineno)
            u, v, gtok = args
            for w in (u, v):
                if w not in vertices:
                    raise UnknownVertex(f"edge references unknown vertex {w!r}", lineno)
            graw = gtok[len("genus="):]
            if not _GENUS_RE.match(graw):
                raise GraphSyntaxError(f"malformed genus {graw!r}", lineno)
            genus = int(graw)
            if genus < 0:
                raise NegativeGenus(f"negative genus {genus}", lineno)
            edges.append(Edge(len(edges), u, v, genus))
        else:
            raise GraphSyntaxError(f"unknown statement {head!r}", lineno)
    return LabeledGraph(tuple(vertices.values()), tuple(edges))


def _format_height(h: Fraction) -> str:
    return str(h.numerator) if h.denominator == 1 else f"{h.numerator}/{h.denominator}"


def format_graph(g: LabeledGraph) -> str:
    """Serialize ``g`` in the graph file format; inverse of :func:`parse_graph`."""
    lines = []
    for vx in g.vertices:
        if vx.height is None:
            lines.append(f"vertex {vx.id}")
        else:
            lines.append(f"vertex {vx.id} height={_format_height(vx.height)}")
    for e in g.edges:
        lines.append(f"edge {e.u} {e.v} genus={e.genus}")
    return "\n".join(lines) + "\n"


def validate(g: LabeledGraph) -> list[Diagnostic]:
    """Standing hypotheses on an input graph. Loops are not reported here."""
    report = []
    if not g.edges:
        report.append(Diagnostic("no-edge", "no edge"))
    if g.vertices and not g.is_connected():
        report.append(Diagnostic("not-connected", "not connected"))
    if not g.vertices:
        report.append(Diagnostic("not-connected", "not connected: no vertex"))
    for e in g.edges:
        if e.genus < 0:
            report.append(Diagnostic("negative-genus", f"edge {e.id} has negative genus {e.genus}"))
    return report


def has_good_function(g: LabeledGraph) -> bool:
    return not g.loops


def synthesize_good_function(g: LabeledGraph, policy: str = "distinct-integers") -> GoodFunction:
    """Heights injective on every edge.

    ``distinct-integers`` gives the i-th declared vertex height i;
    ``respect-given-heights`` keeps the heights stored on the graph and
    checks them.
    """
    if not has_good_function(g):
        e = g.loops[0]
        raise LoopPresent(f"no good function: loop present at vertex {e.u!r} (edge {e.id})")
    if policy == "distinct-integers":
        return GoodFunction({vid: Fraction(i) for i, vid in enumerate(g.vertex_ids)})
    if policy != "respect-given-heights":
        raise ValueError(f"unknown policy {policy!r}")
    given = g.given_heights()
    missing = [vid for vid in g.vertex_ids if vid not in given]
    if missing:
        raise GivenHeightsNotGood(f"vertex {missing[0]!r} has no height")
    gf = GoodFunction(given)
    bad = gf.bad_edges(g)
    if bad:
        e = bad[0]
        raise GivenHeightsNotGood(
            f"edge {e.id} ({e.u}-{e.v}) has equal endpoint heights {_format_height(gf[e.u])}"
        )
    return gf


def classify_vertices(g: LabeledGraph, gf: GoodFunction) -> dict[VertexId, VertexClass]:
    out = {}
    for vid in g.vertex_ids:
        h = gf[vid]
        nbrs = [gf[e.other(vid)] for e in g.incident(vid)]
        lower = any(x < h for x in nbrs)
        higher = any(x > h for x in nbrs)
        if lower and higher:
            out[vid] = VertexClass(Kind.INTERIOR)
            continue
        side = Side.MAX if lower else Side.MIN
        kind = Kind.EXTREMUM_DEG1 if g.degree(vid) == 1 else Kind.EXTREMUM_MULTI
        out[vid] = VertexClass(kind, side)
    return out


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _dot_quote(s: str) -> str:
    return '"' + _dot_escape(s) + '"'


def export_dot(g: LabeledGraph, gf: Optional[GoodFunction] = None) -> str:
    """Deterministic DOT text; genus labels edges, heights label vertices."""
    heights = dict(gf.heights) if gf is not None else g.given_heights()
    lines = ["graph G {"]
    for vx in g.vertices:
        if vx.id in heights:
            label = f"{_dot_escape(vx.id)}\\nh={_format_height(Fraction(heights[vx.id]))}"
            lines.append(f"  {_dot_quote(vx.id)} [label=\"{label}\"];")
        else:
            lines.append(f"  {_dot_quote(vx.id)};")
    for e in g.edges:
        lines.append(f"  {_dot_quote(e.u)} -- {_dot_quote(e.v)} [label=\"{e.genus}\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def format_fraction(h) -> str:
    """Rational as a ``p/q`` string, the JSON wire format for heights."""
    h = Fraction(h)
    return f"{h.numerator}/{h.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)
