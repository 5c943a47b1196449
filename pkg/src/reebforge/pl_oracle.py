"""Reeb graphs of piecewise-linear functions on triangulated closed surfaces.

This works straight from the definition (components of level sets) and
shares no code with the plan sweep; it exists to check the quotient
semantics the sweep relies on.

Ties between scalar values are broken by vertex index, so every vertex
gets a distinct rank and every level strictly between two consecutive
ranks is regular.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .reeb_sweep import ReebGraph, UnionFind


class MeshError(ValueError):
    pass


class ParseError(MeshError):
    pass


class NotClosedSurface(MeshError):
    pass


class DisconnectedSurface(MeshError):
    pass


@dataclass(frozen=True)
class SimplicialSurface:
    positions: tuple[tuple[float, float, float], ...]
    values: tuple[Fraction, ...]
    triangles: tuple[tuple[int, int, int], ...]
    _rank: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        order = sorted(range(len(self.values)), key=lambda i: (self.values[i], i))
        rank = [0] * len(order)
        for r, i in enumerate(order):
            rank[i] = r
        object.__setattr__(self, "_rank", tuple(rank))

    @property
    def rank(self) -> tuple[int, ...]:
        return self._rank

    def edges(self) -> set[tuple[int, int]]:
        out = set()
        for a, b, c in self.triangles:
            for u, v in ((a, b), (b, c), (c, a)):
                out.add((min(u, v), max(u, v)))
        return out

    def with_values(self, values: Sequence) -> "SimplicialSurface":
        return SimplicialSurface(self.positions, tuple(Fraction(x) for x in values), self.triangles)


def _check_closed(n: int, tris: Sequence[tuple[int, int, int]]) -> None:
    edge_tris = defaultdict(list)
    for t, (a, b, c) in enumerate(tris):
        if len({a, b, c}) < 3:
            raise NotClosedSurface(f"triangle {t} is degenerate")
        for u, v in ((a, b), (b, c), (c, a)):
            edge_tris[(min(u, v), max(u, v))].append(t)
    for e, ts in edge_tris.items():
        if len(ts) != 2:
            kind = "boundary" if len(ts) == 1 else "non-manifold"
            raise NotClosedSurface(f"{kind} edge {e} borders {len(ts)} triangle(s)")

    link = defaultdict(lambda: defaultdict(set))
    for a, b, c in tris:
        for v, x, y in ((a, b, c), (b, c, a), (c, a, b)):
            link[v][x].add(y)
            link[v][y].add(x)
    for v in range(n):
        if v not in link:
            raise NotClosedSurface(f"vertex {v} is in no triangle")
        adj = link[v]
        if any(len(nb) != 2 for nb in adj.values()):
            raise NotClosedSurface(f"link of vertex {v} is not a cycle")
        start = next(iter(adj))
        seen, stack = {start}, [start]
        while stack:
            for y in adj[stack.pop()]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(adj):
            raise NotClosedSurface(f"link of vertex {v} is not a single cycle")

    uf = UnionFind()
    for v in range(n):
        uf.add(v)
    for a, b, c in tris:
        uf.union(a, b)
        uf.union(a, c)
    if uf.classes() != 1:
        raise DisconnectedSurface(f"surface has {uf.classes()} connected components")


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split()
        if line:
            yield lineno, line


def load_off(text: str, values_text: Optional[str] = None) -> SimplicialSurface:
    """Parse an ASCII OFF mesh; polygons are fan-triangulated.

    The scalar field is the z coordinate unless ``values_text`` (one number
    per line, one line per vertex) is given.
    """
    lines = list(_tokens(text))
    if not lines or not lines[0][1][0].endswith("OFF"):
        raise ParseError("missing OFF header")
    lineno, head = lines[0]
    rest = lines[1:]
    counts = head[1:]
    if not counts:
        if not rest:
            raise ParseError("missing counts line")
        lineno, counts = rest[0]
        rest = rest[1:]
    try:
        nv, nf = int(counts[0]), int(counts[1])
    except (IndexError, ValueError):
        raise ParseError(f"line {lineno}: bad counts line") from None
    if len(rest) < nv + nf:
        raise ParseError(f"expected {nv} vertices and {nf} faces, file is short")

    positions, zs = [], []
    for lineno, toks in rest[:nv]:
        try:
            x, y, z = (Fraction(t) for t in toks[:3])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"line {lineno}: bad vertex") from None
        if len(toks) < 3:
            raise ParseError(f"line {lineno}: vertex needs 3 coordinates")
        positions.append((float(x), float(y), float(z)))
        zs.append(z)

    tris = []
    for lineno, toks in rest[nv:nv + nf]:
        try:
            k = int(toks[0])
            idx = [int(t) for t in toks[1:1 + k]]
        except (IndexError, ValueError):
            raise ParseError(f"line {lineno}: bad face") from None
        if len(idx) != k or k < 3:
            raise ParseError(f"line {lineno}: face needs at least 3 vertex indices")
        if any(not 0 <= i < nv for i in idx):
            raise ParseError(f"line {lineno}: vertex index out of range")
        for j in range(1, k - 1):
            tris.append((idx[0], idx[j], idx[j + 1]))

    if values_text is not None:
        vals = []
        for lineno, toks in _tokens(values_text):
            try:
                vals.append(Fraction(toks[0]))
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"values line {lineno}: not a number") from None
        if len(vals) != nv:
            raise ParseError(f"values file has {len(vals)} entries for {nv} vertices")
        zs = vals

    _check_closed(nv, tris)
    return SimplicialSurface(tuple(positions), tuple(zs), tuple(tris))


def euler_from_mesh(s: SimplicialSurface) -> int:
    return len(s.values) - len(s.edges()) + len(s.triangles)


def link_components(s: SimplicialSurface, v: int) -> tuple[int, int]:
    """Number of lower and upper arcs in the link cycle of ``v``."""
    rank = s.rank
    adj = defaultdict(set)
    for a, b, c in s.triangles:
        if v in (a, b, c):
            x, y = [w for w in (a, b, c) if w != v]
            adj[x].add(y)
            adj[y].add(x)
    # walk the cycle once
    start = min(adj)
    cycle, prev, cur = [start], None, start
    while True:
        nxt = next(w for w in sorted(adj[cur]) if w != prev)
        if nxt == start:
            break
        cycle.append(nxt)
        prev, cur = cur, nxt
    below = [rank[w] < rank[v] for w in cycle]
    if all(below):
        return 1, 0
    if not any(below):
        return 0, 1
    changes = sum(below[i] != below[i - 1] for i in range(len(below)))
    return changes // 2, changes // 2


def critical_vertices(s: SimplicialSurface) -> dict[int, str]:
    out = {}
    for v in range(len(s.values)):
        lo, up = link_components(s, v)
        if lo == 0:
            out[v] = "min"
        elif up == 0:
            out[v] = "max"
        elif lo > 1:
            out[v] = "saddle"
    return out


def _gap_components(s, edge_tris, tri_range, r):
    """Contours at the level between ranks ``r`` and ``r + 1``:
    a map from crossing triangle to a representative."""
    rank = s.rank
    crossing = [t for t, (lo, hi) in enumerate(tri_range) if lo <= r < hi]
    uf = UnionFind()
    for t in crossing:
        uf.add(t)
        a, b, c = s.triangles[t]
        for u, v in ((a, b), (b, c), (c, a)):
            if min(rank[u], rank[v]) <= r < max(rank[u], rank[v]):
                for t2 in edge_tris[(min(u, v), max(u, v))]:
                    if t2 != t:
                        uf.union(t, t2)
    return {t: uf.find(t) for t in crossing}


def reeb_graph_pl(s: SimplicialSurface) -> ReebGraph:
    n = len(s.values)
    rank = s.rank
    order = sorted(range(n), key=lambda i: rank[i])
    edge_tris = defaultdict(list)
    star = defaultdict(set)
    for t, (a, b, c) in enumerate(s.triangles):
        for u, v in ((a, b), (b, c), (c, a)):
            edge_tris[(min(u, v), max(u, v))].append(t)
        for v in (a, b, c):
            star[v].add(t)
    tri_range = [(min(rank[a], rank[b], rank[c]), max(rank[a], rank[b], rank[c]))
                 for a, b, c in s.triangles]
    critical = critical_vertices(s)

    arcs = UnionFind()
    starts, ends = {}, {}
    prev = None
    for r, v in enumerate(order):
        cur = _gap_components(s, edge_tris, tri_range, r) if r < n - 1 else {}
        lower = {("arc", r - 1, prev[t]) for t in star[v] if prev and t in prev}
        upper = {("arc", r, cur[t]) for t in star[v] if t in cur}
        touching = {root for t, root in cur.items() if t in star[v]}
        for t, root in cur.items():
            arcs.add(("arc", r, root))
            # a contour away from v is the same set of triangles one gap lower
            if root not in touching:
                arcs.union(("arc", r - 1, prev[t]), ("arc", r, root))
        if v in critical:
            for a in lower:
                ends[a] = v
            for a in upper:
                starts[a] = v
        else:
            (a,), (b,) = lower, upper
            arcs.union(a, b)
        prev = cur

    lo_end = {arcs.find(a): v for a, v in starts.items()}
    hi_end = {arcs.find(a): v for a, v in ends.items()}
    edges = sorted(((lo_end[k], hi_end[k], 0) for k in lo_end), key=lambda e: (rank[e[0]], rank[e[1]]))
    vertices = tuple((v, s.values[v]) for v in order if v in critical)
    return ReebGraph(vertices, tuple(edges))
