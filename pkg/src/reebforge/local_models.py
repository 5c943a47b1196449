"""Vertex-local function models and edge cylinders.

Each model knows the genera of the level-surface components it consumes
from below and emits above in a fixed port order; the sweep engine and
the assembler both rely on that order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .graph_model import EdgeId, Kind, Side, VertexClass, VertexId
from .surface_algebra import CobordismCertificate, SurfaceCollection, plan_cobordism

MORSE = "Morse"
SUBMERSION_THEN_MORSE = "SubmersionThenMorse"
MORSE_THEN_MORSE = "MorseThenMorse"
FOLD_THEN_HEIGHT = "FoldThenHeight"
NORMAL_FORMS = (MORSE, SUBMERSION_THEN_MORSE, MORSE_THEN_MORSE, FOLD_THEN_HEIGHT)


class ModelError(ValueError):
    pass


class DegreeTooSmall(ModelError):
    pass


class EdgesOnBothSides(ModelError):
    pass


class BadInterval(ModelError):
    pass


@dataclass(frozen=True)
class VertexModel:
    vertex: VertexId
    vclass: VertexClass
    value: Fraction

    kind = "vertex"

    @property
    def below_genera(self) -> tuple[int, ...]:
        raise NotImplementedError

    @property
    def above_genera(self) -> tuple[int, ...]:
        raise NotImplementedError

    @property
    def normal_form_tags(self) -> tuple[str, ...]:
        raise NotImplementedError

    @property
    def chi(self) -> int:
        raise NotImplementedError

    @property
    def singular_point_count(self) -> int:
        return len(self.normal_form_tags)


@dataclass(frozen=True)
class InteriorModel(VertexModel):
    cert: CobordismCertificate

    kind = "interior"

    @property
    def below_genera(self):
        return self.cert.incoming.genera

    @property
    def above_genera(self):
        return self.cert.outgoing.genera

    @property
    def normal_form_tags(self):
        return tuple(tag for _, tag in self.cert.singular_points)

    @property
    def chi(self):
        return self.cert.chi


@dataclass(frozen=True)
class FoldedExtremumModel(VertexModel):
    """Cobordism from the A1 edge group to the A2 group, folded at the apex.

    Every incident component lies on one side of ``value``; at ``value``
    they all meet in a single connected singular level.
    """

    partition: tuple[tuple[EdgeId, ...], tuple[EdgeId, ...]]
    cert: CobordismCertificate

    kind = "folded-extremum"

    @property
    def side(self) -> Side:
        return self.vclass.side

    @property
    def port_edges(self) -> tuple[EdgeId, ...]:
        return self.partition[0] + self.partition[1]

    @property
    def _genera(self):
        return self.cert.incoming.genera + self.cert.outgoing.genera

    @property
    def below_genera(self):
        return self._genera if self.side is Side.MAX else ()

    @property
    def above_genera(self):
        return self._genera if self.side is Side.MIN else ()

    @property
    def normal_form_tags(self):
        # handle points sit on the parabola; the rest of the apex level is
        # regular for the Morse piece and singular only after projection
        return tuple(tag for _, tag in self.cert.singular_points) + (SUBMERSION_THEN_MORSE,)

    @property
    def chi(self):
        return self.cert.chi


@dataclass(frozen=True)
class FoldCapModel(VertexModel):
    k: int
    index1_curves: int

    kind = "fold-cap"

    @property
    def side(self) -> Side:
        return self.vclass.side

    @property
    def below_genera(self):
        return (self.k,) if self.side is Side.MAX else ()

    @property
    def above_genera(self):
        return (self.k,) if self.side is Side.MIN else ()

    @property
    def normal_form_tags(self):
        if self.k == 0:
            return (MORSE,)
        # one definite fold circle plus the index-1 fold curves
        return (FOLD_THEN_HEIGHT,) * (1 + self.index1_curves)

    @property
    def chi(self):
        return 1 - self.k


@dataclass(frozen=True)
class CylinderModel:
    edge: EdgeId
    genus: int
    interval: tuple[Fraction, Fraction]

    @property
    def chi(self) -> int:
        return 2 - 2 * self.genus

    @property
    def singular_points(self) -> tuple:
        return ()


def build_interior_model(
    v: VertexId, below_genera: Sequence[int], above_genera: Sequence[int], value
) -> InteriorModel:
    cert = plan_cobordism(
        SurfaceCollection.of(below_genera), SurfaceCollection.of(above_genera), value
    )
    return InteriorModel(v, VertexClass(Kind.INTERIOR), Fraction(value), cert)


def build_folded_extremum_model(
    v: VertexId,
    incident_genera_by_edge: Mapping[EdgeId, int],
    value,
    side: Side,
    far_heights: Optional[Mapping[EdgeId, Fraction]] = None,
) -> FoldedExtremumModel:
    """``far_heights`` (height of the other endpoint per edge) enables the
    one-sidedness check."""
    edges = sorted(incident_genera_by_edge)
    if len(edges) < 2:
        raise DegreeTooSmall(f"vertex {v!r} has degree {len(edges)}; use a fold cap")
    if far_heights is not None:
        value = Fraction(value)
        wrong = [e for e in edges
                 if (far_heights[e] >= value if side is Side.MAX else far_heights[e] <= value)]
        if wrong:
            raise EdgesOnBothSides(f"vertex {v!r}: edges {wrong} are not on the {side.value} side")
    a1, a2 = tuple(edges[:1]), tuple(edges[1:])
    cert = plan_cobordism(
        SurfaceCollection.of(incident_genera_by_edge[e] for e in a1),
        SurfaceCollection.of(incident_genera_by_edge[e] for e in a2),
        value,
        tag=MORSE_THEN_MORSE,
    )
    return FoldedExtremumModel(
        v, VertexClass(Kind.EXTREMUM_MULTI, side), Fraction(value), (a1, a2), cert
    )


def build_cap_model(k: int, value, side: Side, v: VertexId = "") -> FoldCapModel:
    if k < 0:
        raise ModelError(f"negative genus {k}")
    return FoldCapModel(
        v, VertexClass(Kind.EXTREMUM_DEG1, side), Fraction(value), k, max(k - 1, 0)
    )


def build_edge_model(e: EdgeId, genus: int, low, high) -> CylinderModel:
    low, high = Fraction(low), Fraction(high)
    if not low < high:
        raise BadInterval(f"edge {e}: need low < high, got ({low}, {high})")
    return CylinderModel(e, genus, (low, high))
