"""Closed orientable surface collections under 1- and 2-handle surgery.

A collection is an ordered tuple of ``(component id, genus)`` pairs.
Moves that modify a component keep its position; moves that create
components remove their operands and append the new components, so
replaying a schedule produces components in a predictable order.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

ComponentId = int


class SurgeryError(ValueError):
    pass


class UnknownComponent(SurgeryError):
    pass


class IllegalMove(SurgeryError):
    pass


class EmptySide(SurgeryError):
    pass


@dataclass(frozen=True)
class SurfaceCollection:
    components: tuple[tuple[ComponentId, int], ...] = ()
    next_id: int = field(default=-1, compare=False)

    def __post_init__(self):
        ids = [cid for cid, _ in self.components]
        if len(set(ids)) != len(ids):
            raise SurgeryError(f"duplicate component ids in {ids}")
        if any(q < 0 for _, q in self.components):
            raise SurgeryError("negative genus")
        if self.next_id <= max(ids, default=-1):
            object.__setattr__(self, "next_id", max(ids, default=-1) + 1)

    @classmethod
    def of(cls, genera: Iterable[int]) -> "SurfaceCollection":
        """Collection with ids ``0..n-1`` in the given order."""
        return cls(tuple(enumerate(int(q) for q in genera)))

    @property
    def genera(self) -> tuple[int, ...]:
        return tuple(q for _, q in self.components)

    def multiset(self) -> Counter:
        return Counter(self.genera)

    def same_surfaces(self, other: "SurfaceCollection") -> bool:
        return self.multiset() == other.multiset()

    def genus_of(self, cid: ComponentId) -> int:
        for c, q in self.components:
            if c == cid:
                return q
        raise UnknownComponent(f"no component {cid}")

    def __len__(self):
        return len(self.components)


def euler_characteristic(s: SurfaceCollection) -> int:
    return sum(2 - 2 * q for q in s.genera)


class HandleKind(enum.Enum):
    ONE = 1
    TWO = 2


class Op(enum.Enum):
    JOIN = "join"
    ADD_GENUS = "add-genus"
    SPLIT = "split"
    DROP_GENUS = "drop-genus"


_KIND_OF = {
    Op.JOIN: HandleKind.ONE,
    Op.ADD_GENUS: HandleKind.ONE,
    Op.SPLIT: HandleKind.TWO,
    Op.DROP_GENUS: HandleKind.TWO,
}


@dataclass(frozen=True)
class HandleMove:
    op: Op
    operands: tuple[ComponentId, ...]
    genus_left: int = 0
    genus_right: int = 0
    # ids for components this move creates; allocated on replay if empty
    created: tuple[ComponentId, ...] = ()

    @property
    def kind(self) -> HandleKind:
        return _KIND_OF[self.op]

    @classmethod
    def join(cls, a, b, new=None):
        return cls(Op.JOIN, (a, b), created=() if new is None else (new,))

    @classmethod
    def add_genus(cls, a):
        return cls(Op.ADD_GENUS, (a,))

    @classmethod
    def split(cls, a, left, right, new=None):
        return cls(Op.SPLIT, (a,), left, right, () if new is None else tuple(new))

    @classmethod
    def drop_genus(cls, a):
        return cls(Op.DROP_GENUS, (a,))

    def to_dict(self) -> dict:
        d = {"handle": self.kind.value, "op": self.op.value, "operands": list(self.operands)}
        if self.op is Op.SPLIT:
            d["genus_left"] = self.genus_left
            d["genus_right"] = self.genus_right
        if self.created:
            d["created"] = list(self.created)
        return d


def apply_handle(s: SurfaceCollection, m: HandleMove) -> SurfaceCollection:
    comps = list(s.components)
    pos = {cid: i for i, (cid, _) in enumerate(comps)}
    for cid in m.operands:
        if cid not in pos:
            raise UnknownComponent(f"{m.op.value}: no component {cid}")
    n_new = {Op.JOIN: 1, Op.SPLIT: 2}.get(m.op, 0)
    if m.created and len(m.created) != n_new:
        raise IllegalMove(f"{m.op.value} creates {n_new} components, got ids {m.created}")
    created = m.created or tuple(range(s.next_id, s.next_id + n_new))
    if any(c in pos for c in created):
        raise IllegalMove(f"{m.op.value}: created id clashes with {created}")
    next_id = max((s.next_id, *(c + 1 for c in created)))

    if m.op is Op.ADD_GENUS:
        (a,) = m.operands
        cid, q = comps[pos[a]]
        comps[pos[a]] = (cid, q + 1)
    elif m.op is Op.DROP_GENUS:
        (a,) = m.operands
        cid, q = comps[pos[a]]
        if q < 1:
            raise IllegalMove(f"drop-genus on sphere component {a}")
        comps[pos[a]] = (cid, q - 1)
    elif m.op is Op.JOIN:
        a, b = m.operands
        if a == b:
            raise IllegalMove("join needs two distinct components")
        total = comps[pos[a]][1] + comps[pos[b]][1]
        comps = [c for c in comps if c[0] not in (a, b)]
        comps.append((created[0], total))
    else:
        (a,) = m.operands
        q = comps[pos[a]][1]
        if m.genus_left < 0 or m.genus_right < 0 or m.genus_left + m.genus_right != q:
            raise IllegalMove(
                f"split of genus-{q} component into {m.genus_left}+{m.genus_right}"
            )
        comps = [c for c in comps if c[0] != a]
        comps.append((created[0], m.genus_left))
        comps.append((created[1], m.genus_right))
    return SurfaceCollection(tuple(comps), next_id)


def replay(s: SurfaceCollection, schedule: Sequence[HandleMove]) -> SurfaceCollection:
    for m in schedule:
        s = apply_handle(s, m)
    return s


@dataclass(frozen=True)
class CobordismCertificate:
    """A 3-dimensional piece between two collections, as a handle schedule."""

    incoming: SurfaceCollection
    outgoing: SurfaceCollection
    schedule: tuple[HandleMove, ...]
    n1: int
    n2: int
    chi: int
    singular_value: Fraction
    singular_points: tuple[tuple[int, str], ...]

    def replay(self) -> SurfaceCollection:
        return replay(self.incoming, self.schedule)

    def check(self) -> list[str]:
        """Violated certificate invariants (empty when consistent)."""
        problems = []
        if not self.replay().same_surfaces(self.outgoing):
            problems.append("schedule does not reproduce outgoing surfaces")
        if self.n1 + self.n2 < 1:
            problems.append("no handles")
        ones = sum(m.kind is HandleKind.ONE for m in self.schedule)
        if (ones, len(self.schedule) - ones) != (self.n1, self.n2):
            problems.append("handle counts disagree with schedule")
        if self.chi != euler_characteristic(self.incoming) - self.n1 + self.n2:
            problems.append("chi bookkeeping is off")
        if tuple(i for i, _ in self.singular_points) != tuple(m.kind.value for m in self.schedule):
            problems.append("singular point indices disagree with handles")
        return problems


def plan_cobordism(
    S: SurfaceCollection,
    S_prime: SurfaceCollection,
    value,
    tag: str = "Morse",
) -> CobordismCertificate:
    """Canonical handle schedule from ``S`` to ``S_prime``.

    2-handles reduce every incoming component to a sphere, 1-handles tube
    the spheres into one sphere, 2-handles pinch that sphere into one sphere
    per target component, then 1-handles grow the target genera. A single
    sphere on both sides gets an add/drop pair so the piece has a singular
    point.
    """
    if not len(S) or not len(S_prime):
        raise EmptySide("both sides of a cobordism need at least one component")
    moves: list[HandleMove] = []
    cur = S
    ordered = sorted(cur.components)

    def push(m: HandleMove):
        nonlocal cur
        # pin created ids so the schedule replays identically anywhere
        if m.op in (Op.JOIN, Op.SPLIT) and not m.created:
            n = 1 if m.op is Op.JOIN else 2
            m = HandleMove(m.op, m.operands, m.genus_left, m.genus_right,
                           tuple(range(cur.next_id, cur.next_id + n)))
        moves.append(m)
        cur = apply_handle(cur, m)
        return m

    for cid, q in ordered:
        for _ in range(q):
            push(HandleMove.drop_genus(cid))

    acc = ordered[0][0]
    for cid, _ in ordered[1:]:
        acc = push(HandleMove.join(acc, cid)).created[0]

    targets = sorted(S_prime.components)
    spheres = []
    for _ in targets[1:]:
        left, right = push(HandleMove.split(acc, 0, 0)).created
        spheres.append(left)
        acc = right
    spheres.append(acc)

    for sphere, (_, q) in zip(spheres, targets):
        for _ in range(q):
            push(HandleMove.add_genus(sphere))

    if not moves:
        push(HandleMove.add_genus(acc))
        push(HandleMove.drop_genus(acc))

    n1 = sum(m.kind is HandleKind.ONE for m in moves)
    n2 = len(moves) - n1
    return CobordismCertificate(
        incoming=S,
        outgoing=S_prime,
        schedule=tuple(moves),
        n1=n1,
        n2=n2,
        chi=euler_characteristic(S) - n1 + n2,
        singular_value=Fraction(value),
        singular_points=tuple((m.kind.value, tag) for m in moves),
    )


def certificate_chi(c: CobordismCertificate) -> int:
    return euler_characteristic(c.incoming) - c.n1 + c.n2
