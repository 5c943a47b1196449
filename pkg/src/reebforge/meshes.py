"""Small closed surfaces written as OFF text, used as oracle fixtures."""
from __future__ import annotations

import math


def _off(positions, faces) -> str:
    lines = ["OFF", f"{len(positions)} {len(faces)} 0"]
    for p in positions:
        lines.append(" ".join(_num(x) for x in p))
    for f in faces:
        lines.append(" ".join(str(x) for x in (len(f), *f)))
    return "\n".join(lines) + "\n"


def _num(x) -> str:
    if isinstance(x, int):
        return str(x)
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def octahedron_off() -> str:
    pos = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    faces = [
        (0, 2, 4), (2, 1, 4), (1, 3, 4), (3, 0, 4),
        (2, 0, 5), (1, 2, 5), (3, 1, 5), (0, 3, 5),
    ]
    return _off(pos, faces)


def torus_off(n_major: int = 12, n_minor: int = 8, R: float = 2.0, r: float = 1.0) -> str:
    """Torus standing upright: its core circle lies in the xz-plane, so the
    z coordinate has one minimum, two saddles and one maximum."""
    pos = []
    for i in range(n_major):
        u = 2 * math.pi * (i + 0.25) / n_major
        for j in range(n_minor):
            v = 2 * math.pi * j / n_minor
            rho = R + r * math.cos(v)
            pos.append((rho * math.cos(u), r * math.sin(v), rho * math.sin(u)))
    faces = []
    for i in range(n_major):
        for j in range(n_minor):
            a = i * n_minor + j
            b = ((i + 1) % n_major) * n_minor + j
            c = ((i + 1) % n_major) * n_minor + (j + 1) % n_minor
            d = i * n_minor + (j + 1) % n_minor
            faces.append((a, b, c))
            faces.append((a, c, d))
    return _off(pos, faces)


def slab_with_holes_off(width: int = 3, length: int = 5, holes=((1, 1), (1, 3))) -> str:
    """Boundary of a one-voxel-thick slab with square holes punched through.

    Two holes give a closed genus-2 surface.
    """
    filled = {(x, y) for x in range(width) for y in range(length)} - set(holes)

    def solid(x, y, z):
        return z == 0 and (x, y) in filled

    index: dict = {}
    pos = []

    def vid(p):
        if p not in index:
            index[p] = len(pos)
            pos.append(p)
        return index[p]

    faces = []
    # outward quads: for every filled cell and each of the six directions
    dirs = [
        ((1, 0, 0), [(1, 0, 0), (1, 1, 0), (1, 1, 1), (1, 0, 1)]),
        ((-1, 0, 0), [(0, 0, 0), (0, 0, 1), (0, 1, 1), (0, 1, 0)]),
        ((0, 1, 0), [(0, 1, 0), (0, 1, 1), (1, 1, 1), (1, 1, 0)]),
        ((0, -1, 0), [(0, 0, 0), (1, 0, 0), (1, 0, 1), (0, 0, 1)]),
        ((0, 0, 1), [(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]),
        ((0, 0, -1), [(0, 0, 0), (0, 1, 0), (1, 1, 0), (1, 0, 0)]),
    ]
    for x, y in sorted(filled):
        for (dx, dy, dz), corners in dirs:
            if solid(x + dx, y + dy, dz):
                continue
            q = [vid((x + cx, y + cy, cz)) for cx, cy, cz in corners]
            faces.append((q[0], q[1], q[2]))
            faces.append((q[0], q[2], q[3]))
    return _off(pos, faces)


def genus2_off() -> str:
    return slab_with_holes_off()
