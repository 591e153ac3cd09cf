"""SVG drawing of a developed layout and OBJ export of its ideal prisms."""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from .realize import Layout, PrismGeometry, euclidean_circumcircle

DEDUP_TOL = 1e-9
ARC_TOL = 1e-12

_SVG_HEAD = ('<?xml version="1.0" encoding="UTF-8"?>\n'
             '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
             'viewBox="-1.05 -1.05 2.1 2.1" width="800" height="800">\n')


def _num(v: float) -> str:
    return f"{v:.9f}".rstrip("0").rstrip(".") if np.isfinite(v) else "0"


def geodesic_arc(p: complex, q: complex) -> str:
    """SVG path command from the current point ``p`` to ``q`` along the disk geodesic."""
    cross = p.real * q.imag - p.imag * q.real
    if abs(cross) <= ARC_TOL or abs(p) <= ARC_TOL:
        return f"L {_num(q.real)} {_num(q.imag)}"
    # the geodesic lies on the circle through p, q and the inverse of p
    pinv = p / abs(p) ** 2
    centre, radius = euclidean_circumcircle((p, q, pinv))
    a, b = p - centre, q - centre
    sweep = 1 if a.real * b.imag - a.imag * b.real > 0 else 0
    r = _num(radius)
    return f"A {r} {r} 0 0 {sweep} {_num(q.real)} {_num(q.imag)}"


def face_path(z) -> str:
    parts = [f"M {_num(z[0].real)} {_num(z[0].imag)}"]
    for i in range(3):
        parts.append(geodesic_arc(complex(z[i]), complex(z[(i + 1) % 3])))
    parts.append("Z")
    return " ".join(parts)


def export_svg(layout: Layout | None, circumcircles: bool = False) -> bytes:
    """Poincare-disk picture of the layout; ``None`` gives an empty document."""
    out = [_SVG_HEAD, '<g transform="scale(1,-1)">\n',
           '<circle class="disk" cx="0" cy="0" r="1" fill="none" stroke="black" stroke-width="0.005"/>\n']
    if layout is not None:
        Z = layout.poincare
        out.append('<g class="faces" fill="none" stroke="navy" stroke-width="0.003">\n')
        for f in range(layout.face_count):
            out.append(f'<path class="face" data-face="{f}" d="{face_path(Z[f])}"/>\n')
        out.append("</g>\n")
        if circumcircles:
            out.append('<g class="circumcircles" fill="none" stroke="firebrick" stroke-width="0.002">\n')
            for f in range(layout.face_count):
                circ = euclidean_circumcircle(Z[f])
                if circ is None:
                    continue
                centre, radius = circ
                out.append(f'<circle class="circumcircle" data-face="{f}" cx="{_num(centre.real)}" '
                           f'cy="{_num(centre.imag)}" r="{_num(radius)}"/>\n')
            out.append("</g>\n")
    out.append("</g>\n</svg>\n")
    return "".join(out).encode("utf-8")


def _prism_faces(base: int) -> list[tuple[int, ...]]:
    """Local indices: upper corners 0..2, lower corners 3..5; outward orientation."""
    faces = [(0, 1, 2), (3, 5, 4)]
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        faces.append((j, j + 3, k + 3, k))
    return [tuple(base + v for v in f) for f in faces]


def export_obj(prisms: list[PrismGeometry]) -> bytes:
    """Prisms with their ideal vertices on the unit sphere, one object per face.

    Points closer than 1e-9 share a vertex index.
    """
    pts = (np.concatenate([np.vstack([p.upper, p.lower]) for p in prisms])
           if prisms else np.zeros((0, 3)))
    index = np.arange(len(pts))
    if len(pts):
        for i, j in sorted(cKDTree(pts).query_pairs(DEDUP_TOL)):
            index[j] = min(index[j], index[i])
        # resolve chains so every point maps to the first point of its cluster
        while True:
            nxt = index[index]
            if np.array_equal(nxt, index):
                break
            index = nxt
    kept = np.unique(index)
    number = {int(k): n + 1 for n, k in enumerate(kept)}
    lines = ["# ideal prisms, unit-sphere vertices", f"# {len(prisms)} prisms"]
    lines += [f"v {pts[k, 0]:.12f} {pts[k, 1]:.12f} {pts[k, 2]:.12f}" for k in kept]
    for f in range(len(prisms)):
        lines.append(f"o face_{f}")
        for face in _prism_faces(6 * f):
            lines.append("f " + " ".join(str(number[int(index[v])]) for v in face))
    return ("\n".join(lines) + "\n").encode("utf-8")
