"""Combinatorial closed oriented triangulated surfaces given by a side-gluing table.

Conventions used throughout the package:

* face ``f`` has sides 0, 1, 2 and corners 0, 1, 2; corner ``i`` is the corner
  opposite side ``i``;
* the boundary of a face runs corner 0 -> 1 -> 2 -> 0, so side ``i`` runs from
  corner ``i+1`` to corner ``i+2`` (indices mod 3);
* edge ``k`` is the ``k``-th gluing pair; its *first side* is the
  lexicographically smaller ``(face, side)`` of the pair.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import (
    BoundaryDetected,
    DisconnectedComplex,
    NonOrientable,
    SideReusedInTwoPairs,
    UnpairedSide,
)

Side = tuple[int, int]


@dataclass(frozen=True, eq=False)
class SurfaceComplex:
    face_count: int
    gluing: tuple[tuple[Side, Side], ...]
    side_edge: np.ndarray  # (F, 3) edge id of each side
    edge_sides: np.ndarray  # (E, 2, 2) [first side, second side] as (face, side)
    corner_vertex: np.ndarray  # (F, 3) vertex id of each corner
    vertex_count: int

    @property
    def edge_count(self) -> int:
        return len(self.gluing)

    @property
    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.face_count

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic) // 2

    def mate(self, face: int, side: int) -> Side:
        """The side glued to ``(face, side)``."""
        e = self.side_edge[face, side]
        a, b = self.edge_sides[e]
        if (a[0], a[1]) == (face, side):
            return int(b[0]), int(b[1])
        return int(a[0]), int(a[1])

    def edge_endpoints(self, e: int) -> tuple[int, int]:
        """Vertex ids at the start and end of edge ``e`` along its first side."""
        f, s = self.edge_sides[e, 0]
        return int(self.corner_vertex[f, (s + 1) % 3]), int(self.corner_vertex[f, (s + 2) % 3])

    def face_edges(self, f: int) -> tuple[int, int, int]:
        return tuple(int(e) for e in self.side_edge[f])

    def to_gluing_list(self) -> list[list[list[int]]]:
        return [[list(a), list(b)] for a, b in self.gluing]

    def __repr__(self) -> str:
        return (
            f"SurfaceComplex(F={self.face_count}, E={self.edge_count}, "
            f"V={self.vertex_count}, genus={self.genus})"
        )


def build_complex(face_count: int, gluing) -> SurfaceComplex:
    """Validate a gluing table and derive edges, vertices and the corner table.

    ``gluing`` is a sequence of pairs ``((f, s), (f2, s2))``.  A pair may carry a
    third truthy item meaning the two sides are glued with matching
    orientation, which makes the surface non-orientable and is rejected.
    """
    F = int(face_count)
    if F <= 0:
        raise UnpairedSide("a surface needs at least one face")
    seen: dict[Side, int] = {}
    pairs: list[tuple[Side, Side]] = []
    for k, item in enumerate(gluing):
        if len(item) not in (2, 3):
            raise ValueError(f"gluing entry {k} must be a pair of sides")
        sides = []
        for raw in item[:2]:
            f, s = int(raw[0]), int(raw[1])
            if not (0 <= f < F and 0 <= s < 3):
                raise ValueError(f"gluing entry {k}: side {(f, s)} out of range")
            if (f, s) in seen:
                raise SideReusedInTwoPairs(
                    f"side {(f, s)} appears in gluing entries {seen[(f, s)]} and {k}"
                )
            seen[(f, s)] = k
            sides.append((f, s))
        if len(item) == 3 and item[2]:
            raise NonOrientable(f"gluing entry {k} identifies sides {sides[0]} and {sides[1]} "
                                "with matching orientation")
        pairs.append((sides[0], sides[1]))

    missing = [(f, s) for f in range(F) for s in range(3) if (f, s) not in seen]
    if missing:
        raise UnpairedSide(f"{len(missing)} unpaired side(s), first {missing[0]}")
    assert 3 * F == 2 * len(pairs)

    E = len(pairs)
    side_edge = np.empty((F, 3), dtype=np.int64)
    edge_sides = np.empty((E, 2, 2), dtype=np.int64)
    for k, (a, b) in enumerate(pairs):
        first, second = (a, b) if a <= b else (b, a)
        edge_sides[k, 0] = first
        edge_sides[k, 1] = second
        side_edge[a] = k
        side_edge[b] = k

    # corners are identified across each gluing: orientation reversal matches
    # the start of one side with the end of the other
    parent = list(range(3 * F))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for (f, s), (g, t) in pairs:
        union(3 * f + (s + 1) % 3, 3 * g + (t + 2) % 3)
        union(3 * f + (s + 2) % 3, 3 * g + (t + 1) % 3)

    root_to_vertex: dict[int, int] = {}
    corner_vertex = np.empty((F, 3), dtype=np.int64)
    for f in range(F):
        for i in range(3):
            r = find(3 * f + i)
            if r not in root_to_vertex:
                root_to_vertex[r] = len(root_to_vertex)
            corner_vertex[f, i] = root_to_vertex[r]
    V = len(root_to_vertex)

    c = SurfaceComplex(
        face_count=F,
        gluing=tuple(pairs),
        side_edge=side_edge,
        edge_sides=edge_sides,
        corner_vertex=corner_vertex,
        vertex_count=V,
    )
    for arr in (side_edge, edge_sides, corner_vertex):
        arr.setflags(write=False)
    _check_vertex_links(c)
    _check_connected(c)
    return c


def _check_vertex_links(c: SurfaceComplex) -> None:
    """Walk around every vertex; its corners must form exactly one cycle."""
    F = c.face_count
    visited = np.zeros((F, 3), dtype=bool)
    cycles_per_vertex = np.zeros(c.vertex_count, dtype=np.int64)
    for f0 in range(F):
        for i0 in range(3):
            if visited[f0, i0]:
                continue
            cycles_per_vertex[c.corner_vertex[f0, i0]] += 1
            f, i = f0, i0
            for _ in range(3 * F + 1):
                visited[f, i] = True
                # side i+2 starts at corner i; its mate ends there
                g, t = c.mate(f, (i + 2) % 3)
                f, i = g, (t + 2) % 3
                if (f, i) == (f0, i0):
                    break
            else:
                raise BoundaryDetected(f"link of vertex {c.corner_vertex[f0, i0]} does not close")
    bad = np.flatnonzero(cycles_per_vertex != 1)
    if bad.size:
        raise BoundaryDetected(f"vertex {bad[0]} has a link made of {cycles_per_vertex[bad[0]]} cycles")


def _check_connected(c: SurfaceComplex) -> None:
    seen = {0}
    queue = deque([0])
    while queue:
        f = queue.popleft()
        for s in range(3):
            g, _ = c.mate(f, s)
            if g not in seen:
                seen.add(g)
                queue.append(g)
    if len(seen) != c.face_count:
        raise DisconnectedComplex(f"only {len(seen)} of {c.face_count} faces reachable from face 0")


def euler_and_genus(c: SurfaceComplex) -> tuple[int, int]:
    return c.euler_characteristic, c.genus


@dataclass(frozen=True)
class TreeArc:
    edge: int
    parent: int
    parent_side: int
    child: int
    child_side: int


@dataclass(frozen=True)
class DualTree:
    root_face: int
    arcs: tuple[TreeArc, ...]  # breadth-first order
    tree_edges: tuple[int, ...]
    non_tree_edges: tuple[int, ...]


def dual_spanning_tree(c: SurfaceComplex, root: int = 0) -> DualTree:
    """Breadth-first spanning tree of the dual graph; each face's edges are visited in index order."""
    if not 0 <= root < c.face_count:
        raise ValueError(f"root face {root} out of range")
    reached = {root}
    queue = deque([root])
    arcs = []
    while queue:
        f = queue.popleft()
        for s in sorted(range(3), key=lambda s: c.side_edge[f, s]):
            g, t = c.mate(f, s)
            if g in reached:
                continue
            reached.add(g)
            arcs.append(TreeArc(int(c.side_edge[f, s]), f, s, g, t))
            queue.append(g)
    tree = {a.edge for a in arcs}
    return DualTree(
        root_face=root,
        arcs=tuple(arcs),
        tree_edges=tuple(sorted(tree)),
        non_tree_edges=tuple(e for e in range(c.edge_count) if e not in tree),
    )


def central_face(c: SurfaceComplex) -> int:
    """A face of minimal eccentricity in the dual graph (smallest index on ties)."""
    best, best_ecc = 0, None
    for root in range(c.face_count):
        depth = {root: 0}
        queue = deque([root])
        while queue:
            f = queue.popleft()
            for s in range(3):
                g, _ = c.mate(f, s)
                if g not in depth:
                    depth[g] = depth[f] + 1
                    queue.append(g)
        ecc = max(depth.values())
        if best_ecc is None or ecc < best_ecc:
            best, best_ecc = root, ecc
    return best


# --- standard complexes and local moves -------------------------------------------------

def polygon_word_complex(word: list[tuple[str, int]]) -> SurfaceComplex:
    """Fan-triangulate a polygon whose sides carry an edge word from its corner 0.

    ``word`` lists ``(letter, +1 | -1)``; every letter must occur once with each
    sign so that the side pairing is orientable.
    """
    n = len(word)
    if n < 4:
        raise ValueError("need a polygon with at least 4 sides")
    # triangle k-1 (k = 1 .. n-2) has corners (P0, Pk, Pk+1)
    def polygon_side(j):
        k = min(max(j, 1), n - 2)
        if j == 0:
            return (0, 2)
        if j == n - 1:
            return (n - 3, 1)
        return (k - 1, 0)

    pairs = []
    by_letter: dict[str, dict[int, int]] = {}
    for j, (letter, sign) in enumerate(word):
        by_letter.setdefault(letter, {})[sign] = j
    for letter, ends in by_letter.items():
        if set(ends) != {1, -1}:
            raise ValueError(f"letter {letter!r} must appear once with each orientation")
        pairs.append([polygon_side(ends[1]), polygon_side(ends[-1])])
    # diagonal P0-Pk for k = 2 .. n-2 is side 1 of triangle k-2 and side 2 of triangle k-1
    for k in range(2, n - 1):
        pairs.append([(k - 2, 1), (k - 1, 2)])
    return build_complex(n - 2, pairs)


def one_vertex_genus(g: int) -> SurfaceComplex:
    """One-vertex triangulation of the closed genus-g surface (4g-gon a b a' b' ... fanned)."""
    if g < 1:
        raise ValueError("genus must be at least 1")
    word = []
    for i in range(g):
        a, b = f"a{i}", f"b{i}"
        word += [(a, 1), (b, 1), (a, -1), (b, -1)]
    return polygon_word_complex(word)


def tetrahedron() -> SurfaceComplex:
    """Boundary of a tetrahedron: faces are the four vertex triples, consistently oriented."""
    faces = [(1, 2, 3), (0, 3, 2), (0, 1, 3), (0, 2, 1)]
    return _from_oriented_faces(faces)


def _from_oriented_faces(faces) -> SurfaceComplex:
    """Glue oriented vertex triples along matching reversed sides."""
    where = {}
    for f, verts in enumerate(faces):
        for s in range(3):
            where[(verts[(s + 1) % 3], verts[(s + 2) % 3])] = (f, s)
    pairs, done = [], set()
    for f, verts in enumerate(faces):
        for s in range(3):
            if (f, s) in done:
                continue
            a, b = verts[(s + 1) % 3], verts[(s + 2) % 3]
            other = where[(b, a)]
            pairs.append([(f, s), other])
            done.update({(f, s), other})
    return build_complex(len(faces), pairs)


def _rebuild(c: SurfaceComplex, relabel: dict[Side, Side], extra_pairs, new_face_count) -> SurfaceComplex:
    pairs = [[relabel.get(a, a), relabel.get(b, b)] for a, b in c.gluing]
    for k, pair in extra_pairs:
        if k is None:
            pairs.append(pair)
        else:
            pairs[k] = pair
    return build_complex(new_face_count, pairs)


def subdivide_face(c: SurfaceComplex, f: int) -> SurfaceComplex:
    """Insert a vertex in face ``f`` (1-to-3 split); F+2, E+3, V+1.

    Piece ``i`` keeps old side ``i`` as its side 0 and has the new vertex at
    corner 0.  Piece 0 keeps index ``f``; pieces 1 and 2 are appended.
    """
    F = c.face_count
    piece = [f, F, F + 1]
    relabel = {(f, i): (piece[i], 0) for i in range(3)}
    extra = [(None, [(piece[i], 1), (piece[(i + 1) % 3], 2)]) for i in range(3)]
    return _rebuild(c, relabel, extra, F + 2)


def flip_edge(c: SurfaceComplex, e: int) -> SurfaceComplex:
    """Replace edge ``e`` by the other diagonal of its quadrilateral (faces must differ)."""
    (t1, i1), (t2, i2) = (tuple(int(v) for v in s) for s in c.edge_sides[e])
    if t1 == t2:
        raise ValueError(f"edge {e} is a self-gluing of face {t1} and cannot be flipped")
    relabel = {
        (t1, (i1 + 2) % 3): (t1, 2),
        (t1, (i1 + 1) % 3): (t2, 0),
        (t2, (i2 + 1) % 3): (t1, 0),
        (t2, (i2 + 2) % 3): (t2, 2),
    }
    return _rebuild(c, relabel, [(e, [(t1, 1), (t2, 1)])], c.face_count)


def relabel_faces(c: SurfaceComplex, perm) -> SurfaceComplex:
    """Renumber faces by ``new = perm[old]``; edge order is kept."""
    perm = [int(p) for p in perm]
    pairs = [[(perm[a[0]], a[1]), (perm[b[0]], b[1])] for a, b in c.gluing]
    return build_complex(c.face_count, pairs)
