"""Random instances: interior angle systems, round-trip targets and infeasible targets."""

from __future__ import annotations

import numpy as np

from .angles import PI, Psi, angles_from_theta, face_edge_incidence
from .complex import SurfaceComplex, flip_edge, one_vertex_genus, subdivide_face

THETA_LO = 0.1
THETA_HI = PI / 2 - 0.1
FACE_SLACK = 0.1


def sample_theta_corners(n_faces: int, rng: np.random.Generator) -> np.ndarray:
    """Theta-corners uniform in (0.1, pi/2 - 0.1) per corner, rejected until each face
    sums to more than pi + 0.1; the resulting triangles have curvature below -0.2."""
    out = np.empty((n_faces, 3))
    for f in range(n_faces):
        while True:
            th = rng.uniform(THETA_LO, THETA_HI, 3)
            if th.sum() > PI + FACE_SLACK:
                out[f] = th
                break
    return out


def sample_interior_angles(c: SurfaceComplex, rng: np.random.Generator) -> np.ndarray:
    return angles_from_theta(sample_theta_corners(c.face_count, rng)).ravel()


def random_complex(rng: np.random.Generator, faces: int, flips: int | None = None) -> SurfaceComplex:
    """Genus-2 complex with ``faces`` triangles (``faces = 6 + 2k``): random face
    subdivisions of the one-vertex triangulation followed by random edge flips."""
    if faces < 6 or faces % 2:
        raise ValueError("face count must be an even number >= 6")
    c = one_vertex_genus(2)
    while c.face_count < faces:
        c = subdivide_face(c, int(rng.integers(c.face_count)))
    for _ in range(faces if flips is None else flips):
        try:
            c = flip_edge(c, int(rng.integers(c.edge_count)))
        except ValueError:
            pass
    return c


def round_trip_instance(rng: np.random.Generator, faces: int):
    """``(c, x, p)`` with ``p = Psi(x)`` for a sampled interior ``x``; ``p`` is feasible."""
    c = random_complex(rng, faces)
    x = sample_interior_angles(c, rng)
    return c, x, Psi(x, c)


def random_psi(c: SurfaceComplex, rng: np.random.Generator, low: float = 0.05,
               high: float = PI - 0.05) -> np.ndarray:
    """Uniform Delaunay edge data without any cone-angle condition."""
    return rng.uniform(low, high, c.edge_count)


def starve_face(p, c: SurfaceComplex, face: int, theta_sum: float = PI - 0.3) -> np.ndarray:
    """Rewrite ``p`` so the edges of ``face`` carry theta summing to ``theta_sum``
    (split evenly); with ``theta_sum <= pi`` the singleton ``{face}`` is a witness
    of infeasibility."""
    edges = np.flatnonzero(face_edge_incidence(c)[face])
    q = np.array(p, dtype=float)
    q[edges] = PI - theta_sum / edges.size
    return q
