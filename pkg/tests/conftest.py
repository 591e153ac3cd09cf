import numpy as np
import pytest

from hypdel.complex import one_vertex_genus, subdivide_face, tetrahedron


@pytest.fixture
def genus2():
    return one_vertex_genus(2)


@pytest.fixture
def two_vertex():
    # one face of the one-vertex complex split at an interior point
    return subdivide_face(one_vertex_genus(2), 0)


@pytest.fixture
def tet():
    return tetrahedron()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
