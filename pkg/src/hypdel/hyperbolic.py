"""Small toolkit for the hyperboloid model of H^2 (signature -++)."""

from __future__ import annotations

import numpy as np

J = np.diag([-1.0, 1.0, 1.0])
ORIGIN = np.array([1.0, 0.0, 0.0])


def minkowski(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return -a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] + a[..., 2] * b[..., 2]


def lorentz_cross(a, b):
    """``J (a x b)``; Lorentz-orthogonal to both and equivariant under SO+(2,1)."""
    return np.cross(a, b) @ J


def distance(a, b):
    """Hyperbolic distance, via ``<a-b, a-b> = 4 sinh^2(d/2)`` to keep short distances accurate."""
    diff = np.asarray(a) - np.asarray(b)
    q = np.maximum(minkowski(diff, diff), 0.0)
    return 2.0 * np.arcsinh(np.sqrt(q) / 2.0)


def point_at(base, direction, t):
    return np.cosh(t) * base + np.sinh(t) * direction


def unit_tangent(base, toward):
    """Unit tangent at ``base`` pointing along the geodesic to ``toward``."""
    v = toward + minkowski(base, toward) * base
    return v / np.sqrt(minkowski(v, v))


def frame(base, tangent):
    """Lorentz matrix with columns ``base``, ``tangent`` and the positively oriented normal."""
    return np.column_stack([base, tangent, lorentz_cross(base, tangent)])


def lorentz_inverse(g):
    return J @ g.T @ J


def boost_to_origin(x):
    """An orientation-preserving isometry sending ``x`` to the origin."""
    x = np.asarray(x)
    s = np.hypot(x[1], x[2])
    if s == 0.0:
        return np.eye(3, dtype=x.dtype)
    u = np.array([0.0, x[1] / s, x[2] / s], dtype=x.dtype)
    # pure boost along u: maps origin to x; its inverse maps x to origin
    B = np.eye(3, dtype=x.dtype)
    B[0, 0] = x[0]
    B[0, 1:] = s * u[1:]
    B[1:, 0] = s * u[1:]
    B[1:, 1:] += (x[0] - 1.0) * np.outer(u[1:], u[1:])
    return lorentz_inverse(B)


def normalize_point(x):
    """Rescale a future-timelike vector onto the hyperboloid."""
    return x / np.sqrt(-minkowski(x, x))


def to_poincare(x):
    x = np.asarray(x, dtype=float)  # charts are only used at double precision
    z = (x[..., 1] + 1j * x[..., 2]) / (1.0 + x[..., 0])
    return z


def to_klein(x):
    x = np.asarray(x, dtype=float)
    return (x[..., 1] + 1j * x[..., 2]) / x[..., 0]


def from_poincare(z):
    z = np.asarray(z, dtype=complex)
    r2 = np.abs(z) ** 2
    out = np.empty(z.shape + (3,))
    out[..., 0] = (1 + r2) / (1 - r2)
    out[..., 1] = 2 * z.real / (1 - r2)
    out[..., 2] = 2 * z.imag / (1 - r2)
    return out


def corner_angle(x, y, z):
    """Signed angle at ``x`` from the geodesic toward ``y`` to the geodesic toward ``z``."""
    u = unit_tangent(x, y)
    v = z + minkowski(x, z) * x
    return np.arctan2(minkowski(lorentz_cross(x, u), v), minkowski(u, v))


def rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def translation_x(t):
    c, s = np.cosh(t), np.sinh(t)
    return np.array([[c, s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
