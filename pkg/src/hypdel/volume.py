"""Prism volumes and the concave objective over a conformal class.

The prism of a hyperbolic triangle is the convex hull of the triangle (on an
equatorial plane of the ball model of H^3) and the geodesics perpendicular to
that plane through its vertices.  Its six vertices are ideal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.special import zeta

from .angles import PI, conformal_basis, corner_margin
from .complex import SurfaceComplex
from .errors import NotRealizable, OutsideDomain

_N_TERMS = 30
_SERIES = np.array([zeta(2 * n) / (n * (2 * n + 1)) for n in range(1, _N_TERMS + 1)])


def lobachevsky(theta):
    """Lobachevsky function ``-int_0^theta log|2 sin t| dt``.

    Reduced to ``[-pi/2, pi/2)`` by pi-periodicity and oddness, then summed with
    the zeta series ``theta (1 - log 2|theta|) + theta sum_n zeta(2n)/(n(2n+1)) (theta/pi)^(2n)``,
    whose ratio is at most 1/4 on the reduced range.
    """
    th = np.asarray(theta, dtype=float)
    t = th - PI * np.floor(th / PI + 0.5)
    a = np.abs(t)
    u = (a / PI) ** 2
    poly = np.zeros_like(a)
    for coef in _SERIES[::-1]:
        poly = (poly + coef) * u
    with np.errstate(divide="ignore", invalid="ignore"):
        val = a * (1.0 - np.log(2.0 * a) + poly)
    val = np.where(a == 0.0, 0.0, val)
    out = np.sign(t) * val
    return float(out) if np.ndim(out) == 0 else out


def _angles(d) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    if d.shape[-1] != 3:
        raise ValueError("angle data must have a trailing axis of size 3")
    return d


def _check_realizable(d: np.ndarray) -> None:
    if not (np.all(d > 0) and np.all(d < PI) and np.all(d.sum(axis=-1) < PI)):
        raise NotRealizable("angles must be positive with sum below pi")


def _sinh2_half(d: np.ndarray) -> np.ndarray:
    """``sinh^2(l/2)`` for each side, from the law of cosines.

    ``cos A + cos(B + C) = 2 cos(sigma/2) cos((B + C - A)/2)`` keeps short
    sides accurate when the angle sum approaches pi.
    """
    sigma = d.sum(axis=-1, keepdims=True)
    psi = sigma / 2 - d
    sin_ = np.sin(d)
    other = np.prod(sin_, axis=-1, keepdims=True) / sin_
    return np.cos(sigma / 2) * np.cos(psi) / other


def triangle_lengths(d, check: bool = True) -> np.ndarray:
    """Side lengths of the hyperbolic triangle with angle data ``d``; side ``i`` is opposite angle ``i``."""
    d = _angles(d)
    if check:
        _check_realizable(d)
    return 2.0 * np.arcsinh(np.sqrt(_sinh2_half(d)))


def cosh_lengths(d) -> np.ndarray:
    """``cosh`` of each side by the law of cosines, ``(cos A + cos B cos C)/(sin B sin C)``."""
    d = _angles(d)
    _check_realizable(d)
    c = np.cos(d)
    s = np.sin(d)
    cb = np.prod(c, axis=-1, keepdims=True) / c
    sb = np.prod(s, axis=-1, keepdims=True) / s
    return (c + cb) / sb


def truncated_length(d, check: bool = True) -> np.ndarray:
    """Signed truncated length ``2 log sinh(l/2)`` of every side."""
    d = _angles(d)
    if check:
        _check_realizable(d)
    return np.log(_sinh2_half(d))


def truncated_length_from_cosh(d) -> np.ndarray:
    """The same quantity computed from ``l = arccosh(...)`` directly."""
    ch = cosh_lengths(d)
    return 2.0 * np.log(np.sinh(np.arccosh(ch) / 2.0))


def truncated_length_decoupled(d) -> np.ndarray:
    """Angle/curvature-decoupled form:
    ``-a* = log sin B + log sin C - log((cos(A - k) - cos A)/k) - log(-k) + log 2``."""
    d = _angles(d)
    _check_realizable(d)
    k = d.sum(axis=-1, keepdims=True) - PI
    s = np.sin(d)
    log_other = np.log(np.prod(s, axis=-1, keepdims=True) / s)
    neg = log_other - np.log((np.cos(d - k) - np.cos(d)) / k) - np.log(-k) + np.log(2.0)
    return -neg


def truncated_length_jacobian(d) -> np.ndarray:
    """``J[..., i, j] = d a*_i / d angle_j`` (trailing 3x3 blocks)."""
    d = _angles(d)
    sigma = d.sum(axis=-1, keepdims=True)
    psi = sigma / 2 - d
    D = 2.0 * np.cos(sigma / 2) * np.cos(psi)  # cos A + cos(B + C), per side
    s_bc = np.sin(sigma - d)  # sin(B + C), per side
    cot = np.cos(d) / np.sin(d)
    J = np.empty(d.shape + (3,))
    for i in range(3):
        for j in range(3):
            if i == j:
                J[..., i, j] = -np.sin(d[..., i]) / D[..., i]
            else:
                J[..., i, j] = -s_bc[..., i] / D[..., i] - cot[..., j]
    return J


def triangle_poincare(d, lengths=None) -> np.ndarray:
    """Canonical Poincare-disk placement as complex numbers: corner 0 at 0,
    corner 1 on the positive real axis, corner 2 in the upper half."""
    d = _angles(d)
    if lengths is None:
        lengths = triangle_lengths(d)
    z = np.zeros(d.shape, dtype=complex)
    z[..., 1] = np.tanh(lengths[..., 2] / 2)
    z[..., 2] = np.tanh(lengths[..., 1] / 2) * np.exp(1j * d[..., 0])
    return z


def ideal_lift(z, upper: bool = True) -> np.ndarray:
    """Endpoint at infinity of the geodesic perpendicular to the equatorial plane
    through the Poincare-disk point ``z`` (inversion in the sphere of radius
    sqrt 2 about the south pole)."""
    z = np.asarray(z, dtype=complex)
    r2 = np.abs(z) ** 2
    h = (1 - r2) / (1 + r2)
    out = np.empty(z.shape + (3,))
    out[..., 0] = 2 * z.real / (1 + r2)
    out[..., 1] = 2 * z.imag / (1 + r2)
    out[..., 2] = h if upper else -h
    return out


def _stereo(X: np.ndarray) -> np.ndarray:
    # projection from (0, -1, 0); canonical prisms keep all vertices at
    # chordal distance >= sqrt 2 from it
    return (X[..., 0] + 1j * X[..., 2]) / (1 + X[..., 1])


def ideal_tetrahedron_angles(z1, z2, z3, z4) -> np.ndarray:
    """Dihedral angles of the ideal tetrahedron with boundary points ``z_i``:
    send z1, z2, z3 to infinity, 0, 1 and read the triangle angles at 0, 1, w."""
    w = (z4 - z2) * (z3 - z1) / ((z4 - z1) * (z3 - z2))
    a0 = np.abs(np.angle(w))
    a1 = np.abs(np.angle(1 - w))
    return np.stack([a0, a1, PI - a0 - a1], axis=-1)


def ideal_tetrahedron_volume(z1, z2, z3, z4):
    return lobachevsky(ideal_tetrahedron_angles(z1, z2, z3, z4)).sum(axis=-1)


def prism_volume(d, check: bool = True):
    """Volume of the ideal prism over the triangle with angles ``d``."""
    d = _angles(d)
    if check:
        _check_realizable(d)
    z = triangle_poincare(d, triangle_lengths(d, check=False))
    P = _stereo(ideal_lift(z, True))
    Q = _stereo(ideal_lift(z, False))
    p0, p1, p2 = P[..., 0], P[..., 1], P[..., 2]
    q0, q1, q2 = Q[..., 0], Q[..., 1], Q[..., 2]
    vol = (
        ideal_tetrahedron_volume(p0, p1, p2, q0)
        + ideal_tetrahedron_volume(p1, p2, q0, q1)
        + ideal_tetrahedron_volume(p2, q0, q1, q2)
    )
    return float(vol) if np.ndim(vol) == 0 else vol


# --- objective over a conformal class ----------------------------------------------------

_THETA_OF_ANGLE = np.eye(3) - 0.5  # d theta_i / d angle_j within one face


def theta_jacobian(c: SurfaceComplex) -> sparse.csr_matrix:
    """``d theta_side / d b`` for conformal coordinates ``b``: a (3F, E) matrix."""
    M = sparse.block_diag([_THETA_OF_ANGLE] * c.face_count, format="csr")
    return (M @ conformal_basis(c)).tocsr()


@dataclass(frozen=True)
class Objective:
    H: float
    grad: np.ndarray
    hess: sparse.csr_matrix | None
    a_star: np.ndarray  # (F, 3)


def objective_and_gradient(x, c: SurfaceComplex, hessian: str | None = "analytic",
                           margin_tol: float = 1e-12, fd_step: float = 1e-6) -> Objective:
    """Sum of prism volumes, its derivative along each ``w_e`` and the Hessian in
    conformal coordinates.

    ``hessian`` is ``"analytic"``, ``"fd"`` (face-local central differences of
    the truncated lengths) or ``None``.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (3 * c.face_count,):
        raise OutsideDomain(f"angle system has shape {x.shape}")
    m = corner_margin(x)
    if not m >= margin_tol:
        raise OutsideDomain(f"angle system margin {m:.3e} below {margin_tol:.0e}")
    d = x.reshape(-1, 3)
    H = float(np.sum(prism_volume(d, check=False)))
    a_star = truncated_length(d, check=False)
    T = theta_jacobian(c)
    # Schlafli: dV = -sum_i a*_i d theta_i
    grad = -(T.T @ a_star.ravel())
    hess = None
    if hessian == "analytic":
        J = truncated_length_jacobian(d)
    elif hessian == "fd":
        J = np.empty(d.shape + (3,))
        for j in range(3):
            step = np.zeros(3)
            step[j] = fd_step
            J[..., j] = (truncated_length(d + step, check=False)
                         - truncated_length(d - step, check=False)) / (2 * fd_step)
    elif hessian is not None:
        raise ValueError(f"unknown hessian method {hessian!r}")
    if hessian is not None:
        Jb = sparse.block_diag(list(J), format="csr")
        W = conformal_basis(c)
        hess = (-(T.T @ Jb @ W)).tocsr()
        hess = ((hess + hess.T) * 0.5).tocsr()
    return Objective(H=H, grad=np.asarray(grad).ravel(), hess=hess, a_star=a_star)


def objective(x, c: SurfaceComplex) -> float:
    return float(np.sum(prism_volume(np.asarray(x, dtype=float).reshape(-1, 3), check=False)))
