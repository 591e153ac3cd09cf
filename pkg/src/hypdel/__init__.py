"""Delaunay angle data on closed hyperbolic surfaces.

Given a triangulated closed surface and an angle value per edge, decide whether
some hyperbolic metric realizes it as the Delaunay intersection-angle data and,
if so, compute that metric by maximizing a sum of ideal-prism volumes.
"""

from .angles import Psi, check_target, cone_angles, conformal_basis, feasibility_bruteforce
from .complex import SurfaceComplex, build_complex, one_vertex_genus
from .feasibility import margin_lp
from .realize import build_prisms, circumcircle_angles, develop, holonomy_report
from .uniformize import UniformSolution, certify, uniformize
from .volume import lobachevsky, prism_volume

__version__ = "0.1.0"

__all__ = [
    "Psi", "check_target", "cone_angles", "conformal_basis", "feasibility_bruteforce",
    "SurfaceComplex", "build_complex", "one_vertex_genus", "margin_lp",
    "build_prisms", "circumcircle_angles", "develop", "holonomy_report",
    "UniformSolution", "certify", "uniformize", "lobachevsky", "prism_volume",
]
