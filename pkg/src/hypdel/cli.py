"""Command-line pipeline: validate, check, solve, layout, prisms, gen.

Exit codes: 0 success, 1 I/O or unexpected failure, 2 invalid complex or file,
3 target not Delaunay, 4 infeasible target, 5 solver did not converge.
Reports go to stdout as JSON; errors go to stderr as JSON.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .angles import IDENTITY_TOL, PI, check_target, feasibility_bruteforce
from .complex import SurfaceComplex, one_vertex_genus
from .errors import (ComplexError, DimensionMismatch, HypDelError, Infeasible, MaxIterExceeded,
                     NotCertified, NotDelaunay, NumericalBreakdown)
from .export import export_obj, export_svg
from .feasibility import EPS_MIN, margin_lp
from .realize import build_prisms, circumcircle_angles, develop, holonomy_report
from .sampling import round_trip_instance
from .uniformize import certify, uniformize

EXIT_OK, EXIT_FAIL, EXIT_COMPLEX, EXIT_DELAUNAY, EXIT_INFEASIBLE, EXIT_SOLVER = 0, 1, 2, 3, 4, 5
ANGLE_TOL = 1e-8
HOLONOMY_TOL = 1e-8


class CliExit(Exception):
    def __init__(self, code: int, payload: dict):
        super().__init__(payload.get("message", ""))
        self.code = code
        self.payload = payload


def checked(value, tol) -> dict:
    return {"value": value, "tol": tol}


def instance_summary(c: SurfaceComplex) -> dict:
    return {"F": c.face_count, "E": c.edge_count, "V": c.vertex_count,
            "chi": c.euler_characteristic, "genus": c.genus}


def target_summary(p, c: SurfaceComplex) -> dict:
    chk = check_target(p, c)
    return {"delaunay": chk.delaunay, "bad_edges": list(chk.bad_edges),
            "nonsingular": checked(chk.nonsingular, IDENTITY_TOL),
            "cone_angles": checked([float(v) for v in chk.cone_angles], IDENTITY_TOL)}


def verification(x, target, c: SurfaceComplex) -> dict:
    layout = develop(x, c)
    ang = circumcircle_angles(layout, c)
    hol = holonomy_report(layout, target, c)
    return {
        "circumcircle_max_error": checked(float(np.abs(ang - (PI - target)).max(initial=0.0)),
                                          ANGLE_TOL),
        "holonomy_max_defect": checked(float(np.abs(hol.vertex_defects).max(initial=0.0)),
                                       HOLONOMY_TOL),
        "edge_copy_mismatch": checked(max(hol.edge_mismatch.values(), default=0.0), 1e-9),
    }


def cmd_validate(args) -> tuple[int, dict]:
    inst = io.load_instance(args.file)
    report = {"instance": instance_summary(inst.complex),
              "target": target_summary(inst.psi, inst.complex)}
    return (EXIT_OK if report["target"]["delaunay"] else EXIT_DELAUNAY), report


def cmd_check(args) -> tuple[int, dict]:
    inst = io.load_instance(args.file)
    c, p = inst.complex, inst.psi
    report = {"instance": instance_summary(c), "target": target_summary(p, c)}
    lp = margin_lp(p, c)
    feas = {"method": ["margin-lp"], "status": lp.status,
            "epsilon_star": checked(lp.epsilon_star, EPS_MIN), "pivots": lp.iterations}
    feasible = lp.feasible
    if c.face_count <= args.brute_force_max:
        bf = feasibility_bruteforce(p, c, max_faces=args.brute_force_max)
        feas["method"].append("brute-force")
        feas["subset_margin"] = checked(bf.margin, 0.0)
        feas["witness"] = list(bf.witness) if bf.witness is not None else None
        feas["agree"] = bool(bf.feasible == lp.feasible)
    report["feasibility"] = feas
    return (EXIT_OK if feasible else EXIT_INFEASIBLE), report


def cmd_solve(args) -> tuple[int, dict]:
    inst = io.load_instance(args.file)
    c, p = inst.complex, inst.psi
    report = {"instance": instance_summary(c), "target": target_summary(p, c)}
    u = uniformize(p, c, tol=args.tol, max_iter=args.max_iter)
    cert = certify(u, c, tol=args.tol)
    report["solve"] = {"iterations": u.iterations, "residual": checked(u.residual, args.tol),
                       "H": u.H, "certificate": cert.checks}
    if not cert.ok:
        raise CliExit(EXIT_SOLVER, {"error": "NotCertified", "message": "certificate failed",
                                    "offending_edges": list(cert.offending_edges),
                                    "report": report})
    report["verification"] = verification(u.angles, u.target_echo, c)
    if args.output:
        io.write_text(args.output, io.dumps(io.solution_dict(c, u)))
    return EXIT_OK, report


def _load_layout(path):
    sol = io.load_solution(path)
    return sol, develop(sol.angles, sol.complex)


def cmd_layout(args) -> tuple[int, dict]:
    sol, layout = _load_layout(args.solution)
    report = {"instance": instance_summary(sol.complex),
              "verification": verification(sol.angles, sol.target_echo, sol.complex)}
    svg = export_svg(layout, circumcircles=args.circumcircles)
    if args.svg:
        io.write_text(args.svg, svg)
    else:
        sys.stdout.buffer.write(svg)
        return EXIT_OK, {}
    return EXIT_OK, report


def cmd_prisms(args) -> tuple[int, dict]:
    sol, layout = _load_layout(args.solution)
    prisms = build_prisms(layout)
    obj = export_obj(prisms)
    if args.obj:
        io.write_text(args.obj, obj)
    else:
        sys.stdout.buffer.write(obj)
        return EXIT_OK, {}
    d = sol.angles.reshape(-1, 3)
    vert = max(float(np.abs(pr.vertical_dihedrals - d[f]).max()) for f, pr in enumerate(prisms))
    return EXIT_OK, {"instance": instance_summary(sol.complex), "prisms": len(prisms),
                     "vertical_dihedral_max_error": checked(vert, 1e-9)}


def cmd_gen(args) -> tuple[int, dict]:
    if args.random_target:
        rng = np.random.default_rng(args.seed)
        c, _, p = round_trip_instance(rng, args.faces)
    else:
        c = one_vertex_genus(args.genus)
        # one vertex meets every edge twice, so equal psi summing to 2 pi is pi / E
        p = np.full(c.edge_count, PI / c.edge_count)
    text = io.dumps(io.instance_dict(c, p))
    if args.output:
        io.write_text(args.output, text)
        return EXIT_OK, {"instance": instance_summary(c)}
    sys.stdout.write(text)
    return EXIT_OK, {}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hypdel", description="Delaunay angle data on closed "
                                     "hyperbolic surfaces: feasibility, solving and realization")
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the complex and the target")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", help="decide feasibility of the target")
    p.add_argument("file")
    p.add_argument("--brute-force-max", type=int, default=12,
                   help="also enumerate face subsets when F is at most this (default 12)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="compute the uniform angle system")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="solution JSON path")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=200)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("layout", help="develop a solution and draw it")
    p.add_argument("solution")
    p.add_argument("--svg", help="output path (stdout if omitted)")
    p.add_argument("--circumcircles", action="store_true", help="draw each face's circumcircle")
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("prisms", help="export the ideal prisms of a solution")
    p.add_argument("solution")
    p.add_argument("--obj", help="output path (stdout if omitted)")
    p.set_defaults(func=cmd_prisms)

    p = sub.add_parser("gen", help="write an instance file")
    p.add_argument("--genus", type=int, default=2)
    p.add_argument("--one-vertex", action="store_true",
                   help="one-vertex triangulation with equal psi (the default)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random-target", action="store_true",
                   help="random complex and a target sampled from interior angles")
    p.add_argument("--faces", type=int, default=12, help="face count for --random-target")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)
    return parser


def _error(code: int, exc: Exception, **extra) -> tuple[int, dict]:
    return code, {"error": type(exc).__name__, "message": str(exc), **extra}


def run(argv=None) -> tuple[int, dict, bool]:
    """Returns ``(exit code, payload, is_error)``."""
    args = build_parser().parse_args(argv)
    if args.verbose:
        import logging
        logging.basicConfig(level=logging.DEBUG, stream=sys.stderr)
    try:
        code, report = args.func(args)
        return code, report, False
    except CliExit as exc:
        return exc.code, exc.payload, True
    except NotDelaunay as exc:
        return (*_error(EXIT_DELAUNAY, exc), True)
    except (ComplexError, DimensionMismatch) as exc:
        return (*_error(EXIT_COMPLEX, exc), True)
    except Infeasible as exc:
        lp = exc.lp_result
        extra = {"epsilon_star": checked(lp.epsilon_star, EPS_MIN)} if lp is not None else {}
        return (*_error(EXIT_INFEASIBLE, exc, **extra), True)
    except MaxIterExceeded as exc:
        return (*_error(EXIT_SOLVER, exc, residual=exc.residual, min_margin=exc.min_margin,
                        iterations=exc.iterations), True)
    except (NumericalBreakdown, NotCertified) as exc:
        return (*_error(EXIT_SOLVER, exc), True)
    except io.IoError as exc:
        return (*_error(EXIT_FAIL, exc), True)
    except HypDelError as exc:
        return (*_error(EXIT_FAIL, exc), True)


_REJECTIONS = {EXIT_DELAUNAY: ("NotDelaunay", "target is not Delaunay"),
               EXIT_INFEASIBLE: ("Infeasible", "target is not feasible")}


def main(argv=None) -> int:
    code, payload, is_error = run(argv)
    if is_error:
        sys.stderr.write(io.dumps(payload))
        return code
    if payload:
        sys.stdout.write(io.dumps(payload))
    if code in _REJECTIONS:
        name, message = _REJECTIONS[code]
        err = {"error": name, "message": message}
        witness = payload.get("feasibility", {}).get("witness")
        if witness is not None:
            err["witness"] = witness
        sys.stderr.write(io.dumps(err))
    return code


if __name__ == "__main__":
    sys.exit(main())
