"""Instance and solution files.

Instance::

    {"faces": F, "gluing": [[[f, s], [g, t]], ...], "targets": {"psi": [...]}}

``targets`` holds exactly one of ``psi`` or ``theta`` (``theta = pi - psi``).
Solutions carry ``"version": "hypdel-1"``, the complex, corner angles indexed
``3*face + corner`` (corner i opposite side i), edge lengths and the echoed
target.  Floats are written with 17 significant digits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .angles import PI
from .complex import SurfaceComplex, build_complex
from .errors import ComplexError, DimensionMismatch, HypDelError

SOLUTION_VERSION = "hypdel-1"


class InstanceFormatError(ComplexError):
    """The file does not follow the instance or solution schema."""


class IoError(HypDelError, OSError):
    """Reading or writing an artifact failed."""


def dumps(obj, indent: int = 1) -> str:
    """JSON text with every float written as ``%.17g``."""
    def enc(o, depth):
        pad = " " * (indent * (depth + 1))
        end = " " * (indent * depth)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {enc(v, depth + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            if all(not isinstance(v, (dict, list, tuple)) for v in o):
                return "[" + ", ".join(enc(v, depth + 1) for v in o) + "]"
            return "[\n" + ",\n".join(pad + enc(v, depth + 1) for v in o) + "\n" + end + "]"
        if isinstance(o, (bool, np.bool_)):
            return "true" if o else "false"
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            v = float(o)
            if not np.isfinite(v):
                return "null"
            return "%.17g" % v
        if o is None:
            return "null"
        return json.dumps(o)
    return enc(obj, 0) + "\n"


def _read_json(path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise InstanceFormatError(f"{path}: top level must be an object")
    return data


def _complex_from(data: dict) -> SurfaceComplex:
    if "faces" not in data or "gluing" not in data:
        raise InstanceFormatError("missing 'faces' or 'gluing'")
    try:
        return build_complex(int(data["faces"]), data["gluing"])
    except HypDelError:
        raise
    except (TypeError, ValueError, IndexError) as exc:
        raise InstanceFormatError(f"malformed gluing table ({exc})") from exc


@dataclass(frozen=True)
class Instance:
    complex: SurfaceComplex
    psi: np.ndarray


def parse_instance(data: dict) -> Instance:
    c = _complex_from(data)
    targets = data.get("targets")
    if not isinstance(targets, dict) or len({"psi", "theta"} & targets.keys()) != 1:
        raise InstanceFormatError("'targets' must hold exactly one of 'psi' or 'theta'")
    key = "psi" if "psi" in targets else "theta"
    vals = np.asarray(targets[key], dtype=float)
    if vals.shape != (c.edge_count,):
        raise DimensionMismatch(f"{key} has {vals.size} entries, complex has {c.edge_count} edges")
    return Instance(c, vals if key == "psi" else PI - vals)


def load_instance(path) -> Instance:
    return parse_instance(_read_json(path))


def instance_dict(c: SurfaceComplex, psi) -> dict:
    return {"faces": c.face_count,
            "gluing": c.to_gluing_list(),
            "targets": {"psi": [float(v) for v in psi]}}


def solution_dict(c: SurfaceComplex, u, extra: dict | None = None) -> dict:
    out = {
        "version": SOLUTION_VERSION,
        "faces": c.face_count,
        "gluing": c.to_gluing_list(),
        "corner_angles": [float(v) for v in u.angles],
        "edge_lengths": [float(v) for v in u.lengths],
        "targets": {"psi": [float(v) for v in u.target_echo]},
        "iterations": int(u.iterations),
        "residual": float(u.residual),
        "H": float(u.H),
    }
    if extra:
        out.update(extra)
    return out


@dataclass(frozen=True)
class Solution:
    complex: SurfaceComplex
    angles: np.ndarray
    lengths: np.ndarray
    target_echo: np.ndarray


def load_solution(path) -> Solution:
    data = _read_json(path)
    if data.get("version") != SOLUTION_VERSION:
        raise InstanceFormatError(f"unsupported solution version {data.get('version')!r}")
    inst = parse_instance(data)
    c = inst.complex
    angles = np.asarray(data.get("corner_angles", []), dtype=float)
    if angles.shape != (3 * c.face_count,):
        raise DimensionMismatch("corner_angles has the wrong length")
    lengths = np.asarray(data.get("edge_lengths", []), dtype=float)
    return Solution(c, angles, lengths, inst.psi)


def write_text(path, text: str | bytes) -> None:
    try:
        if isinstance(text, bytes):
            Path(path).write_bytes(text)
        else:
            Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
