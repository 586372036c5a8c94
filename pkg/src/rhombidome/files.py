"""JSON file formats for curves and ledgers, plus OFF mesh export.

Floats are serialized with Python's shortest-round-trip repr, so write ->
read -> write is byte-identical and replay stays exact across the disk
boundary.
"""

from __future__ import annotations

import json

import numpy as np

from .cobordism import (
    CloseRhombusMove,
    CloseTriangleMove,
    CobordismLedger,
    Move,
    PentagonMove,
    PivotMove,
    Rhombus,
    SeamPair,
    SplitMove,
    TriangleFace,
)
from .curve import IntegralCurve

__all__ = [
    "FileFormatError",
    "curve_to_obj",
    "curve_from_obj",
    "ledger_to_obj",
    "ledger_from_obj",
    "dump_json",
    "write_curve",
    "read_curve",
    "write_ledger",
    "read_ledger",
    "export_off",
]

CURVE_VERSION = 1
LEDGER_VERSION = 1


class FileFormatError(ValueError):
    """Malformed or unsupported input document."""


def _points(arr: np.ndarray) -> list:
    return np.asarray(arr, dtype=float).tolist()


def _array(obj, shape_hint: str) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"bad {shape_hint}: {exc}") from exc
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise FileFormatError(f"bad {shape_hint}: expected a list of 3-d points")
    return arr


def curve_to_obj(curve: IntegralCurve) -> dict:
    return {
        "version": CURVE_VERSION,
        "components": [_points(c) for c in curve.components],
    }


def curve_from_obj(obj) -> IntegralCurve:
    if not isinstance(obj, dict) or obj.get("version") != CURVE_VERSION:
        raise FileFormatError("unsupported curve document")
    comps = obj.get("components")
    if not isinstance(comps, list):
        raise FileFormatError("curve document lacks components")
    return IntegralCurve([_array(c, "curve component") for c in comps])


def _move_to_obj(move: Move) -> dict:
    if isinstance(move, PivotMove):
        return {
            "type": "pivot",
            "component": move.component,
            "vertex": move.vertex,
            "old": _points(move.old_point[None, :])[0],
            "new": _points(move.new_point[None, :])[0],
            "rhombus": None if move.rhombus is None else _points(move.rhombus.vertices),
            "degenerate": move.degenerate,
            "stage": move.stage,
        }
    if isinstance(move, SplitMove):
        return {
            "type": "split",
            "component": move.component,
            "new_component": move.new_component,
            "z": _points(move.z[None, :])[0],
            "seams": list(move.seam_indices),
        }
    if isinstance(move, PentagonMove):
        return {
            "type": "pentagon",
            "component": move.component,
            "apex": _points(move.apex[None, :])[0],
            "rhombi": list(move.rhombus_indices),
            "triangle": move.triangle_index,
            "seam": move.seam_index,
        }
    if isinstance(move, CloseRhombusMove):
        return {"type": "close_rhombus", "component": move.component,
                "rhombus": move.rhombus_index}
    if isinstance(move, CloseTriangleMove):
        return {"type": "close_triangle", "component": move.component,
                "triangle": move.triangle_index}
    raise FileFormatError(f"unknown move type {type(move)!r}")


def _point_from(obj, what: str) -> np.ndarray:
    arr = np.asarray(obj, dtype=float)
    if arr.shape != (3,):
        raise FileFormatError(f"bad {what}")
    return arr


def _move_from_obj(obj) -> Move:
    kind = obj.get("type")
    if kind == "pivot":
        rho = obj.get("rhombus")
        return PivotMove(
            component=int(obj["component"]),
            vertex=int(obj["vertex"]),
            old_point=_point_from(obj["old"], "pivot old point"),
            new_point=_point_from(obj["new"], "pivot new point"),
            rhombus=None if rho is None else Rhombus(_array(rho, "pivot rhombus")),
            degenerate=bool(obj["degenerate"]),
            stage=str(obj.get("stage", "pivot")),
        )
    if kind == "split":
        seams = obj.get("seams", [0, 0])
        return SplitMove(int(obj["component"]), int(obj["new_component"]),
                         _point_from(obj["z"], "split point"),
                         (int(seams[0]), int(seams[1])))
    if kind == "pentagon":
        rhombi = obj["rhombi"]
        return PentagonMove(int(obj["component"]),
                            _point_from(obj["apex"], "pentagon apex"),
                            (int(rhombi[0]), int(rhombi[1])),
                            int(obj["triangle"]), int(obj["seam"]))
    if kind == "close_rhombus":
        return CloseRhombusMove(int(obj["component"]), int(obj["rhombus"]))
    if kind == "close_triangle":
        return CloseTriangleMove(int(obj["component"]), int(obj["triangle"]))
    raise FileFormatError(f"unknown move type {kind!r}")


def ledger_to_obj(ledger: CobordismLedger) -> dict:
    return {
        "version": LEDGER_VERSION,
        "initial": curve_to_obj(ledger.initial),
        "moves": [_move_to_obj(m) for m in ledger.moves],
        "triangles": [_points(t.vertices) for t in ledger.triangles],
        "seams": [{"a": _points(s.first), "b": _points(s.second)}
                  for s in ledger.seams],
        "rhombi": [_points(r.vertices) for r in ledger.final_rhombi],
        "final_curve": curve_to_obj(ledger.final_curve),
        "stats": ledger.stats,
    }


def ledger_from_obj(obj) -> CobordismLedger:
    if not isinstance(obj, dict) or obj.get("version") != LEDGER_VERSION:
        raise FileFormatError("unsupported ledger document")
    try:
        return CobordismLedger(
            initial=curve_from_obj(obj["initial"]),
            moves=[_move_from_obj(m) for m in obj["moves"]],
            triangles=[TriangleFace(_array(t, "triangle")) for t in obj["triangles"]],
            seams=[SeamPair(_array(s["a"], "seam"), _array(s["b"], "seam"))
                   for s in obj["seams"]],
            final_rhombi=[Rhombus(_array(r, "rhombus")) for r in obj["rhombi"]],
            final_curve=curve_from_obj(obj["final_curve"]),
            stats=obj.get("stats", {}),
        )
    except (KeyError, TypeError) as exc:
        raise FileFormatError(f"malformed ledger document: {exc}") from exc


def dump_json(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_curve(path: str, curve: IntegralCurve) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(curve_to_obj(curve)))


def read_curve(path: str) -> IntegralCurve:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"not valid JSON: {exc}") from exc
    return curve_from_obj(obj)


def write_ledger(path: str, ledger: CobordismLedger) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(ledger_to_obj(ledger)))


def read_ledger(path: str) -> CobordismLedger:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FileFormatError(f"not valid JSON: {exc}") from exc
    return ledger_from_obj(obj)


def export_off(path: str, triangles: list[TriangleFace],
               rhombus_cells: list[Rhombus]) -> None:
    """Write chain cells as an OFF mesh (visualization only).

    Rhombus cells are triangulated along their first diagonal purely for
    export; the split edges are not part of the chain.
    """
    vertices: list[tuple[float, float, float]] = []
    index: dict[tuple[float, float, float], int] = {}

    def vid(p) -> int:
        key = (float(p[0]), float(p[1]), float(p[2]))
        if key not in index:
            index[key] = len(vertices)
            vertices.append(key)
        return index[key]

    faces: list[tuple[int, int, int]] = []
    for tri in triangles:
        v = tri.vertices
        faces.append((vid(v[0]), vid(v[1]), vid(v[2])))
    for rho in rhombus_cells:
        v = rho.vertices
        faces.append((vid(v[0]), vid(v[1]), vid(v[2])))
        faces.append((vid(v[0]), vid(v[2]), vid(v[3])))

    with open(path, "w", encoding="utf-8") as fh:
        fh.write("OFF\n")
        fh.write("# visualization only: rhombus cells triangulated along a diagonal\n")
        fh.write(f"{len(vertices)} {len(faces)} 0\n")
        for x, y, z in vertices:
            fh.write(f"{x!r} {y!r} {z!r}\n")
        for a, b, c in faces:
            fh.write(f"3 {a} {b} {c}\n")
