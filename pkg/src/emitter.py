"""CSV and JSON documents of the command outputs

JSON documents name their schema in a top-level "schema" field; the schema
files live under schema/. Non-finite floats are written as the strings
"inf", "-inf" and "nan" so every document stays valid JSON.
"""
import csv
import io
import json
import math
from typing import Any, Dict, Iterable, List, Optional, Sequence

from src.atlas import AtlasEntry
from src.geodesic import CurveSample, Geodesic, Pose
from src.solver import ExistenceVerdict, Minimizer, SolveReport
from src.targets import AtlasGrid

GEODESIC_COLUMNS = ["t", "x", "y", "theta", "curvature"]
ATLAS_COLUMNS = ["x", "y", "theta", "verdict", "length", "n_minimizers", "marginal", "error"]
MINIMIZER_COLUMNS = ["nu0", "c0", "class", "duration", "length", "n_cusps", "forward"]


def schema_name(kind: str) -> str:
    return f"sr-se2/{kind}/1"


def _number(value: float) -> Any:
    if math.isfinite(value):
        return float(value)
    return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")


def _pose(pose: Pose) -> Dict[str, float]:
    return {"x": _number(pose.x), "y": _number(pose.y), "theta": _number(pose.theta)}


def to_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if value is None else value for value in row])
    return buffer.getvalue()


def to_json(document: Dict[str, Any]) -> str:
    return json.dumps(document, indent=2, allow_nan=False) + "\n"


def geodesic_rows(samples: List[CurveSample]) -> List[List[float]]:
    return [[s.t, s.pose.x, s.pose.y, s.pose.theta, s.curvature] for s in samples]


def geodesic_document(
    g: Geodesic, samples: List[CurveSample], cusps: Sequence[float], inflections: Sequence[float]
) -> Dict[str, Any]:
    return {
        "schema": schema_name("geodesic"),
        "state": {"nu0": g.state0.nu, "c0": g.state0.c},
        "class": g.tag.value,
        "period": _number(g.period),
        "cusp_times": list(cusps),
        "inflection_times": list(inflections),
        "samples": [
            {
                "t": s.t,
                "x": s.pose.x,
                "y": s.pose.y,
                "theta": s.pose.theta,
                "curvature": _number(s.curvature),
            }
            for s in samples
        ],
    }


def minimizer_record(m: Minimizer) -> Dict[str, Any]:
    state = m.geodesic.state0
    return {
        "nu0": state.nu,
        "c0": state.c,
        "class": m.tag.value,
        "duration": m.duration,
        "length": m.length,
        "cusp_times": list(m.cusp_times_internal),
        "forward": m.forward,
        "endpoint": _pose(m.endpoint()),
    }


def minimizer_rows(minimizers: List[Minimizer]) -> List[List[Any]]:
    return [
        [
            m.geodesic.state0.nu,
            m.geodesic.state0.c,
            m.tag.value,
            m.duration,
            m.length,
            len(m.cusp_times_internal),
            m.forward,
        ]
        for m in minimizers
    ]


def _verdict_record(verdict: ExistenceVerdict) -> Dict[str, Any]:
    return {
        "tag": verdict.tag.value,
        "exists": verdict.exists,
        "cusp_times": list(verdict.cusp_times),
        "boundary_marginal": verdict.boundary_marginal,
        "backward": verdict.backward,
    }


def solve_document(target: Pose, xi: float, projective: bool, report: SolveReport) -> Dict[str, Any]:
    primary = report.minimizers[0]
    return {
        "schema": schema_name("solve"),
        "target": _pose(target),
        "xi": xi,
        "projective": projective,
        "length": report.length,
        "twin": len(report.minimizers) == 2,
        "twin_reflection": primary.twin_reflection,
        "minimizers": [minimizer_record(m) for m in report.minimizers],
        "verdict": _verdict_record(report.verdict),
    }


def exists_document(target: Pose, xi: float, verdict: ExistenceVerdict) -> Dict[str, Any]:
    return {
        "schema": schema_name("exists"),
        "target": _pose(target),
        "xi": xi,
        **_verdict_record(verdict),
        "length": verdict.witness.length,
        "witness": minimizer_record(verdict.witness),
    }


def exists_rows(target: Pose, verdict: ExistenceVerdict) -> List[List[Any]]:
    return [
        [
            target.x,
            target.y,
            target.theta,
            verdict.tag.value,
            verdict.witness.length,
            len(verdict.witness.minimizers()),
            verdict.boundary_marginal,
            None,
        ]
    ]


def atlas_rows(entries: List[AtlasEntry]) -> List[List[Any]]:
    return [
        [
            e.target.x,
            e.target.y,
            e.target.theta,
            None if e.verdict is None else e.verdict.value,
            e.length,
            e.n_minimizers,
            e.marginal,
            e.error,
        ]
        for e in entries
    ]


def _witness(entry: AtlasEntry) -> Optional[Dict[str, float]]:
    if not entry.has_witness:
        return None
    return {"nu0": entry.nu0, "c0": entry.c0, "duration": entry.duration}


def atlas_document(grid: AtlasGrid, xi: float, entries: List[AtlasEntry]) -> Dict[str, Any]:
    return {
        "schema": schema_name("atlas"),
        "grid": {"kind": grid.kind, "radius": grid.radius, "n": grid.n, "n_theta": grid.n_theta},
        "xi": xi,
        "entries": [
            {
                "target": _pose(e.target),
                "verdict": None if e.verdict is None else e.verdict.value,
                "length": _number(e.length),
                "n_minimizers": e.n_minimizers,
                "marginal": e.marginal,
                "error": e.error,
                "witness": _witness(e),
            }
            for e in entries
        ],
    }


def error_document(error: Exception) -> Dict[str, Any]:
    document = {"error": type(error).__name__, "message": str(error)}
    details = getattr(error, "details", None)
    if callable(details):
        for key, value in details().items():
            document[key] = _number(value) if isinstance(value, float) else value
    return document
