"""Curve and facet files.

Curves are CSV (one vertex per line, ``#`` comments allowed) or JSON
(``{"dimension": d, "vertices": [[...], ...]}``).  Facet files list one
facet normal per CSV line.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .geometry import Metric, PolygonalCurve

__all__ = [
    "CurveFormatError",
    "parse_curve",
    "read_curve",
    "curve_to_csv",
    "curve_to_json",
    "read_facets",
    "parse_metric",
]


class CurveFormatError(ValueError):
    """Input file that does not describe a valid curve or facet set."""


def _finite_row(fields, where: str) -> list[float]:
    try:
        row = [float(x) for x in fields]
    except ValueError as exc:
        raise CurveFormatError(f"{where}: {exc}") from None
    if not all(math.isfinite(x) for x in row):
        raise CurveFormatError(f"{where}: coordinates must be finite")
    return row


def _csv_rows(text: str, name: str) -> list[list[float]]:
    rows = []
    for lineno, fields in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not fields or fields[0].lstrip().startswith("#"):
            continue
        fields = [f.strip() for f in fields]
        if all(f == "" for f in fields):
            continue
        rows.append(_finite_row(fields, f"{name}:{lineno}"))
    return rows


def _check_rows(rows, name: str, dimension: int | None = None) -> np.ndarray:
    if not rows:
        raise CurveFormatError(f"{name}: no vertices")
    dims = {len(r) for r in rows}
    if len(dims) != 1:
        raise CurveFormatError(f"{name}: vertices have differing dimensions {sorted(dims)}")
    d = dims.pop()
    if d < 1:
        raise CurveFormatError(f"{name}: empty vertex")
    if dimension is not None and d != dimension:
        raise CurveFormatError(f"{name}: declared dimension {dimension}, vertices have {d}")
    return np.array(rows, dtype=float)


def parse_curve(text: str, fmt: str = "csv", name: str = "<curve>") -> PolygonalCurve:
    """Parse curve text in ``"csv"`` or ``"json"`` format."""
    if fmt == "csv":
        return PolygonalCurve(_check_rows(_csv_rows(text, name), name))
    if fmt == "json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CurveFormatError(f"{name}: {exc}") from None
        if not isinstance(doc, dict) or "vertices" not in doc:
            raise CurveFormatError(f"{name}: expected an object with 'vertices'")
        dim = doc.get("dimension")
        if dim is not None and (not isinstance(dim, int) or isinstance(dim, bool) or dim < 1):
            raise CurveFormatError(f"{name}: 'dimension' must be a positive integer")
        verts = doc["vertices"]
        if not isinstance(verts, list) or not all(isinstance(v, list) for v in verts):
            raise CurveFormatError(f"{name}: 'vertices' must be a list of coordinate lists")
        for k, v in enumerate(verts):
            if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
                raise CurveFormatError(f"{name}: vertex {k} has non-numeric coordinates")
        rows = [_finite_row(v, f"{name}: vertex {k}") for k, v in enumerate(verts)]
        return PolygonalCurve(_check_rows(rows, name, dim))
    raise ValueError(f"unknown curve format {fmt!r}")


def read_curve(path) -> PolygonalCurve:
    """Read a curve file; ``.json`` files are JSON, anything else CSV."""
    path = Path(path)
    try:
        text = path.read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise CurveFormatError(f"{path}: {exc}") from None
    fmt = "json" if path.suffix.lower() == ".json" else "csv"
    return parse_curve(text, fmt, str(path))


def curve_to_csv(curve: PolygonalCurve) -> str:
    """CSV text with shortest round-trip float representations."""
    return "".join(",".join(repr(float(x)) for x in v) + "\n" for v in curve.vertices)


def curve_to_json(curve: PolygonalCurve) -> str:
    return json.dumps({"dimension": curve.dimension, "vertices": curve.vertices.tolist()})


def read_facets(path) -> Metric:
    """Polytope metric from a file of facet normals, one per CSV line."""
    path = Path(path)
    try:
        text = path.read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise CurveFormatError(f"{path}: {exc}") from None
    normals = _check_rows(_csv_rows(text, str(path)), str(path))
    try:
        return Metric.polytope(normals)
    except ValueError as exc:
        raise CurveFormatError(f"{path}: {exc}") from None


def parse_metric(spec: str) -> Metric:
    """``euclidean``, ``l1``, ``linf``, ``polygon:<k>`` or ``polytope:<path>``."""
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    if name in ("euclidean", "l1", "linf") and not arg:
        return {"euclidean": Metric.euclidean_squared, "l1": Metric.l1, "linf": Metric.linf}[name]()
    if name == "polygon":
        try:
            k = int(arg)
        except ValueError:
            raise ValueError(f"polygon metric needs an integer side count, got {arg!r}") from None
        return Metric.polygon(k)
    if name == "polytope" and arg:
        return read_facets(arg)
    raise ValueError(f"unknown metric {spec!r}")
