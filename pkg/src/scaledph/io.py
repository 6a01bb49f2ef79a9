"""Point-cloud CSV and persistence-diagram JSON files.

Both formats are plain text with LF line endings and floats printed at
17 significant digits, enough for bit-exact float64 round trips.  The
CSV header is ``x0,...,x{m-1}`` with an optional trailing ``density``
column; the JSON schema is::

    {"field": p, "max_dim": d, "points": [{"dim": q, "birth": b,
     "death": v | "inf"}, ...]}

plus an optional ``"meta"`` object of run parameters that readers must
ignore when unknown.  Writers emit keys in a fixed order so identical
inputs produce identical bytes.
"""

from __future__ import annotations

import json
import math
import os
from typing import Any

import numpy as np

from .datasets import PointCloud
from .persistence import PersistenceDiagram

__all__ = [
    "read_diagram",
    "read_point_cloud",
    "write_diagram",
    "write_point_cloud",
]


def _fmt(x: float) -> str:
    # %.17g round-trips every float64; no trailing-zero trimming so
    # output bytes are a pure function of the value.
    return format(float(x), ".17g")


def write_point_cloud(path: str | os.PathLike[str], cloud: PointCloud) -> None:
    """Write ``cloud`` as CSV; oracle densities become a last column."""
    pts = cloud.points
    cols = [f"x{j}" for j in range(pts.shape[1])]
    if cloud.oracle_density is not None:
        cols.append("density")
    lines = [",".join(cols)]
    for i in range(len(pts)):
        row = [_fmt(v) for v in pts[i]]
        if cloud.oracle_density is not None:
            row.append(_fmt(cloud.oracle_density[i]))
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_point_cloud(path: str | os.PathLike[str]) -> PointCloud:
    """Read a point-cloud CSV written by :func:`write_point_cloud`.

    A ``density`` column, when present, is attached as the cloud's
    oracle density and will be preferred over kernel estimation by any
    consumer that accepts oracle values.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty point-cloud file")
    header = [h.strip() for h in lines[0].split(",")]
    has_density = bool(header) and header[-1] == "density"
    coord_names = header[:-1] if has_density else header
    expected = [f"x{j}" for j in range(len(coord_names))]
    if coord_names != expected or not coord_names:
        raise ValueError(
            f"{path}: header must be x0,...,x{{m-1}}[,density], got {lines[0]!r}"
        )
    n_cols = len(header)
    rows = []
    for ln_no, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != n_cols:
            raise ValueError(f"{path}:{ln_no}: expected {n_cols} fields")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise ValueError(f"{path}:{ln_no}: {exc}") from None
    if not rows:
        raise ValueError(f"{path}: no data rows")
    arr = np.asarray(rows, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{path}: non-finite coordinate or density")
    if has_density:
        return PointCloud(points=arr[:, :-1], oracle_density=arr[:, -1])
    return PointCloud(points=arr)


def _encode_value(x: float) -> str:
    if math.isinf(x):
        return '"inf"'
    return _fmt(x)


def write_diagram(
    path: str | os.PathLike[str],
    diagram: PersistenceDiagram,
    field: int,
    max_dim: int,
    meta: dict[str, Any] | None = None,
) -> None:
    """Write a diagram as JSON, one point object per line.

    ``field`` and ``max_dim`` record the coefficients and the homology
    range of the computation that produced the diagram; they are carried
    verbatim, not derived from the points.
    """
    out = [f'{{\n  "field": {int(field)},\n  "max_dim": {int(max_dim)},']
    if meta:
        out.append(f'  "meta": {json.dumps(meta, sort_keys=True)},')
    if len(diagram) == 0:
        out.append('  "points": []\n}')
    else:
        out.append('  "points": [')
        body = []
        for q, b, v in zip(diagram.dims, diagram.births, diagram.deaths):
            body.append(
                f'    {{"dim": {int(q)}, "birth": {_fmt(b)}, '
                f'"death": {_encode_value(v)}}}'
            )
        out.append(",\n".join(body))
        out.append("  ]\n}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")


def read_diagram(
    path: str | os.PathLike[str],
) -> tuple[PersistenceDiagram, int, int, dict[str, Any]]:
    """Read a diagram JSON; returns (diagram, field, max_dim, meta).

    Unknown top-level keys are ignored; a missing ``meta`` comes back as
    an empty dict.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: top level must be an object")
    try:
        field = int(doc["field"])
        max_dim = int(doc["max_dim"])
        raw_points = doc["points"]
    except KeyError as exc:
        raise ValueError(f"{path}: missing key {exc}") from None
    if not isinstance(raw_points, list):
        raise ValueError(f"{path}: points must be a list")
    dims, births, deaths = [], [], []
    for i, pt in enumerate(raw_points):
        if not isinstance(pt, dict):
            raise ValueError(f"{path}: points[{i}] must be an object")
        try:
            q = int(pt["dim"])
            b = float(pt["birth"])
            rawv = pt["death"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{path}: points[{i}]: {exc}") from None
        if rawv == "inf":
            v = math.inf
        else:
            try:
                v = float(rawv)
            except (TypeError, ValueError):
                raise ValueError(
                    f"{path}: points[{i}]: death must be a number or \"inf\""
                ) from None
        if not math.isfinite(b) or q < 0:
            raise ValueError(f"{path}: points[{i}]: bad birth or dim")
        dims.append(q)
        births.append(b)
        deaths.append(v)
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise ValueError(f"{path}: meta must be an object")
    diagram = PersistenceDiagram(
        dims=np.asarray(dims, dtype=np.int64),
        births=np.asarray(births, dtype=float),
        deaths=np.asarray(deaths, dtype=float),
    )
    return diagram, field, max_dim, meta
