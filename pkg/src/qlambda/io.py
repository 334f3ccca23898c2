"""Deterministic file output: CSV point lists, JSON documents, SVG drawings."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .algebra import FieldElement

SCHEMA_PREFIX = "qlambda"


def fmt17(x: float) -> str:
    """A float with 17 significant digits (round-trips exactly); -0 prints as 0."""
    if x == 0:
        x = 0.0
    return format(x, ".17g")


def _elements(points) -> list[FieldElement]:
    elems = list(getattr(points, "elements", points))
    return sorted(elems, key=lambda e: e.coords)


def points_csv(points) -> str:
    """Header coords_0..coords_{d-1},re,im; one row per point sorted by coordinates."""
    elems = _elements(points)
    if not elems:
        raise ValueError("cannot emit an empty set")
    d = elems[0].ctx.degree
    lines = [",".join([f"coords_{i}" for i in range(d)] + ["re", "im"])]
    for e in elems:
        z = complex(e.shadow())
        lines.append(",".join([str(c) for c in e.coords] + [fmt17(z.real), fmt17(z.imag)]))
    return "\n".join(lines) + "\n"


def points_json(points, **meta) -> dict:
    elems = _elements(points)
    if not elems:
        raise ValueError("cannot emit an empty set")
    ctx = elems[0].ctx
    return {
        "schema": f"{SCHEMA_PREFIX}.pointset/1",
        "minpoly": list(ctx.minpoly.coeffs),
        **meta,
        "points": [{"coords": list(e.coords), "re": fmt17(complex(e.shadow()).real),
                    "im": fmt17(complex(e.shadow()).imag)} for e in elems],
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def write_atomic(path, text: str) -> Path:
    """Write through a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def emit(points, fmt: str, path=None, **meta) -> str:
    """Render ``points`` as csv, json or svg; write atomically when ``path`` is given."""
    if fmt == "csv":
        text = points_csv(points)
    elif fmt == "json":
        text = dumps(points_json(points, **meta))
    elif fmt == "svg":
        from .shapes import to_svg
        if not _elements(points):
            raise ValueError("cannot emit an empty set")
        text = to_svg(points)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        write_atomic(path, text)
    return text
