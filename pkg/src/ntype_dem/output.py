"""Table serialization: CSV with a ``#`` metadata header, JSON, gnuplot matrices."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .config import RunConfig

TOOL = "ntype-dem"


def fmt(x) -> str:
    """Nine significant digits; scientific notation below 1e-4 in magnitude."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if x == 0:
        return "0"
    return f"{x:.9g}"


def metadata_lines(command: str, cfg: RunConfig | None, extra: dict | None = None) -> list[str]:
    lines = [f"tool: {TOOL} {__version__}", f"command: {command}"]
    if cfg is not None:
        lines += [f"config.{k}: {v}" for k, v in cfg.items() if k != "out"]
    for k, v in (extra or {}).items():
        lines.append(f"{k}: {v}")
    return lines


def render_csv(columns: Sequence[str], rows: Iterable[Sequence], meta: list[str]) -> str:
    out = [f"# {line}" for line in meta]
    out.append(",".join(columns))
    for row in rows:
        out.append(",".join(fmt(v) for v in row))
    return "\n".join(out) + "\n"


def _json_value(v):
    if v is None or isinstance(v, (bool, str)):
        return v
    v = float(v)
    return None if math.isnan(v) else float(fmt(v))


def render_json(columns: Sequence[str], rows: Iterable[Sequence], meta: list[str]) -> str:
    meta_dict = dict(line.split(": ", 1) for line in meta)
    records = [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows]
    doc = {"metadata": meta_dict, "columns": list(columns), "rows": records}
    return json.dumps(doc, indent=1) + "\n"


def render(fmt_name: str, columns, rows, meta) -> str:
    rows = list(rows)
    if fmt_name == "json":
        return render_json(columns, rows, meta)
    return render_csv(columns, rows, meta)


def render_gnuplot_matrix(x_axis, y_axis, z, meta: list[str]) -> str:
    """gnuplot ``nonuniform matrix`` text: first row is N then x; each row y then z."""
    out = [f"# {line}" for line in meta]
    out.append(" ".join([str(len(x_axis))] + [fmt(x) for x in x_axis]))
    for y, row in zip(y_axis, z):
        out.append(" ".join([fmt(y)] + [fmt(v) for v in row]))
    return "\n".join(out) + "\n"


def read_csv(text: str) -> tuple[list[str], list[dict[str, str]]]:
    """Parse a file written by :func:`render_csv`; returns (metadata, records)."""
    meta = []
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            meta.append(line[2:])
        elif line:
            body.append(line)
    header = body[0].split(",")
    return meta, [dict(zip(header, line.split(","))) for line in body[1:]]


def write_text(path: str | Path | None, text: str) -> None:
    if not path or str(path) == "-":
        import sys

        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
