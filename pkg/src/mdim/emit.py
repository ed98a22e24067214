"""Record serialization: CSV (round-trippable), JSON, and an SVG scatter.

CSV columns follow the TrialRecord field order; empty cells mean None,
floats are written with repr so parsing them back is lossless. JSON is a
single UTF-8 array; non-finite floats become the strings "inf"/"-inf"/
"nan" to stay inside strict JSON.
"""

from __future__ import annotations

import csv
import io
import json
import math
import typing
from dataclasses import fields
from xml.sax.saxutils import escape

from .errors import ParameterError
from .harness import CellSummary, SweepResult, TrialRecord

_RECORD_FIELDS = fields(TrialRecord)


def _base_type(annotation) -> type:
    origin = typing.get_origin(annotation)
    if origin is typing.Union:
        args = [a for a in typing.get_args(annotation) if a is not type(None)]
        return args[0]
    return annotation


# annotations are strings under `from __future__ import annotations`
_TYPE_BY_NAME = {"int": int, "float": float, "bool": bool, "str": str}


def _field_type(f) -> type:
    ann = f.type
    if isinstance(ann, str):
        ann = ann.replace("Optional[", "").replace("]", "").strip()
        return _TYPE_BY_NAME[ann]
    return _base_type(ann)


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(float(value))  # float() normalizes numpy scalars
    return str(value)


def _parse_cell(text: str, typ: type):
    if text == "":
        return None
    if typ is bool:
        if text == "true":
            return True
        if text == "false":
            return False
        raise ParameterError(f"not a boolean cell: {text!r}")
    return typ(text)


def emit_csv(records: list[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f.name for f in _RECORD_FIELDS])
    for rec in records:
        writer.writerow([_format_cell(getattr(rec, f.name)) for f in _RECORD_FIELDS])
    return buf.getvalue()


def parse_csv(text: str) -> list[TrialRecord]:
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows:
        raise ParameterError("empty CSV")
    header = rows[0]
    expected = [f.name for f in _RECORD_FIELDS]
    if header != expected:
        raise ParameterError("CSV header does not match the record schema")
    out = []
    for row in rows[1:]:
        values = {
            f.name: _parse_cell(cell, _field_type(f))
            for f, cell in zip(_RECORD_FIELDS, row)
        }
        if values["error"] is None:
            values["error"] = ""
        out.append(TrialRecord(**values))
    return out


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)  # 'inf', '-inf', 'nan'
    return value


def record_to_dict(rec: TrialRecord) -> dict:
    return {f.name: _json_safe(getattr(rec, f.name)) for f in _RECORD_FIELDS}


def summary_to_dict(summary: CellSummary) -> dict:
    return {f.name: _json_safe(getattr(summary, f.name)) for f in fields(CellSummary)}


def emit_json(records: list[TrialRecord]) -> str:
    return json.dumps([record_to_dict(r) for r in records], allow_nan=False)


def emit_summary_csv(summaries: list[CellSummary]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = [f.name for f in fields(CellSummary)]
    writer.writerow(names)
    for s in summaries:
        writer.writerow([_format_cell(getattr(s, name)) for name in names])
    return buf.getvalue()


_SVG_SERIES = (
    ("entropic_lb", "#1b6ca8"),
    ("greedy_ub", "#c0392b"),
    ("constructed_z", "#7d3c98"),
    ("case1_lb", "#148f77"),
    ("case1_ub", "#b7950b"),
)


def emit_svg_scatter(records: list[TrialRecord]) -> str:
    """Scatter of per-trial bound values against gamma (SVG 1.1)."""
    width, height = 640, 400
    left, right, top, bottom = 60, 620, 30, 360
    points: list[tuple[str, float, float, str]] = []
    for rec in records:
        if rec.gamma is None or not math.isfinite(rec.gamma):
            continue
        for name, color in _SVG_SERIES:
            value = getattr(rec, name)
            if value is None or not math.isfinite(float(value)):
                continue
            points.append((name, rec.gamma, float(value), color))

    def span(values):
        lo, hi = min(values), max(values)
        if hi == lo:
            hi = lo + 1.0
        pad = 0.05 * (hi - lo)
        return lo - pad, hi + pad

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="{left}" y="{top}" width="{right - left}" '
        f'height="{bottom - top}" fill="none" stroke="#444"/>',
    ]
    if points:
        x_lo, x_hi = span([p[1] for p in points])
        y_lo, y_hi = span([p[2] for p in points])

        def sx(x):
            return left + (x - x_lo) / (x_hi - x_lo) * (right - left)

        def sy(y):
            return bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top)

        for name, x, y, color in points:
            parts.append(
                f'<circle class="pt pt-{name}" cx="{sx(x):.2f}" cy="{sy(y):.2f}" '
                f'r="3" fill="{color}" fill-opacity="0.7"/>'
            )
        parts.append(
            f'<text x="{left}" y="{bottom + 24}" font-size="11">'
            f"gamma: {x_lo:.3g} .. {x_hi:.3g}</text>"
        )
        parts.append(
            f'<text x="{left}" y="{top - 10}" font-size="11">'
            f"bound values: {y_lo:.3g} .. {y_hi:.3g}</text>"
        )
        shown = sorted({p[0] for p in points})
        legend = ", ".join(escape(s) for s in shown)
        parts.append(
            f'<text x="{left}" y="{bottom + 38}" font-size="11">series: {legend}</text>'
        )
    else:
        parts.append(
            f'<text x="{left}" y="{(top + bottom) // 2}" font-size="12">'
            "no plottable records</text>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_records(result: SweepResult, fmt: str) -> str:
    """Dispatch on the output format name used by the CLI and service."""
    if fmt == "csv":
        return emit_csv(result.records)
    if fmt == "json":
        return emit_json(result.records)
    if fmt == "svg":
        return emit_svg_scatter(result.records)
    if fmt == "summary-csv":
        return emit_summary_csv(result.summaries)
    raise ParameterError(f"unknown format: {fmt!r}")
