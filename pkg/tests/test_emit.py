"""CSV round-trip, JSON, and SVG output."""

import json
import math
import xml.etree.ElementTree as ET

import pytest

from mdim.emit import (
    emit_csv,
    emit_json,
    emit_records,
    emit_summary_csv,
    emit_svg_scatter,
    parse_csv,
)
from mdim.errors import ParameterError
from mdim.harness import ExperimentConfig, run_sweep


def demo_result(trials=3, modes=frozenset({"bounds", "certify"})):
    cfg = ExperimentConfig(
        n_values=(60, 90),
        c_values=(2.0,),
        trials=trials,
        master_seed=5,
        modes=modes,
    )
    return run_sweep(cfg)


def test_csv_roundtrip_exact():
    result = demo_result()
    text = emit_csv(result.records)
    assert text.endswith("\n")
    assert "\r" not in text
    back = parse_csv(text)
    assert back == result.records


def test_csv_single_record_two_lines():
    result = demo_result(trials=1)
    text = emit_csv(result.records[:1])
    assert len(text.splitlines()) == 2


def test_csv_missing_optional_is_empty_cell():
    result = demo_result(trials=1, modes=frozenset({"bounds"}))
    rec = result.records[0]
    assert rec.exact_md is None
    text = emit_csv(result.records)
    header, row = text.splitlines()[:2]
    idx = header.split(",").index("exact_md")
    assert row.split(",")[idx] == ""


def test_csv_header_only_for_empty_sweep():
    result = demo_result(trials=0)
    text = emit_csv(result.records)
    assert len(text.splitlines()) == 1
    assert parse_csv(text) == []


def test_csv_rejects_foreign_header():
    with pytest.raises(ParameterError):
        parse_csv("a,b,c\n1,2,3\n")


def test_json_is_strict_and_complete():
    result = demo_result()
    data = json.loads(emit_json(result.records))
    assert len(data) == len(result.records)
    assert data[0]["n"] == result.records[0].n
    for row in data:
        for value in row.values():
            if isinstance(value, float):
                assert math.isfinite(value)


def test_summary_csv_has_one_row_per_cell():
    result = demo_result()
    text = emit_summary_csv(result.summaries)
    assert len(text.splitlines()) == 1 + len(result.summaries)


def test_svg_scatter_structure():
    cfg = ExperimentConfig(
        n_values=(50, 60, 70, 80, 90),
        c_values=(1.8, 2.4),
        trials=5,
        master_seed=3,
        modes=frozenset({"bounds", "certify"}),
    )
    result = run_sweep(cfg)
    svg = emit_svg_scatter(result.records)
    root = ET.fromstring(svg)  # well-formed XML
    assert root.tag.endswith("svg")
    circles = [el for el in root.iter() if el.tag.endswith("circle")]
    connected = [r for r in result.records if r.connected]
    assert len(circles) >= len(connected)  # at least one point per record
    classes = {el.attrib["class"] for el in circles}
    assert any("entropic_lb" in cl for cl in classes)


def test_svg_empty_records_still_wellformed():
    svg = emit_svg_scatter([])
    ET.fromstring(svg)


def test_emit_dispatch():
    result = demo_result(trials=1)
    assert emit_records(result, "csv").startswith("cell,")
    assert emit_records(result, "json").startswith("[")
    assert emit_records(result, "svg").startswith("<svg")
    assert emit_records(result, "summary-csv").startswith("cell,")
    with pytest.raises(ParameterError):
        emit_records(result, "yaml")
