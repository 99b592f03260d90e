import io

import pytest

from coopswipt.config import SimConfig
from coopswipt.engine import ReportRow, ThroughputReport, run_simulation, sweep
from coopswipt.report import CSV_COLUMNS, emit_csv, render_csv


def tiny_cfg():
    return SimConfig(n_secondary=6, slots=4, k_r=2, seed=5).validate()


def test_single_cell_two_lines():
    row = run_simulation(tiny_cfg()).to_row()
    text = render_csv(ThroughputReport([row]))
    lines = text.splitlines()
    assert len(lines) == 2
    assert lines[0] == ",".join(CSV_COLUMNS)


def test_sweep_cardinality():
    report = sweep(tiny_cfg(), [0.1, 0.5, 0.9], ["first", "second"])
    text = render_csv(report)
    assert len(text.splitlines()) == 1 + 3 * 3


def test_byte_identical_for_same_report():
    report = sweep(tiny_cfg(), [0.2], ["third"])
    assert render_csv(report) == render_csv(report)
    buf_a, buf_b = io.StringIO(), io.StringIO()
    emit_csv(report, buf_a)
    emit_csv(report, buf_b)
    assert buf_a.getvalue() == buf_b.getvalue()


def test_row_order_alpha_then_scheme_then_baseline():
    report = sweep(tiny_cfg(), [0.7, 0.2], ["fifth", "first"])
    lines = render_csv(report).splitlines()[1:]
    schemes = [line.split(",")[1] for line in lines]
    assert schemes == ["first", "fifth", "pt_alone", "first", "fifth", "pt_alone"]
    alphas = [float(line.split(",")[0]) for line in lines]
    assert alphas == [0.2, 0.2, 0.2, 0.7, 0.7, 0.7]


def test_full_precision_round_trip():
    row = run_simulation(tiny_cfg()).to_row()
    line = render_csv(ThroughputReport([row])).splitlines()[1]
    fields = line.split(",")
    assert float(fields[2]) == row.primary_rate_mean
    assert float(fields[4]) == row.secondary_sum_rate_mean
    assert "e" in fields[2]  # scientific notation


def test_no_locale_artifacts():
    report = sweep(tiny_cfg(), [0.3], ["second"])
    text = render_csv(report)
    assert "," in text and ";" not in text
    assert "\r" not in text
    assert text.endswith("\n")


def test_empty_report_rejected():
    with pytest.raises(ValueError):
        render_csv(ThroughputReport([]))


def test_report_lookup_helpers():
    report = sweep(tiny_cfg(), [0.4], ["first", "third"])
    assert report.get(0.4, "third").scheme == "third"
    assert report.schemes() == ["first", "third", "pt_alone"]
    with pytest.raises(KeyError):
        report.get(0.9, "first")
