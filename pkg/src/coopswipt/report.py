"""Plot-ready CSV emission of throughput reports.

One file carries everything needed to regenerate both throughput figures:
secondary sum rate and primary rate versus alpha per scheme, with the
non-cooperative baseline. Output is locale-independent ('.' decimals, '\\n'
line endings, full-precision scientific notation) and byte-deterministic
for a given report.
"""

from .engine import ReportRow, ThroughputReport, _scheme_order

CSV_COLUMNS = (
    "alpha",
    "scheme",
    "primary_rate_mean",
    "primary_rate_ci95",
    "secondary_sum_rate_mean",
    "secondary_sum_rate_ci95",
    "e_h1_mean_j_per_hz",
    "e_h2_mean_j_per_hz",
    "p_p_mean_w_per_hz",
    "pt_alone_rate_mean",
)


def _num(value: float) -> str:
    return format(value, ".17e")


def _row_line(row: ReportRow) -> str:
    return ",".join(
        (
            _num(row.alpha),
            row.scheme,
            _num(row.primary_rate_mean),
            _num(row.primary_rate_ci95),
            _num(row.secondary_sum_rate_mean),
            _num(row.secondary_sum_rate_ci95),
            _num(row.e_h1_mean),
            _num(row.e_h2_mean),
            _num(row.p_p_mean),
            _num(row.pt_alone_rate_mean),
        )
    )


def render_csv(report: ThroughputReport) -> str:
    """CSV text: header, then rows by alpha ascending, scheme order, baseline last."""
    if not report.rows:
        raise ValueError("cannot emit an empty report")
    ordered = sorted(report.rows, key=lambda r: (r.alpha, _scheme_order(r.scheme)))
    lines = [",".join(CSV_COLUMNS)]
    lines.extend(_row_line(r) for r in ordered)
    return "\n".join(lines) + "\n"


def emit_csv(report: ThroughputReport, sink) -> None:
    """Write the CSV to a text-file-like sink."""
    sink.write(render_csv(report))
