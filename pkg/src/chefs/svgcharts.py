"""Minimal deterministic SVG emission for report data.

These are working charts, not publication graphics: every datum is
embedded as ``data-*`` attributes on its SVG element so tests (and
downstream tools) can scrape values straight from the file. Output is a
pure function of the report rows.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape, quoteattr

from .analytics import AggregateReport

WIDTH = 900
HEIGHT = 420
MARGIN = 60

_SERIES_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _svg(body: list[str], width: int = WIDTH, height: int = HEIGHT) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _no_data(name: str) -> str:
    return _svg(
        [
            f'<text x="{WIDTH // 2}" y="{HEIGHT // 2}" text-anchor="middle" '
            f'font-family="sans-serif" data-empty="true">no data: {escape(name)}</text>'
        ]
    )


def line_chart(report: AggregateReport, x_col: str, y_cols: tuple[str, ...], series_col: "str | None" = None) -> str:
    """One polyline per (series, metric); points carry data-x/data-y."""
    if not report.rows:
        return _no_data(report.name)
    cols = {name: i for i, name in enumerate(report.columns)}
    xi = cols[x_col]
    series_values = (
        sorted({row[cols[series_col]] for row in report.rows}) if series_col else [None]
    )
    xs = sorted({row[xi] for row in report.rows})
    x_pos = {x: MARGIN + (WIDTH - 2 * MARGIN) * i / max(1, len(xs) - 1) for i, x in enumerate(xs)}
    y_max = max(max(row[cols[c]] for c in y_cols) for row in report.rows) or 1
    body = [f'<title>{escape(report.name)}</title>']
    color_idx = 0
    for series in series_values:
        rows = [
            row
            for row in report.rows
            if series_col is None or row[cols[series_col]] == series
        ]
        rows.sort(key=lambda r: r[xi])
        for metric in y_cols:
            color = _SERIES_COLORS[color_idx % len(_SERIES_COLORS)]
            color_idx += 1
            points = []
            circles = []
            for row in rows:
                x = x_pos[row[xi]]
                value = row[cols[metric]]
                y = HEIGHT - MARGIN - (HEIGHT - 2 * MARGIN) * (value / y_max)
                points.append(f"{x:.2f},{y:.2f}")
                label = f"{series}:{metric}" if series is not None else metric
                circles.append(
                    f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="{color}" '
                    f"data-series={quoteattr(str(label))} data-x={quoteattr(str(row[xi]))} "
                    f"data-y={quoteattr(repr(value))}/>"
                )
            name = f"{series}:{metric}" if series is not None else metric
            body.append(
                f'<polyline fill="none" stroke="{color}" points="{" ".join(points)}" '
                f"data-series={quoteattr(str(name))} data-points={quoteattr(str(len(rows)))}/>"
            )
            body.extend(circles)
    return _svg(body)


def bar_chart(report: AggregateReport, label_cols: tuple[str, ...], value_col: str) -> str:
    """Horizontal bars; each rect carries data-name/data-value."""
    if not report.rows:
        return _no_data(report.name)
    cols = {name: i for i, name in enumerate(report.columns)}
    vi = cols[value_col]
    height = max(HEIGHT, 2 * MARGIN + 18 * len(report.rows))
    v_max = max(row[vi] for row in report.rows) or 1
    body = [f"<title>{escape(report.name)}</title>"]
    for i, row in enumerate(report.rows):
        label = " / ".join(str(row[cols[c]]) for c in label_cols)
        value = row[vi]
        bar_w = (WIDTH - 2 * MARGIN - 220) * (value / v_max)
        y = MARGIN + 18 * i
        body.append(
            f'<rect x="280" y="{y}" width="{max(bar_w, 0.5):.2f}" height="14" fill="#1f77b4" '
            f"data-name={quoteattr(label)} data-value={quoteattr(repr(value))}/>"
        )
        body.append(
            f'<text x="274" y="{y + 11}" text-anchor="end" font-size="11" '
            f'font-family="sans-serif">{escape(label[:42])}</text>'
        )
    return _svg(body, height=height)


def chord_chart(report: AggregateReport) -> str:
    """Trade links as arcs around a circle; each path carries the link data."""
    if not report.rows:
        return _no_data(report.name)
    cols = {name: i for i, name in enumerate(report.columns)}
    size = 640
    cx = cy = size / 2
    radius = size / 2 - 80
    countries = sorted(
        {row[cols["origin"]] for row in report.rows}
        | {row[cols["destination"]] for row in report.rows}
    )
    angle = {
        c: 2 * math.pi * i / len(countries) - math.pi / 2 for i, c in enumerate(countries)
    }
    max_pct = max(row[cols["pct"]] for row in report.rows) or 1.0
    body = [f"<title>{escape(report.name)}</title>"]
    for c in countries:
        x = cx + radius * math.cos(angle[c])
        y = cy + radius * math.sin(angle[c])
        body.append(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="#333" data-country={quoteattr(c)}/>'
        )
        lx = cx + (radius + 16) * math.cos(angle[c])
        ly = cy + (radius + 16) * math.sin(angle[c])
        body.append(
            f'<text x="{lx:.2f}" y="{ly:.2f}" text-anchor="middle" font-size="11" '
            f'font-family="sans-serif">{escape(c)}</text>'
        )
    for row in report.rows:
        origin, dest = row[cols["origin"]], row[cols["destination"]]
        x1 = cx + radius * math.cos(angle[origin])
        y1 = cy + radius * math.sin(angle[origin])
        x2 = cx + radius * math.cos(angle[dest])
        y2 = cy + radius * math.sin(angle[dest])
        pct = row[cols["pct"]]
        shade = int(200 - 160 * (pct / max_pct))
        body.append(
            f'<path d="M {x1:.2f} {y1:.2f} Q {cx:.2f} {cy:.2f} {x2:.2f} {y2:.2f}" '
            f'fill="none" stroke="rgb(215,{shade},{shade})" stroke-width="2" '
            f"data-origin={quoteattr(origin)} data-destination={quoteattr(dest)} "
            f"data-samples={quoteattr(str(row[cols['samples']]))} "
            f"data-noncompliant={quoteattr(str(row[cols['noncompliant_samples']]))} "
            f"data-pct={quoteattr(repr(pct))}/>"
        )
    return _svg(body, width=size, height=size)


def plot_report(report: AggregateReport) -> str:
    """Dispatch a report to its chart type."""
    name = report.name
    if name == "yearly_trend":
        return line_chart(report, "year", ("total_results", "noncompliant_results"), "hazard")
    if name == "unknown_origin_trend":
        return line_chart(report, "year", ("total_samples", "unknown_origin_samples"))
    if name == "trade_links":
        return chord_chart(report)
    if name == "top_contaminants":
        return bar_chart(report, ("contaminant_name",), "total_results")
    if name == "hazard_product_table":
        return bar_chart(report, ("contaminant_name", "product_name"), "total_results")
    if name == "product_hazard_table":
        return bar_chart(report, ("product_name", "contaminant_name"), "total_results")
    if name == "ontology_group_stats":
        return bar_chart(report, ("group",), "total_results")
    if name == "product_category_stats":
        return bar_chart(report, ("category",), "total_results")
    if name == "country_stats":
        return bar_chart(report, ("country", "hazard"), "total_results")
    if name == "sampling_strategy_breakdown":
        value = "samples" if "samples" in report.columns else "results"
        labels = tuple(c for c in report.columns[:3] if c not in ("samples", "results"))
        return bar_chart(report, labels, value)
    if name == "results_per_sample_distribution":
        return bar_chart(report, ("results_per_sample",), "samples")
    if name == "contaminant_overlap":
        return bar_chart(report, ("bucket",), "contaminant_ids")
    raise ValueError(f"no chart defined for report {name!r}")
