"""Success-rate curves with theoretical thresholds, as CSV and a bare SVG."""
from __future__ import annotations

import csv
import io
from collections import OrderedDict

from ..recovery.channel import RECOVERED

PLOT_COLUMNS = (
    "variant", "N", "d", "gamma", "delta", "M", "A1_size", "S_size",
    "trials", "recovered", "success_rate", "condition_rate",
    "threshold_comb_l2", "threshold_dra_l2", "threshold_dra_l1",
)


def thresholds(N: int, d: int, gamma: int, delta: float, M: float, A1: int) -> dict:
    """Largest admissible ``|S|`` (exclusive) under each condition."""
    n, r = N**d, delta / M
    return {
        "threshold_comb_l2": n / (4 * (gamma**2 + 2 * gamma) * A1) * r**2,
        "threshold_dra_l2": n / (4 * gamma * A1) * r**2,
        "threshold_dra_l1": n / (2 * gamma * A1) * r,
    }


def plot_rows(records) -> list[dict]:
    groups: "OrderedDict[tuple, list]" = OrderedDict()
    for r in sorted(records, key=lambda r: (r.variant, r.gamma, r.A1_size, r.S_size, r.trial)):
        key = (r.variant, r.N, r.d, r.gamma, r.delta, r.M, r.A1_size, r.S_size)
        groups.setdefault(key, []).append(r)
    rows = []
    for key, recs in groups.items():
        variant, N, d, gamma, delta, M, A1, S = key
        ok = sum(r.status == RECOVERED for r in recs)
        held = sum(r.condition_holds for r in recs)
        row = dict(zip(PLOT_COLUMNS[:8], key))
        row.update(trials=len(recs), recovered=ok, success_rate=ok / len(recs),
                   condition_rate=held / len(recs))
        row.update(thresholds(N, d, gamma, delta, M, A1))
        rows.append(row)
    return rows


def plot_csv(records) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=PLOT_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in plot_rows(records):
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
_THRESHOLD_FOR = {"comb-l2": "threshold_comb_l2", "dra-l2": "threshold_dra_l2",
                  "dra-l1": "threshold_dra_l1"}


def plot_svg(records, width: int = 640, height: int = 400) -> str:
    """Success rate against ``|S|``, one polyline per (variant, gamma, |A_1|).

    Dashed verticals mark the threshold belonging to each series' variant.
    """
    rows = plot_rows(records)
    series: "OrderedDict[tuple, list]" = OrderedDict()
    for row in rows:
        series.setdefault((row["variant"], row["gamma"], row["A1_size"]), []).append(row)
    pad = 50
    xmax = max([row["S_size"] for row in rows] + [1])
    sx = lambda s: pad + (width - 2 * pad) * s / xmax
    sy = lambda y: height - pad - (height - 2 * pad) * y
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{pad}" y1="{sy(0)}" x2="{width - pad}" y2="{sy(0)}" stroke="black"/>',
        f'<line x1="{pad}" y1="{sy(0)}" x2="{pad}" y2="{sy(1)}" stroke="black"/>',
        f'<text x="{width / 2}" y="{height - 10}" text-anchor="middle">|S|</text>',
        f'<text x="15" y="{height / 2}" transform="rotate(-90 15 {height / 2})" '
        'text-anchor="middle">success rate</text>',
        f'<text x="{pad - 5}" y="{sy(1) + 4}" text-anchor="end">1</text>',
        f'<text x="{pad - 5}" y="{sy(0) + 4}" text-anchor="end">0</text>',
        f'<text x="{sx(xmax)}" y="{sy(0) + 16}" text-anchor="middle">{xmax}</text>',
    ]
    for k, ((variant, gamma, A1), pts) in enumerate(series.items()):
        color = _COLORS[k % len(_COLORS)]
        coords = " ".join(f"{sx(r['S_size']):.2f},{sy(r['success_rate']):.2f}" for r in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        col = _THRESHOLD_FOR.get(variant)
        if col is not None:
            x = sx(min(pts[0][col], xmax))
            out.append(f'<line x1="{x:.2f}" y1="{sy(0)}" x2="{x:.2f}" y2="{sy(1)}" '
                       f'stroke="{color}" stroke-dasharray="4 3"/>')
        ly = pad + 16 * k
        out.append(f'<rect x="{width - pad - 150}" y="{ly - 9}" width="10" height="10" fill="{color}"/>')
        out.append(f'<text x="{width - pad - 135}" y="{ly}" font-size="12">'
                   f'{variant} gamma={gamma} |A1|={A1}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot_data(records, csv_path=None, svg_path=None) -> str:
    """Write the plot CSV (and optionally the SVG); returns the CSV text."""
    text = plot_csv(records)
    if csv_path is not None:
        with open(csv_path, "w", newline="") as fh:
            fh.write(text)
    if svg_path is not None:
        with open(svg_path, "w") as fh:
            fh.write(plot_svg(records))
    return text
