"""Self-contained SVG emitters for experiment results.

Plots only read rows of an :class:`ExperimentResult`; they never compute
statistics. Output text is deterministic for a given result.
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .experiments import ExperimentKind

W, H = 480, 320
LEFT, RIGHT, TOP, BOTTOM = 60, 20, 36, 48
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf")


def _num(x):
    return f"{x:.2f}"


def _header(title):
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{W / 2:.1f}" y="20" font-size="13" text-anchor="middle" font-family="sans-serif">'
        f"{escape(title)}</text>",
    ]


def _axes(xlabel, ylabel):
    x0, y0, x1, y1 = LEFT, H - BOTTOM, W - RIGHT, TOP
    return [
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
        f'<text x="{(x0 + x1) / 2:.1f}" y="{H - 10}" font-size="11" text-anchor="middle" '
        f'font-family="sans-serif">{escape(xlabel)}</text>',
        f'<text x="14" y="{(y0 + y1) / 2:.1f}" font-size="11" text-anchor="middle" font-family="sans-serif" '
        f'transform="rotate(-90 14 {(y0 + y1) / 2:.1f})">{escape(ylabel)}</text>',
    ]


def line_svg(series, title, xlabel, ylabel):
    """``series`` is a list of ``(label, xs, ys)``."""
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys if math.isfinite(y)]
    out = _header(title) + _axes(xlabel, ylabel)
    if not xs_all or not ys_all:
        return "\n".join(out + ["</svg>"]) + "\n"
    xmin, xmax = min(xs_all), max(xs_all)
    ymin, ymax = min(0.0, min(ys_all)), max(ys_all)
    xspan = (xmax - xmin) or 1.0
    yspan = (ymax - ymin) or 1.0

    def px(x):
        return LEFT + (x - xmin) / xspan * (W - LEFT - RIGHT)

    def py(y):
        return H - BOTTOM - (y - ymin) / yspan * (H - TOP - BOTTOM)

    for tick in (xmin, xmax):
        out.append(f'<text x="{_num(px(tick))}" y="{H - BOTTOM + 14}" font-size="9" '
                   f'text-anchor="middle" font-family="sans-serif">{tick:g}</text>')
    for tick in (ymin, ymax):
        out.append(f'<text x="{LEFT - 4}" y="{_num(py(tick) + 3)}" font-size="9" '
                   f'text-anchor="end" font-family="sans-serif">{tick:.3g}</text>')
    for k, (label, xs, ys) in enumerate(series):
        color = PALETTE[k % len(PALETTE)]
        pts = " ".join(f"{_num(px(x))},{_num(py(y))}" for x, y in zip(xs, ys) if math.isfinite(y))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        for x, y in zip(xs, ys):
            if math.isfinite(y):
                out.append(f'<circle cx="{_num(px(x))}" cy="{_num(py(y))}" r="2.5" fill="{color}"/>')
        out.append(f'<text x="{W - RIGHT - 4}" y="{TOP + 12 + 12 * k}" font-size="10" fill="{color}" '
                   f'text-anchor="end" font-family="sans-serif">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def heatmap_svg(values, row_labels, col_labels, title, xlabel, ylabel):
    """Grid of cells shaded by a value in [0, 1]; blank cells are None."""
    out = _header(title) + _axes(xlabel, ylabel)
    nr, nc = len(row_labels), len(col_labels)
    if nr == 0 or nc == 0:
        return "\n".join(out + ["</svg>"]) + "\n"
    cw = (W - LEFT - RIGHT) / nc
    ch = (H - TOP - BOTTOM) / nr
    for i, rlab in enumerate(row_labels):
        y = TOP + i * ch
        out.append(f'<text x="{LEFT - 4}" y="{_num(y + ch / 2 + 3)}" font-size="9" text-anchor="end" '
                   f'font-family="sans-serif">{escape(str(rlab))}</text>')
        for j in range(nc):
            v = values[i][j]
            if v is None:
                continue
            shade = int(round(255 * (1.0 - min(max(v, 0.0), 1.0))))
            x = LEFT + j * cw
            out.append(f'<rect x="{_num(x)}" y="{_num(y)}" width="{_num(cw)}" height="{_num(ch)}" '
                       f'fill="rgb({shade},{shade},255)" stroke="white"/>')
            out.append(f'<text x="{_num(x + cw / 2)}" y="{_num(y + ch / 2 + 3)}" font-size="9" '
                       f'text-anchor="middle" font-family="sans-serif">{v:.2f}</text>')
    for j, clab in enumerate(col_labels):
        out.append(f'<text x="{_num(LEFT + (j + 0.5) * cw)}" y="{H - BOTTOM + 14}" font-size="9" '
                   f'text-anchor="middle" font-family="sans-serif">{escape(str(clab))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _ordered(values):
    seen = []
    for v in values:
        if v not in seen:
            seen.append(v)
    return seen


def plots_for(result):
    """Map of file name to SVG text for one experiment result."""
    kind = ExperimentKind(result.metadata["experiment"])
    rows = result.rows
    plots = {}
    if kind is ExperimentKind.RECOVERY_PHASE:
        cells = [r for r in rows if r.statistic == "success_rate"]
        for noise in _ordered(r.noise for r in cells):
            sub = [r for r in cells if r.noise == noise]
            keys = _ordered((r.d, r.F) for r in sub)
            svals = sorted(_ordered(r.s for r in sub))
            grid = [[None] * len(svals) for _ in keys]
            for r in sub:
                grid[keys.index((r.d, r.F))][svals.index(r.s)] = r.value
            name = "phase_" + noise.replace(":", "_") + ".svg"
            plots[name] = heatmap_svg(grid, [f"d={d}, F={F}" for d, F in keys], svals,
                                      f"exact recovery rate ({noise})", "s", "(d, F)")
    elif kind is ExperimentKind.COHERENCE_TAIL:
        med = [r for r in rows if r.statistic == "median_coherence"]
        series = []
        for F_key in _ordered(r.F // r.d if r.d else 0 for r in med):
            sub = [r for r in med if (r.F // r.d if r.d else 0) == F_key]
            series.append((f"median mu (F/d={F_key})", [r.d for r in sub], [r.value for r in sub]))
        floor = [r for r in rows if r.statistic == "min_coherence"]
        if floor:
            series.append(("Welch pair floor", [r.d for r in floor], [r.bound for r in floor]))
        plots["coherence.svg"] = line_svg(series, "coherence of random unit codes", "d", "coherence")
    elif kind is ExperimentKind.INTERFERENCE_TAIL:
        ex = [r for r in rows if r.statistic.startswith("exceedance[t=")]
        series = []
        for d, m in _ordered((r.d, r.s) for r in ex):
            sub = [r for r in ex if (r.d, r.s) == (d, m)]
            ts = [float(r.statistic[len("exceedance[t="):-1]) for r in sub]
            series.append((f"d={d}, m={m}", ts, [r.value for r in sub]))
        plots["interference_tail.svg"] = line_svg(series, "interference tail", "t", "P(|sum| > t)")
    elif kind is ExperimentKind.ENERGY_FLOOR:
        mc = [r for r in rows if r.statistic.startswith("linear_energy_per_F")]
        for d, F in _ordered((r.d, r.F) for r in mc):
            sub = [r for r in mc if (r.d, r.F) == (d, F)]
            series = []
            for stat in _ordered(r.statistic for r in sub):
                pts = [r for r in sub if r.statistic == stat]
                series.append((stat, [float(r.s) for r in pts], [r.value for r in pts]))
            bounded = [r for r in sub if r.bound != ""]
            if bounded:
                first = _ordered(r.statistic for r in bounded)[0]
                pts = [r for r in bounded if r.statistic == first]
                series.append(("floor s(F-d)/(2dF)", [float(r.s) for r in pts], [r.bound for r in pts]))
            plots[f"energy_d{d}_F{F}.svg"] = line_svg(series, f"linear energy per feature (d={d}, F={F})",
                                                      "s", "E||Ab||^2 / F")
    elif kind is ExperimentKind.QUADRATIC_SEPARATION:
        succ = [r for r in rows if r.statistic.startswith("threshold_success")]
        energy = [r for r in rows if r.statistic.startswith("linear_energy_per_F")]
        series = [("threshold success", [r.d for r in succ], [r.value for r in succ]),
                  ("linear energy / F", [r.d for r in energy], [r.value for r in energy]),
                  ("energy floor", [r.d for r in energy], [r.bound for r in energy])]
        plots["separation.svg"] = line_svg(series, "threshold vs linear readout at F = d^2", "d", "value")
    return plots
