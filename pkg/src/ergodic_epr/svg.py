"""Minimal self-contained SVG line plots.

Output depends only on the input numbers, so identical data give
identical bytes.
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .errors import EmptyInputError, InvalidParameterError

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=20, top=20, bottom=50)
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


def _n(x: float) -> str:
    return f"{x:.2f}"


def _ticks(lo, hi, log):
    if log:
        a, b = math.floor(lo), math.ceil(hi)
        return [float(k) for k in range(a, b + 1)]
    span = hi - lo
    step = 10 ** math.floor(math.log10(span / 5)) if span > 0 else 1.0
    for m in (1, 2, 5, 10):
        if span / (m * step) <= 6:
            step *= m
            break
    start = math.ceil(lo / step) * step
    n = int(math.floor((hi - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(max(n, 0))]


def _label(v, log):
    if log:
        return f"1e{int(v)}"
    return f"{v:.4g}"


def emit_svg(series, labels=None, *, logx=False, logy=False, xlabel="", ylabel="",
             title="", vlines=()) -> str:
    """Render line series as an SVG document.

    Parameters
    ----------
    series : sequence of sequences of (x, y)
        One polyline per series.
    labels : sequence of str, optional
        Legend entries, one per series.
    logx, logy : bool
        Logarithmic axes; non-positive points are dropped.
    vlines : sequence of (x, label)
        Dashed vertical marker lines, e.g. the Heisenberg time.
    """
    series = [list(s) for s in series]
    if not series or any(len(s) == 0 for s in series):
        raise EmptyInputError("need at least one non-empty series")
    if labels is not None and len(labels) != len(series):
        raise InvalidParameterError("one label per series")

    def tx(v, log):
        return math.log10(v) if log else v

    pts = []
    for s in series:
        kept = [(tx(x, logx), tx(y, logy)) for x, y in s
                if (not logx or x > 0) and (not logy or y > 0)]
        pts.append(kept)
    xs = [p[0] for s in pts for p in s] + [tx(x, logx) for x, _ in vlines if not logx or x > 0]
    ys = [p[1] for s in pts for p in s]
    if not ys:
        raise EmptyInputError("no plottable points")
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5

    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(x):
        return MARGIN["left"] + (x - x0) / (x1 - x0) * pw

    def py(y):
        return MARGIN["top"] + (1 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2}" y="14" text-anchor="middle">{escape(title)}</text>')
    bx, by = MARGIN["left"], MARGIN["top"] + ph
    out.append(f'<g class="axes" stroke="black" fill="none">'
               f'<line x1="{bx}" y1="{by}" x2="{bx + pw}" y2="{by}"/>'
               f'<line x1="{bx}" y1="{MARGIN["top"]}" x2="{bx}" y2="{by}"/></g>')
    ticks = ['<g class="ticks">']
    for v in _ticks(x0, x1, logx):
        if x0 <= v <= x1:
            ticks.append(f'<line x1="{_n(px(v))}" y1="{by}" x2="{_n(px(v))}" y2="{by + 5}" stroke="black"/>'
                         f'<text x="{_n(px(v))}" y="{by + 18}" text-anchor="middle">{_label(v, logx)}</text>')
    for v in _ticks(y0, y1, logy):
        if y0 <= v <= y1:
            ticks.append(f'<line x1="{bx - 5}" y1="{_n(py(v))}" x2="{bx}" y2="{_n(py(v))}" stroke="black"/>'
                         f'<text x="{bx - 8}" y="{_n(py(v) + 4)}" text-anchor="end">{_label(v, logy)}</text>')
    ticks.append("</g>")
    out.extend(ticks)
    if xlabel:
        out.append(f'<text x="{bx + pw / 2}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="16" y="{MARGIN["top"] + ph / 2}" text-anchor="middle" '
                   f'transform="rotate(-90 16 {MARGIN["top"] + ph / 2})">{escape(ylabel)}</text>')
    for x, lab in vlines:
        if logx and x <= 0:
            continue
        X = _n(px(tx(x, logx)))
        out.append(f'<line class="marker" x1="{X}" y1="{MARGIN["top"]}" x2="{X}" y2="{by}" '
                   f'stroke="gray" stroke-dasharray="4 3" data-x="{x!r}"/>')
        out.append(f'<text x="{X}" y="{MARGIN["top"] + 12}" fill="gray">{escape(str(lab))}</text>')
    for i, s in enumerate(pts):
        color = COLORS[i % len(COLORS)]
        coords = " ".join(f"{_n(px(x))},{_n(py(y))}" for x, y in s)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
    if labels:
        lx, ly = bx + pw - 150, MARGIN["top"] + 10
        out.append('<g class="legend">')
        for i, lab in enumerate(labels):
            color = COLORS[i % len(COLORS)]
            yy = ly + 16 * i
            out.append(f'<rect x="{lx}" y="{yy - 8}" width="14" height="3" fill="{color}"/>'
                       f'<text x="{lx + 20}" y="{yy}">{escape(str(lab))}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
