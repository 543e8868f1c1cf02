"""Minimal SVG rendering for critical-difference, convergence and trade-off charts.

Output is plain text so it is deterministic and needs no plotting library.
"""
from __future__ import annotations

import math
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
           "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939", "#843c39", "#7b4173",
           "#3182bd", "#e6550d")
W, H = 640, 400
LEFT, RIGHT, TOP, BOTTOM = 70, 150, 40, 50


def _svg(width: int, height: int, body: list[str], title: str) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">')
    return "\n".join([head, f'<title>{escape(title)}</title>',
                      f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" '
                      f'font-size="13">{escape(title)}</text>', *body, "</svg>"]) + "\n"


def cd_plot(algos: Sequence[str], ranks: Sequence[float], cd: float,
            groups: Sequence[Sequence[int]], title: str = "Critical difference") -> str:
    """Rank axis with one tick per algorithm and bars joining indistinguishable groups."""
    k = len(algos)
    ranks = [float(r) for r in ranks]
    width = 640
    x0, x1 = 60.0, width - 60.0
    lo, hi = 1.0, float(max(k, 2))

    def xr(r):
        return x0 + (r - lo) / (hi - lo) * (x1 - x0)

    axis_y = 80.0
    order = np.argsort(ranks, kind="stable")
    half = (k + 1) // 2
    height = int(axis_y + 40 + 16 * half + 14 * len(groups) + 40)
    body = [f'<line x1="{x0:.1f}" y1="{axis_y}" x2="{x1:.1f}" y2="{axis_y}" stroke="black"/>']
    for r in range(1, int(hi) + 1):
        body.append(f'<line x1="{xr(r):.1f}" y1="{axis_y - 4}" x2="{xr(r):.1f}" '
                    f'y2="{axis_y}" stroke="black"/>'
                    f'<text x="{xr(r):.1f}" y="{axis_y - 8}" text-anchor="middle">{r}</text>')
    # CD reference bar
    body.append(f'<line x1="{xr(lo):.1f}" y1="45" x2="{xr(min(lo + cd, hi)):.1f}" y2="45" '
                f'stroke="black" stroke-width="2"/>'
                f'<text x="{xr(lo):.1f}" y="40">CD = {cd:.4f}</text>')
    for slot, i in enumerate(order):
        x = xr(ranks[i])
        left = slot < half
        row = slot if left else k - 1 - slot
        y = axis_y + 30 + 16 * row
        xt = x0 - 5 if left else x1 + 5
        anchor = "end" if left else "start"
        body.append(f'<g class="algo-tick"><line x1="{x:.1f}" y1="{axis_y}" x2="{x:.1f}" '
                    f'y2="{y:.1f}" stroke="black"/><line x1="{x:.1f}" y1="{y:.1f}" '
                    f'x2="{xt:.1f}" y2="{y:.1f}" stroke="black"/>'
                    f'<text x="{xt + (-3 if left else 3):.1f}" y="{y + 4:.1f}" '
                    f'text-anchor="{anchor}">{escape(algos[i])} ({ranks[i]:.2f})</text></g>')
    gy = axis_y + 12
    for g in groups:
        if len(g) < 2:
            continue
        rs = [ranks[i] for i in g]
        body.append(f'<line class="cd-group" x1="{xr(min(rs)) - 3:.1f}" y1="{gy:.1f}" '
                    f'x2="{xr(max(rs)) + 3:.1f}" y2="{gy:.1f}" stroke="black" stroke-width="3"/>')
        gy += 6
    return _svg(width, height, body, title)


def _scale(lo: float, hi: float, a: float, b: float):
    span = hi - lo if hi > lo else 1.0
    return lambda v: a + (v - lo) / span * (b - a)


def _frame(xlo, xhi, ylo, yhi, log_y: bool, xlabel: str, ylabel: str) -> list[str]:
    body = [f'<rect x="{LEFT}" y="{TOP}" width="{W - LEFT - RIGHT}" height="{H - TOP - BOTTOM}" '
            f'fill="none" stroke="black"/>']
    sy = _scale(ylo, yhi, H - BOTTOM, TOP)
    sx = _scale(xlo, xhi, LEFT, W - RIGHT)
    if log_y:
        ticks = range(int(math.floor(ylo)), int(math.ceil(yhi)) + 1)
        labels = [(t, f"1e{t}") for t in ticks if ylo <= t <= yhi]
    else:
        labels = [(v, f"{v:.3g}") for v in np.linspace(ylo, yhi, 5)]
    for v, lab in labels:
        body.append(f'<line x1="{LEFT - 4}" y1="{sy(v):.1f}" x2="{LEFT}" y2="{sy(v):.1f}" '
                    f'stroke="black"/><text x="{LEFT - 6}" y="{sy(v) + 4:.1f}" '
                    f'text-anchor="end">{lab}</text>')
    for v in np.linspace(xlo, xhi, 5):
        body.append(f'<text x="{sx(v):.1f}" y="{H - BOTTOM + 16}" text-anchor="middle">'
                    f'{v:.3g}</text>')
    body.append(f'<text x="{(LEFT + W - RIGHT) / 2:.1f}" y="{H - 12}" text-anchor="middle">'
                f'{escape(xlabel)}</text>')
    body.append(f'<text x="16" y="{(TOP + H - BOTTOM) / 2:.1f}" text-anchor="middle" '
                f'transform="rotate(-90 16 {(TOP + H - BOTTOM) / 2:.1f})">{escape(ylabel)}</text>')
    return body


def _polyline(xs, ys, sx, sy, color: str, extra: str = "") -> str:
    pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
    return f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"{extra}/>'


def line_plot(series: Mapping[str, tuple[Sequence[float], Sequence[float]]],
              log_y: bool = False, title: str = "", xlabel: str = "evaluations",
              ylabel: str = "") -> str:
    """One polyline per named series against evaluations; ``log_y`` plots log10 values."""
    if not series:
        return _svg(W, H, [], title)
    xs_all = np.concatenate([np.asarray(x, float) for x, _ in series.values()])
    ys = {k: np.asarray(y, float) for k, (_, y) in series.items()}
    if log_y:
        ys = {k: np.log10(np.maximum(v, 1e-300)) for k, v in ys.items()}
    y_all = np.concatenate(list(ys.values()))
    ylo, yhi = float(np.min(y_all)), float(np.max(y_all))
    if log_y:
        ylo, yhi = math.floor(ylo), math.ceil(yhi)
    if yhi <= ylo:
        yhi = ylo + 1.0
    xlo, xhi = float(np.min(xs_all)), float(np.max(xs_all))
    sx, sy = _scale(xlo, xhi, LEFT, W - RIGHT), _scale(ylo, yhi, H - BOTTOM, TOP)
    body = _frame(xlo, xhi, ylo, yhi, log_y, xlabel, ylabel)
    for i, (name, (x, _)) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        body.append(_polyline(x, ys[name], sx, sy, color, f' class="series" data-name="{escape(name)}"'))
        ly = TOP + 14 * i + 8
        body.append(f'<line x1="{W - RIGHT + 10}" y1="{ly}" x2="{W - RIGHT + 28}" y2="{ly}" '
                    f'stroke="{color}" stroke-width="2"/><text x="{W - RIGHT + 32}" '
                    f'y="{ly + 4}">{escape(name)}</text>')
    return _svg(W, H, body, title)


def tradeoff_plot(xpl: Mapping[str, tuple], xpt: Mapping[str, tuple], title: str = "") -> str:
    """XPL% as solid and XPT% as dashed lines per algorithm on a 0..100 axis."""
    body = []
    if xpl:
        x_all = np.concatenate([np.asarray(x, float) for x, _ in xpl.values()])
        xlo, xhi = float(np.min(x_all)), float(np.max(x_all))
        sx, sy = _scale(xlo, xhi, LEFT, W - RIGHT), _scale(0.0, 100.0, H - BOTTOM, TOP)
        body = _frame(xlo, xhi, 0.0, 100.0, False, "evaluations", "percent")
        for i, name in enumerate(xpl):
            color = PALETTE[i % len(PALETTE)]
            x, y = xpl[name]
            body.append(_polyline(x, y, sx, sy, color, ' class="xpl"'))
            x, y = xpt[name]
            body.append(_polyline(x, y, sx, sy, color, ' class="xpt" stroke-dasharray="4 3"'))
            ly = TOP + 14 * i + 8
            body.append(f'<line x1="{W - RIGHT + 10}" y1="{ly}" x2="{W - RIGHT + 28}" '
                        f'y2="{ly}" stroke="{color}" stroke-width="2"/>'
                        f'<text x="{W - RIGHT + 32}" y="{ly + 4}">{escape(name)}</text>')
    return _svg(W, H, body, title)
