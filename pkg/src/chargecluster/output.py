"""CSV and SVG writers for time series."""
from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def emit_csv(path, times, values) -> Path:
    """Write ``t,value`` rows with round-trip float precision and LF endings."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.size == 0 or times.shape != values.shape:
        raise ValueError("need a nonempty series with matching times")
    path = Path(path)
    lines = ["t,value"] + [f"{float(t)!r},{float(v)!r}" for t, v in zip(times, values)]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def read_csv(path) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1]


def _pi_ticks(lo, hi, max_ticks=10):
    span = max(hi - lo, 1e-12)
    step = 1
    while span / (step * math.pi) > max_ticks:
        step *= 2
    first = math.ceil(lo / (step * math.pi))
    last = math.floor(hi / (step * math.pi) + 1e-9)
    return [(k * step, k * step * math.pi) for k in range(first, last + 1)]


def _pi_label(k):
    if k == 0:
        return "0"
    return "π" if k == 1 else f"{k}π"


def emit_svg(path, series, labels, title: str = "", y_label: str = "value") -> Path:
    """Line plot of ``series`` (a list of ``(times, values)``) with a legend and pi-spaced t ticks."""
    if not series:
        raise ValueError("at least one series is required")
    if len(labels) != len(series):
        raise ValueError("one label per series")
    width, height = 720, 420
    left, right, top, bottom = 70, 160, 40, 50
    pw, ph = width - left - right, height - top - bottom

    all_t = np.concatenate([np.asarray(t, dtype=float) for t, _ in series])
    all_v = np.concatenate([np.asarray(v, dtype=float) for _, v in series])
    t_lo, t_hi = float(all_t.min()), float(all_t.max())
    v_lo, v_hi = min(0.0, float(all_v.min())), max(1.0, float(all_v.max()))
    if t_hi == t_lo:
        t_hi = t_lo + 1.0

    def x(t):
        return left + (t - t_lo) / (t_hi - t_lo) * pw

    def y(v):
        return top + (1 - (v - v_lo) / (v_hi - v_lo)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{left + pw / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<g class="axes" stroke="black" fill="none">'
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}"/>'
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}"/></g>',
    ]
    for k, t in _pi_ticks(t_lo, t_hi):
        out.append(f'<line x1="{x(t):.2f}" y1="{top + ph}" x2="{x(t):.2f}" y2="{top + ph + 5}" stroke="black"/>'
                   f'<text x="{x(t):.2f}" y="{top + ph + 18}" text-anchor="middle">{_pi_label(k)}</text>')
    for i in range(6):
        v = v_lo + i * (v_hi - v_lo) / 5
        out.append(f'<line x1="{left - 5}" y1="{y(v):.2f}" x2="{left}" y2="{y(v):.2f}" stroke="black"/>'
                   f'<text x="{left - 8}" y="{y(v) + 4:.2f}" text-anchor="end">{v:.2f}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle">t</text>')
    out.append(f'<text x="18" y="{top + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {top + ph / 2:.1f})">{escape(y_label)}</text>')

    for i, ((ts, vs), label) in enumerate(zip(series, labels)):
        color = COLORS[i % len(COLORS)]
        pts = " ".join(f"{x(t):.2f},{y(v):.2f}" for t, v in zip(np.asarray(ts, float), np.asarray(vs, float)))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
    legend = ['<g class="legend">']
    for i, label in enumerate(labels):
        ly = top + 10 + 20 * i
        legend.append(f'<rect x="{left + pw + 15}" y="{ly - 8}" width="14" height="4" fill="{COLORS[i % len(COLORS)]}"/>'
                      f'<text x="{left + pw + 35}" y="{ly}">{escape(str(label))}</text>')
    legend.append("</g>")
    out.extend(legend)
    out.append("</svg>")

    path = Path(path)
    path.write_text("\n".join(out) + "\n", encoding="utf-8", newline="\n")
    return path
