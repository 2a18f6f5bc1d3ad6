"""Minimal deterministic SVG output: polyline interferograms and a
rect-grid heatmap.  CSV remains the canonical artifact; these are quick-look
renderings only."""

from __future__ import annotations

import math
from typing import List, Sequence

from .engine import HeatmapCell, SweepRecord

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_W, _H = 880.0, 440.0
_ML, _MR, _MT, _MB = 70.0, 20.0, 20.0, 50.0


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def interferogram_svg(records: Sequence[SweepRecord]) -> str:
    models: List[str] = []
    for r in records:
        if r.model not in models:
            models.append(r.model)
    taus = [r.tau for r in records]
    values = [r.value for r in records]
    t_lo, t_hi = min(taus), max(taus)
    v_lo, v_hi = min(values + [0.0]), max(values + [1.0])
    if v_hi == v_lo:
        v_hi = v_lo + 1.0

    def x(t):
        return _ML + (t - t_lo) / (t_hi - t_lo) * (_W - _ML - _MR)

    def y(v):
        return _H - _MB - (v - v_lo) / (v_hi - v_lo) * (_H - _MT - _MB)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(_W)}" height="{_fmt(_H)}" '
        f'viewBox="0 0 {_fmt(_W)} {_fmt(_H)}">',
        f'<rect x="{_fmt(_ML)}" y="{_fmt(_MT)}" width="{_fmt(_W - _ML - _MR)}" '
        f'height="{_fmt(_H - _MT - _MB)}" fill="none" stroke="#444"/>',
        f'<text x="{_fmt(_W / 2)}" y="{_fmt(_H - 12)}" text-anchor="middle" '
        f'font-size="13">storage time (s): {_fmt(t_lo)} .. {_fmt(t_hi)}</text>',
        f'<text x="14" y="{_fmt(_MT + 10)}" font-size="13">{_fmt(v_hi)}</text>',
        f'<text x="14" y="{_fmt(_H - _MB)}" font-size="13">{_fmt(v_lo)}</text>',
    ]
    for i, model in enumerate(models):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(
            f"{_fmt(x(r.tau))},{_fmt(y(r.value))}" for r in records if r.model == model
        )
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.2"/>')
        parts.append(
            f'<text x="{_fmt(_ML + 8)}" y="{_fmt(_MT + 16 + 15 * i)}" font-size="12" '
            f'fill="{color}">{model}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _ramp(u: float) -> str:
    # dark blue (small) -> yellow (large)
    u = min(1.0, max(0.0, u))
    r = int(250 * u + 5 * (1 - u))
    g = int(220 * u + 30 * (1 - u))
    b = int(60 * u + 120 * (1 - u))
    return f"#{r:02x}{g:02x}{b:02x}"


def heatmap_svg(cells: Sequence[HeatmapCell]) -> str:
    grid = [c for c in cells if not c.marker]
    markers = [c for c in cells if c.marker]
    xs = sorted({c.delta_f_hz for c in grid})
    ys = sorted({c.height_m for c in grid})
    logs = [math.log10(c.tau_ent_s) for c in grid]
    lo, hi = min(logs), max(logs)
    span = (hi - lo) or 1.0

    def x(f):
        return _ML + (math.log10(f) - math.log10(xs[0])) / (
            math.log10(xs[-1]) - math.log10(xs[0])
        ) * (_W - _ML - _MR)

    def y(h):
        return _H - _MB - (math.log10(h) - math.log10(ys[0])) / (
            math.log10(ys[-1]) - math.log10(ys[0])
        ) * (_H - _MT - _MB)

    cw = (_W - _ML - _MR) / (len(xs) - 1 or 1)
    ch = (_H - _MT - _MB) / (len(ys) - 1 or 1)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(_W)}" height="{_fmt(_H)}" '
        f'viewBox="0 0 {_fmt(_W)} {_fmt(_H)}">',
        f'<text x="{_fmt(_W / 2)}" y="{_fmt(_H - 12)}" text-anchor="middle" font-size="13">'
        f"frequency separation (Hz, log) vs height (m, log); "
        f"log10 collapse time {_fmt(lo)} .. {_fmt(hi)}</text>",
    ]
    for c in grid:
        u = (math.log10(c.tau_ent_s) - lo) / span
        parts.append(
            f'<rect x="{_fmt(x(c.delta_f_hz) - cw / 2)}" y="{_fmt(y(c.height_m) - ch / 2)}" '
            f'width="{_fmt(cw + 0.5)}" height="{_fmt(ch + 0.5)}" fill="{_ramp(u)}"/>'
        )
    for c in markers:
        parts.append(
            f'<circle cx="{_fmt(x(c.delta_f_hz))}" cy="{_fmt(y(c.height_m))}" r="4" '
            f'fill="white" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_fmt(x(c.delta_f_hz) + 7)}" y="{_fmt(y(c.height_m) + 4)}" '
            f'font-size="11">{c.marker}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
