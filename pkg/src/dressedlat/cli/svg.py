"""Minimal self-contained SVG emitter: line plots and boolean/scalar heatmaps.

Presentation only; data CSVs are the canonical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")
W, H = 640, 420
ML, MR, MT, MB = 70, 20, 30, 50


@dataclass
class Axis:
    lo: float
    hi: float
    log: bool = False
    label: str = ""

    def _t(self, v):
        return np.log10(v) if self.log else np.asarray(v, dtype=float)

    def map(self, v, p0, p1):
        a, b = self._t(self.lo), self._t(self.hi)
        span = (b - a) or 1.0
        return p0 + (self._t(v) - a) / span * (p1 - p0)

    def ticks(self, n=5):
        if self.log:
            e0, e1 = math.floor(math.log10(self.lo)), math.ceil(math.log10(self.hi))
            return [10.0**e for e in range(e0, e1 + 1) if self.lo <= 10.0**e <= self.hi]
        return list(np.linspace(self.lo, self.hi, n))


def _auto(values, log=False, label=""):
    v = np.asarray(values, dtype=float)
    v = v[np.isfinite(v)]
    if log:
        v = v[v > 0]
    lo, hi = (float(v.min()), float(v.max())) if v.size else (0.0, 1.0)
    if hi == lo:
        lo, hi = (lo / 2, lo * 2) if log else (lo - 1, hi + 1)
    return Axis(lo, hi, log, label)


def _frame(xa: Axis, ya: Axis, title: str) -> list[str]:
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2}" y="18" text-anchor="middle" font-size="14" font-family="sans-serif">{title}</text>',
        f'<rect x="{ML}" y="{MT}" width="{W - ML - MR}" height="{H - MT - MB}" fill="none" stroke="black"/>',
    ]
    for t in xa.ticks():
        x = xa.map(t, ML, W - MR)
        out.append(f'<line x1="{x:.2f}" y1="{H - MB}" x2="{x:.2f}" y2="{H - MB + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{H - MB + 18}" text-anchor="middle" font-size="11" '
                   f'font-family="sans-serif">{t:.3g}</text>')
    for t in ya.ticks():
        y = ya.map(t, H - MB, MT)
        out.append(f'<line x1="{ML - 5}" y1="{y:.2f}" x2="{ML}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{ML - 8}" y="{y + 4:.2f}" text-anchor="end" font-size="11" '
                   f'font-family="sans-serif">{t:.3g}</text>')
    out.append(f'<text x="{W / 2}" y="{H - 12}" text-anchor="middle" font-size="12" '
               f'font-family="sans-serif">{xa.label}</text>')
    out.append(f'<text x="16" y="{H / 2}" text-anchor="middle" font-size="12" font-family="sans-serif" '
               f'transform="rotate(-90 16 {H / 2})">{ya.label}</text>')
    return out


def line_plot(
    x,
    ys: Sequence,
    labels: Sequence[str] = (),
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    logx: bool = False,
    logy: bool = False,
    xs: Optional[Sequence] = None,
) -> str:
    """One polyline per entry of ``ys``; ``xs`` overrides the shared ``x`` per curve."""
    xs = list(xs) if xs is not None else [x] * len(ys)
    xa = _auto(np.concatenate([np.ravel(v) for v in xs]), logx, xlabel)
    ya = _auto(np.concatenate([np.ravel(v) for v in ys]), logy, ylabel)
    out = _frame(xa, ya, title)
    for i, (cx, cy) in enumerate(zip(xs, ys)):
        cx, cy = np.asarray(cx, float), np.asarray(cy, float)
        ok = np.isfinite(cx) & np.isfinite(cy)
        if logx:
            ok &= cx > 0
        if logy:
            ok &= cy > 0
        px, py = xa.map(cx[ok], ML, W - MR), ya.map(cy[ok], H - MB, MT)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        color = PALETTE[i % len(PALETTE)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.3" points="{pts}"/>')
        if i < len(labels):
            out.append(f'<text x="{W - MR - 6}" y="{MT + 16 + 14 * i}" text-anchor="end" font-size="11" '
                       f'fill="{color}" font-family="sans-serif">{labels[i]}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def heatmap(
    x,
    y,
    values,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    logx: bool = False,
    logy: bool = False,
    overlays: Sequence = (),
) -> str:
    """Cell-centred raster, ``values[iy, ix]``; ``overlays`` are (x, y, label) curves."""
    x, y, v = np.asarray(x, float), np.asarray(y, float), np.asarray(values, float)
    xa, ya = Axis(x.min(), x.max(), logx, xlabel), Axis(y.min(), y.max(), logy, ylabel)
    out = _frame(xa, ya, title)
    lo, hi = np.nanmin(v), np.nanmax(v)
    span = (hi - lo) or 1.0

    def edges(c, ax, p0, p1):
        p = ax.map(c, p0, p1)
        mid = 0.5 * (p[1:] + p[:-1])
        return np.concatenate([[p[0] - (mid[0] - p[0])], mid, [p[-1] + (p[-1] - mid[-1])]])

    ex, ey = edges(x, xa, ML, W - MR), edges(y, ya, H - MB, MT)
    for iy in range(y.size):
        for ix in range(x.size):
            g = int(255 - 200 * (v[iy, ix] - lo) / span)
            out.append(
                f'<rect x="{min(ex[ix], ex[ix + 1]):.2f}" y="{min(ey[iy], ey[iy + 1]):.2f}" '
                f'width="{abs(ex[ix + 1] - ex[ix]):.2f}" height="{abs(ey[iy + 1] - ey[iy]):.2f}" '
                f'fill="rgb({g},{g},255)" stroke="none"/>'
            )
    for i, (cx, cy, lab) in enumerate(overlays):
        cx, cy = np.asarray(cx, float), np.asarray(cy, float)
        ok = (cy >= ya.lo) & (cy <= ya.hi) & np.isfinite(cy)
        px, py = xa.map(cx[ok], ML, W - MR), ya.map(cy[ok], H - MB, MT)
        color = PALETTE[(i + 1) % len(PALETTE)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.6" '
                   f'points="{" ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))}"/>')
        out.append(f'<text x="{W - MR - 6}" y="{MT + 16 + 14 * i}" text-anchor="end" font-size="11" '
                   f'fill="{color}" font-family="sans-serif">{lab}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
