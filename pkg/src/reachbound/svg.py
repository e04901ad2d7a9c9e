"""Minimal standalone SVG plots: step curves for profiles, error bars for experiment means.

Output is byte-for-byte deterministic for a given input: coordinates are
rounded to fixed precision and element order follows the data.
"""

from __future__ import annotations

import os
import xml.etree.ElementTree as ET

import numpy as np

__all__ = ["render_profile_svg", "render_series_svg", "render_points_svg"]

W, H = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 30, 50
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def _f(v):
    return f"{v:.2f}"


def _nice_ticks(lo, hi, k=5):
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / k
    mag = 10 ** np.floor(np.log10(step))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= step), default=10 * mag)
    first = np.ceil(lo / step) * step
    return [round(float(t), 12) for t in np.arange(first, hi + step * 1e-9, step)]


class _Canvas:
    def __init__(self, xlim, ylim, title, xlabel, ylabel):
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim
        if self.x1 <= self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 <= self.y0:
            self.y1 = self.y0 + 1.0
        self.root = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(W), height=str(H),
                               viewBox=f"0 0 {W} {H}")
        ET.SubElement(self.root, "rect", x="0", y="0", width=str(W), height=str(H), fill="white")
        self._axes(title, xlabel, ylabel)

    def px(self, x):
        return LEFT + (x - self.x0) / (self.x1 - self.x0) * (W - LEFT - RIGHT)

    def py(self, y):
        return H - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (H - TOP - BOTTOM)

    def _text(self, x, y, s, **kw):
        t = ET.SubElement(self.root, "text", x=_f(x), y=_f(y), **{"font-size": "12", "font-family": "sans-serif"}, **kw)
        t.text = s

    def _axes(self, title, xlabel, ylabel):
        g = ET.SubElement(self.root, "g", stroke="black", **{"stroke-width": "1"})
        ET.SubElement(g, "line", x1=_f(LEFT), y1=_f(H - BOTTOM), x2=_f(W - RIGHT), y2=_f(H - BOTTOM))
        ET.SubElement(g, "line", x1=_f(LEFT), y1=_f(TOP), x2=_f(LEFT), y2=_f(H - BOTTOM))
        for t in _nice_ticks(self.x0, self.x1):
            x = self.px(t)
            ET.SubElement(g, "line", x1=_f(x), y1=_f(H - BOTTOM), x2=_f(x), y2=_f(H - BOTTOM + 5))
            self._text(x, H - BOTTOM + 18, f"{t:g}", **{"text-anchor": "middle"})
        for t in _nice_ticks(self.y0, self.y1):
            y = self.py(t)
            ET.SubElement(g, "line", x1=_f(LEFT - 5), y1=_f(y), x2=_f(LEFT), y2=_f(y))
            self._text(LEFT - 8, y + 4, f"{t:g}", **{"text-anchor": "end"})
        self._text(W / 2, 18, title, **{"text-anchor": "middle"})
        self._text(W / 2, H - 10, xlabel, **{"text-anchor": "middle"})
        self._text(16, H / 2, ylabel, **{"text-anchor": "middle", "transform": f"rotate(-90 16 {_f(H / 2)})"})

    def polyline(self, xs, ys, color, dash=None):
        pts = " ".join(f"{_f(self.px(x))},{_f(self.py(y))}" for x, y in zip(xs, ys))
        kw = {"points": pts, "fill": "none", "stroke": color, "stroke-width": "1.5"}
        if dash:
            kw["stroke-dasharray"] = dash
        ET.SubElement(self.root, "polyline", **kw)

    def write(self, path):
        tree = ET.ElementTree(self.root)
        ET.indent(tree)
        tmp = f"{path}.tmp"
        tree.write(tmp, encoding="utf-8", xml_declaration=True)
        os.replace(tmp, path)


def render_profile_svg(p, path, model=None, title="beta-reach profile"):
    """Step plot of a :class:`BetaReachProfile`, optionally with a model line.

    ``model`` is a callable of beta (for instance a ground-truth model) drawn
    dashed over the plotted range.
    """
    beta, value = np.asarray(p.beta, float), np.asarray(p.value, float)
    fin = np.isfinite(value)
    if len(beta) == 0 or not fin.any():
        raise ValueError("profile has no finite step to draw")
    ends = np.r_[beta[1:], p.beta_max]
    if p.truncated_at is not None:
        ends = np.minimum(ends, p.truncated_at)
    xs, ys = [], []
    for b, e, v in zip(beta[fin], ends[fin], value[fin]):
        xs += [b, e]
        ys += [v, v]
    xmax = max(xs[-1], 1e-12)
    ylo, yhi = min(ys), max(ys)
    pad = 0.05 * (yhi - ylo) if yhi > ylo else 0.5
    c = _Canvas((0.0, xmax), (max(0.0, ylo - pad), yhi + pad), title, "beta", "reach_beta")
    c.polyline(xs, ys, COLORS[0])
    if model is not None:
        grid = np.linspace(0.0, xmax, 101)
        vals = []
        for b in grid:
            try:
                vals.append(float(model(b)))
            except ValueError:
                vals.append(np.nan)
        vals = np.array(vals)
        ok = np.isfinite(vals)
        if ok.any():
            c.polyline(grid[ok], vals[ok], COLORS[1], dash="5,4")
    c.write(path)


def render_series_svg(series, path, truth=None, title="", xlabel="n", ylabel="bound"):
    """Means with error bars.

    ``series`` maps a label to ``(x, mean, half_width)`` arrays. A horizontal
    dashed line marks ``truth`` when given.
    """
    if not series or all(len(v[0]) == 0 for v in series.values()):
        raise ValueError("nothing to plot")
    allx = np.concatenate([np.asarray(v[0], float) for v in series.values()])
    lo = np.concatenate([np.asarray(v[1], float) - np.asarray(v[2], float) for v in series.values()])
    hi = np.concatenate([np.asarray(v[1], float) + np.asarray(v[2], float) for v in series.values()])
    ylo, yhi = float(np.nanmin(lo)), float(np.nanmax(hi))
    if truth is not None:
        ylo = min(ylo, truth)
    pad = 0.05 * (yhi - ylo) if yhi > ylo else 0.5
    xpad = 0.05 * (allx.max() - allx.min()) if allx.max() > allx.min() else 0.5
    c = _Canvas((allx.min() - xpad, allx.max() + xpad), (ylo - pad, yhi + pad), title, xlabel, ylabel)
    if truth is not None:
        c.polyline([c.x0, c.x1], [truth, truth], "#777777", dash="4,4")
    for k, (label, (x, m, hw)) in enumerate(series.items()):
        color = COLORS[k % len(COLORS)]
        x, m, hw = (np.asarray(a, float) for a in (x, m, hw))
        c.polyline(x, m, color)
        g = ET.SubElement(c.root, "g", stroke=color, fill=color)
        for xi, mi, hi_ in zip(x, m, hw):
            ET.SubElement(g, "line", x1=_f(c.px(xi)), y1=_f(c.py(mi - hi_)), x2=_f(c.px(xi)), y2=_f(c.py(mi + hi_)))
            ET.SubElement(g, "circle", cx=_f(c.px(xi)), cy=_f(c.py(mi)), r="3")
        c._text(W - RIGHT - 150, TOP + 16 * (k + 1), label, fill=color)
    c.write(path)


def render_points_svg(points, path, groups=None, title=""):
    """Scatter of the first two coordinates.

    ``groups`` is a list of ``(mask, color, radius)`` drawn in order over the
    full cloud, for example inside points then flagged points.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or len(pts) == 0:
        raise ValueError("no points to plot")
    if pts.shape[1] == 1:
        pts = np.c_[pts, np.zeros(len(pts))]
    x, y = pts[:, 0], pts[:, 1]
    span = max(x.max() - x.min(), y.max() - y.min(), 1e-12)
    cx, cy = (x.max() + x.min()) / 2, (y.max() + y.min()) / 2
    c = _Canvas((cx - span / 2, cx + span / 2), (cy - span / 2, cy + span / 2), title, "x", "y")
    groups = groups or [(np.ones(len(pts), dtype=bool), "#555555", 1.5)]
    for mask, color, r in groups:
        g = ET.SubElement(c.root, "g", fill=color)
        for xi, yi in zip(x[mask], y[mask]):
            ET.SubElement(g, "circle", cx=_f(c.px(xi)), cy=_f(c.py(yi)), r=f"{r:g}")
    c.write(path)
