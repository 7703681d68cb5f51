"""Self-contained SVG 1.1 output: polylines, markers, axes, cell maps.

No plotting dependency; coordinates are formatted with fixed precision so
identical inputs give byte-identical files.
"""

from __future__ import annotations

import numpy as np

__all__ = ["SvgCanvas", "plot_curves", "plot_region_map"]

_COLORS = ["#1f6feb", "#d1242f", "#1a7f37", "#9a6700", "#8250df", "#bf3989", "#57606a"]
_REGION_FILL = {0: "#d0d7de", 1: "#a6d0f5", 2: "#7ee2a8", 3: "#ffd8a8"}


class SvgCanvas:
    """World-coordinate drawing surface with margins and linear axes."""

    def __init__(self, x_range, y_range, width=640, height=480, margin=54, title=""):
        self.x0, self.x1 = map(float, x_range)
        self.y0, self.y1 = map(float, y_range)
        if self.x1 == self.x0:
            self.x1 = self.x0 + 1.0
        if self.y1 == self.y0:
            self.y1 = self.y0 + 1.0
        self.width, self.height, self.margin = width, height, margin
        self.parts = []
        if title:
            self.parts.append(
                f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" '
                f'font-size="14" font-family="sans-serif">{_esc(title)}</text>'
            )

    def _px(self, x):
        frac = (x - self.x0) / (self.x1 - self.x0)
        return self.margin + frac * (self.width - 2 * self.margin)

    def _py(self, y):
        frac = (y - self.y0) / (self.y1 - self.y0)
        return self.height - self.margin - frac * (self.height - 2 * self.margin)

    def polyline(self, xs, ys, color="#1f6feb", width=1.2, dash=None):
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        keep = np.isfinite(xs) & np.isfinite(ys)
        xs, ys = xs[keep], ys[keep]
        if xs.size < 2:
            return
        pts = " ".join(f"{self._px(x):.2f},{self._py(y):.2f}" for x, y in zip(xs, ys))
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{width:.2f}"{dash_attr}/>'
        )

    def circle(self, x, y, radius=3.5, color="#d1242f", fill=True):
        fill_attr = color if fill else "none"
        self.parts.append(
            f'<circle cx="{self._px(x):.2f}" cy="{self._py(y):.2f}" r="{radius:.1f}" '
            f'fill="{fill_attr}" stroke="{color}" stroke-width="1.2"/>'
        )

    def cell(self, x_lo, x_hi, y_lo, y_hi, fill):
        px0, px1 = self._px(x_lo), self._px(x_hi)
        py0, py1 = self._py(y_hi), self._py(y_lo)
        self.parts.append(
            f'<rect x="{px0:.2f}" y="{py0:.2f}" width="{px1 - px0:.2f}" '
            f'height="{py1 - py0:.2f}" fill="{fill}" stroke="none"/>'
        )

    def vline(self, x, color="#57606a", dash="4,3"):
        self.polyline([x, x], [self.y0, self.y1], color=color, width=1.0, dash=dash)

    def hline(self, y, color="#57606a", dash="4,3"):
        self.polyline([self.x0, self.x1], [y, y], color=color, width=1.0, dash=dash)

    def text(self, x, y, s, size=11, anchor="middle", color="#24292f"):
        self.parts.append(
            f'<text x="{self._px(x):.2f}" y="{self._py(y):.2f}" text-anchor="{anchor}" '
            f'font-size="{size}" font-family="sans-serif" fill="{color}">{_esc(s)}</text>'
        )

    def axes(self, xlabel="", ylabel="", n_ticks=5):
        m, w, h = self.margin, self.width, self.height
        frame = (
            f'<rect x="{m}" y="{m}" width="{w - 2 * m}" height="{h - 2 * m}" '
            'fill="none" stroke="#24292f" stroke-width="1"/>'
        )
        self.parts.insert(0, frame)
        ticks = []
        for t in np.linspace(self.x0, self.x1, n_ticks):
            px = self._px(t)
            ticks.append(f'<line x1="{px:.2f}" y1="{h - m}" x2="{px:.2f}" y2="{h - m + 4}" stroke="#24292f"/>')
            ticks.append(
                f'<text x="{px:.2f}" y="{h - m + 16}" text-anchor="middle" font-size="10" '
                f'font-family="sans-serif">{t:.3g}</text>'
            )
        for t in np.linspace(self.y0, self.y1, n_ticks):
            py = self._py(t)
            ticks.append(f'<line x1="{m - 4}" y1="{py:.2f}" x2="{m}" y2="{py:.2f}" stroke="#24292f"/>')
            ticks.append(
                f'<text x="{m - 7}" y="{py + 3:.2f}" text-anchor="end" font-size="10" '
                f'font-family="sans-serif">{t:.3g}</text>'
            )
        self.parts.extend(ticks)
        if xlabel:
            self.parts.append(
                f'<text x="{w / 2:.1f}" y="{h - 8}" text-anchor="middle" font-size="12" '
                f'font-family="sans-serif">{_esc(xlabel)}</text>'
            )
        if ylabel:
            self.parts.append(
                f'<text x="14" y="{h / 2:.1f}" text-anchor="middle" font-size="12" '
                f'font-family="sans-serif" transform="rotate(-90 14 {h / 2:.1f})">{_esc(ylabel)}</text>'
            )

    def to_string(self) -> str:
        body = "\n".join(self.parts)
        return (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">\n'
            f'<rect width="{self.width}" height="{self.height}" fill="#ffffff"/>\n'
            f"{body}\n</svg>\n"
        )

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_string())


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def plot_curves(path, curves, x_range=None, y_range=None, *, title="", xlabel="x",
                ylabel="y", points=(), vlines=(), hlines=()):
    """Polyline plot; curves are (xs, ys) or (xs, ys, color) tuples."""
    xs_all = np.concatenate([np.asarray(c[0], dtype=float) for c in curves]) if curves else np.array([0.0, 1.0])
    ys_all = np.concatenate([np.asarray(c[1], dtype=float) for c in curves]) if curves else np.array([0.0, 1.0])
    finite_x = xs_all[np.isfinite(xs_all)]
    finite_y = ys_all[np.isfinite(ys_all)]
    if x_range is None:
        x_range = (float(finite_x.min()), float(finite_x.max()))
    if y_range is None:
        lo, hi = float(finite_y.min()), float(finite_y.max())
        pad = 0.05 * (hi - lo if hi > lo else 1.0)
        y_range = (lo - pad, hi + pad)
    canvas = SvgCanvas(x_range, y_range, title=title)
    canvas.axes(xlabel, ylabel)
    for i, curve in enumerate(curves):
        color = curve[2] if len(curve) > 2 else _COLORS[i % len(_COLORS)]
        canvas.polyline(curve[0], curve[1], color=color)
    for x in vlines:
        canvas.vline(x)
    for y in hlines:
        canvas.hline(y)
    for pt in points:
        x, y = pt[0], pt[1]
        color = pt[2] if len(pt) > 2 else "#d1242f"
        canvas.circle(x, y, color=color)
    canvas.write(path)


def plot_region_map(path, gammas, omegas, labels, curves=None, *, title="", xlabel="gamma", ylabel="omega"):
    """Cell map of integer labels with overlay curves; rows are run-length merged."""
    gammas = np.asarray(gammas, dtype=float)
    omegas = np.asarray(omegas, dtype=float)
    canvas = SvgCanvas((gammas[0], gammas[-1]), (omegas[0], omegas[-1]), title=title)
    dg = gammas[1] - gammas[0] if gammas.size > 1 else 1.0
    dw = omegas[1] - omegas[0] if omegas.size > 1 else 1.0
    for i, w in enumerate(omegas):
        row = labels[i]
        j = 0
        while j < row.size:
            k = j
            while k + 1 < row.size and row[k + 1] == row[j]:
                k += 1
            fill = _REGION_FILL.get(int(row[j]), "#ffffff")
            canvas.cell(
                gammas[j] - dg / 2, gammas[k] + dg / 2, w - dw / 2, w + dw / 2, fill
            )
            j = k + 1
    if curves:
        for i, (name, (cx, cy)) in enumerate(sorted(curves.items())):
            inside = (np.asarray(cy) >= omegas[0]) & (np.asarray(cy) <= omegas[-1])
            canvas.polyline(np.asarray(cx)[inside], np.asarray(cy)[inside],
                            color=_COLORS[i % len(_COLORS)], width=1.8)
    canvas.axes(xlabel, ylabel)
    canvas.write(path)
