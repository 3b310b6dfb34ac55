"""Minimal self-contained SVG rendering: heatmaps and line charts.

No external renderer: coordinates are formatted with fixed precision so the
same data always produces byte-identical files. Heatmaps use a linear color
scale built from fixed anchor colors; invalid (NaN) cells are drawn in a
distinct neutral gray and called out in the legend.
"""

from __future__ import annotations

import math

import numpy as np

# Dark-blue to yellow anchors, perceptually ordered, linearly interpolated.
_ANCHORS = [
    (68, 1, 84), (71, 44, 122), (59, 81, 139), (44, 113, 142),
    (33, 144, 141), (39, 173, 129), (92, 200, 99), (170, 220, 50),
    (253, 231, 37),
]
_INVALID_FILL = "#b4b4b4"
_LINE_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                "#8c564b"]


def _color(t: float) -> str:
    t = min(max(t, 0.0), 1.0)
    pos = t * (len(_ANCHORS) - 1)
    i = min(int(pos), len(_ANCHORS) - 2)
    frac = pos - i
    r, g, b = (round(a + (b_ - a) * frac)
               for a, b_ in zip(_ANCHORS[i], _ANCHORS[i + 1]))
    return f"#{r:02x}{g:02x}{b:02x}"


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _axis_ticks(values) -> list[tuple[float, str]]:
    lo, hi = float(values[0]), float(values[-1])
    mid = 0.5 * (lo + hi)
    return [(lo, f"{lo:g}"), (mid, f"{mid:g}"), (hi, f"{hi:g}")]


def emit_svg_heatmap(path, matrix, x_values, y_values, x_label: str,
                     y_label: str, title: str, config_hash: str,
                     value_label: str = "intensity") -> None:
    """Render a matrix (rows indexed by y_values, columns by x_values)."""
    matrix = np.asarray(matrix, dtype=float)
    ny, nx = matrix.shape
    if nx != len(x_values) or ny != len(y_values):
        raise ValueError("matrix dimensions must match the axis grids")
    finite = matrix[np.isfinite(matrix)]
    vmin = float(finite.min()) if finite.size else 0.0
    vmax = float(finite.max()) if finite.size else 1.0
    if vmax <= vmin:
        vmax = vmin + 1.0

    left, top, width, height = 70.0, 40.0, 420.0, 320.0
    cw, ch = width / nx, height / ny
    parts = []
    parts.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="620" '
                 f'height="430" viewBox="0 0 620 430">')
    parts.append(f"<!-- config_hash={config_hash} -->")
    parts.append('<rect width="620" height="430" fill="#ffffff"/>')
    parts.append(f'<text x="{_fmt(left + width / 2)}" y="22" '
                 f'text-anchor="middle" font-size="15" '
                 f'font-family="sans-serif">{title}</text>')
    for iy in range(ny):
        for ix in range(nx):
            value = matrix[iy, ix]
            if math.isnan(value):
                fill = _INVALID_FILL
            else:
                fill = _color((value - vmin) / (vmax - vmin))
            # y axis points up: last row at the top of the plot area.
            x0 = left + ix * cw
            y0 = top + (ny - 1 - iy) * ch
            parts.append(f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" '
                         f'width="{_fmt(cw + 0.5)}" height="{_fmt(ch + 0.5)}" '
                         f'fill="{fill}"/>')
    parts.append(f'<rect x="{_fmt(left)}" y="{_fmt(top)}" width="{_fmt(width)}"'
                 f' height="{_fmt(height)}" fill="none" stroke="#000000"/>')
    x_span = float(x_values[-1]) - float(x_values[0]) or 1.0
    y_span = float(y_values[-1]) - float(y_values[0]) or 1.0
    for value, label in _axis_ticks(x_values):
        frac = (value - float(x_values[0])) / x_span
        x = left + frac * width
        parts.append(f'<text x="{_fmt(x)}" y="{_fmt(top + height + 16)}" '
                     f'text-anchor="middle" font-size="11" '
                     f'font-family="sans-serif">{label}</text>')
    for value, label in _axis_ticks(y_values):
        frac = (value - float(y_values[0])) / y_span
        y = top + height - frac * height
        parts.append(f'<text x="{_fmt(left - 6)}" y="{_fmt(y + 4)}" '
                     f'text-anchor="end" font-size="11" '
                     f'font-family="sans-serif">{label}</text>')
    parts.append(f'<text x="{_fmt(left + width / 2)}" '
                 f'y="{_fmt(top + height + 34)}" text-anchor="middle" '
                 f'font-size="13" font-family="sans-serif">{x_label}</text>')
    parts.append(f'<text x="16" y="{_fmt(top + height / 2)}" '
                 f'text-anchor="middle" font-size="13" '
                 f'font-family="sans-serif" transform="rotate(-90 16 '
                 f'{_fmt(top + height / 2)})">{y_label}</text>')

    # Linear color bar with end labels.
    bar_x, bar_w = left + width + 24.0, 18.0
    steps = 32
    for i in range(steps):
        t0 = i / steps
        y0 = top + height * (1.0 - (i + 1) / steps)
        parts.append(f'<rect x="{_fmt(bar_x)}" y="{_fmt(y0)}" '
                     f'width="{_fmt(bar_w)}" '
                     f'height="{_fmt(height / steps + 0.5)}" '
                     f'fill="{_color(t0 + 0.5 / steps)}"/>')
    parts.append(f'<rect x="{_fmt(bar_x)}" y="{_fmt(top)}" '
                 f'width="{_fmt(bar_w)}" height="{_fmt(height)}" fill="none" '
                 f'stroke="#000000"/>')
    parts.append(f'<text x="{_fmt(bar_x + bar_w + 4)}" y="{_fmt(top + 10)}" '
                 f'font-size="11" font-family="sans-serif">{vmax:.3g}</text>')
    parts.append(f'<text x="{_fmt(bar_x + bar_w + 4)}" '
                 f'y="{_fmt(top + height)}" font-size="11" '
                 f'font-family="sans-serif">{vmin:.3g}</text>')
    parts.append(f'<text x="{_fmt(bar_x + bar_w + 4)}" '
                 f'y="{_fmt(top + height / 2)}" font-size="11" '
                 f'font-family="sans-serif">{value_label}</text>')
    if np.any(~np.isfinite(matrix)):
        parts.append(f'<rect x="{_fmt(left)}" y="408" width="12" height="12" '
                     f'fill="{_INVALID_FILL}" stroke="#000000"/>')
        parts.append(f'<text x="{_fmt(left + 18)}" y="418" font-size="11" '
                     f'font-family="sans-serif">invalid geometry cell</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(parts) + "\n")


def emit_svg_lines(path, x_values, series, x_label: str, y_label: str,
                   title: str, config_hash: str, log_y: bool = False) -> None:
    """Render line series: series is a list of (label, y_array) pairs."""
    x = np.asarray(x_values, dtype=float)
    if x.size < 2:
        raise ValueError("need at least two x samples")
    ys = [(str(label), np.asarray(y, dtype=float)) for label, y in series]
    if not ys:
        raise ValueError("need at least one series")
    for _, y in ys:
        if y.shape != x.shape:
            raise ValueError("series length must match x grid")

    stacked = np.concatenate([y for _, y in ys])
    stacked = stacked[np.isfinite(stacked)]
    if log_y:
        stacked = stacked[stacked > 0]
        if stacked.size == 0:
            raise ValueError("log scale requires positive data")
        vmin, vmax = float(stacked.min()), float(stacked.max())
        transform = lambda v: math.log10(v) if v > 0 else math.nan
        lo, hi = math.log10(vmin), math.log10(vmax)
    else:
        vmin = float(stacked.min()) if stacked.size else 0.0
        vmax = float(stacked.max()) if stacked.size else 1.0
        transform = float
        lo, hi = vmin, vmax
    if hi <= lo:
        hi = lo + 1.0

    left, top, width, height = 70.0, 40.0, 460.0, 320.0
    parts = []
    parts.append('<svg xmlns="http://www.w3.org/2000/svg" width="620" '
                 'height="430" viewBox="0 0 620 430">')
    parts.append(f"<!-- config_hash={config_hash} -->")
    parts.append('<rect width="620" height="430" fill="#ffffff"/>')
    parts.append(f'<text x="{_fmt(left + width / 2)}" y="22" '
                 f'text-anchor="middle" font-size="15" '
                 f'font-family="sans-serif">{title}</text>')
    parts.append(f'<rect x="{_fmt(left)}" y="{_fmt(top)}" '
                 f'width="{_fmt(width)}" height="{_fmt(height)}" fill="none" '
                 f'stroke="#000000"/>')

    x_span = (x[-1] - x[0]) or 1.0

    def sx(value: float) -> float:
        return left + (value - x[0]) / x_span * width

    def sy(value: float) -> float:
        t = (transform(value) - lo) / (hi - lo)
        return top + height * (1.0 - t)

    for idx, (label, y) in enumerate(ys):
        color = _LINE_COLORS[idx % len(_LINE_COLORS)]
        points = []
        for xv, yv in zip(x, y):
            if not math.isfinite(yv) or (log_y and yv <= 0):
                continue
            points.append(f"{_fmt(sx(xv))},{_fmt(sy(yv))}")
        parts.append(f'<polyline fill="none" stroke="{color}" '
                     f'stroke-width="1.5" points="{" ".join(points)}"/>')
        ly = top + 16 + 16 * idx
        parts.append(f'<line x1="{_fmt(left + width - 120)}" '
                     f'y1="{_fmt(ly - 4)}" x2="{_fmt(left + width - 100)}" '
                     f'y2="{_fmt(ly - 4)}" stroke="{color}" '
                     f'stroke-width="1.5"/>')
        parts.append(f'<text x="{_fmt(left + width - 94)}" y="{_fmt(ly)}" '
                     f'font-size="11" font-family="sans-serif">{label}</text>')

    for value, label in _axis_ticks(x):
        parts.append(f'<text x="{_fmt(sx(value))}" '
                     f'y="{_fmt(top + height + 16)}" text-anchor="middle" '
                     f'font-size="11" font-family="sans-serif">{label}</text>')
    for frac in (0.0, 0.5, 1.0):
        value = lo + frac * (hi - lo)
        shown = 10.0 ** value if log_y else value
        parts.append(f'<text x="{_fmt(left - 6)}" '
                     f'y="{_fmt(top + height * (1 - frac) + 4)}" '
                     f'text-anchor="end" font-size="11" '
                     f'font-family="sans-serif">{shown:.3g}</text>')
    parts.append(f'<text x="{_fmt(left + width / 2)}" '
                 f'y="{_fmt(top + height + 34)}" text-anchor="middle" '
                 f'font-size="13" font-family="sans-serif">{x_label}</text>')
    parts.append(f'<text x="16" y="{_fmt(top + height / 2)}" '
                 f'text-anchor="middle" font-size="13" '
                 f'font-family="sans-serif" transform="rotate(-90 16 '
                 f'{_fmt(top + height / 2)})">{y_label}</text>')
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(parts) + "\n")
