"""Plot data and a minimal standalone SVG line chart for decomposed lines."""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .decomposition import Decomposition, affine_at
from .model import xpoint_affine

WIDTH, HEIGHT = 640, 480
MARGIN = 60
UTILITY_COLOR = "#1f5fbf"
NORM_COLOR = "#808080"


def line_series(dec: Decomposition, eps_values, x_min=None, x_max=None, points=101):
    """Sampled utility/norm lines and the X-point for each environment.

    Without an explicit range, x runs from 0 to 1.5 times the largest X-point.
    """
    eps_values = [float(e) for e in eps_values]
    if not eps_values:
        raise ValueError("at least one environment value is required")
    pairs = [affine_at(dec, e) for e in eps_values]
    xpoints = [xpoint_affine(u, n) for u, n in pairs]
    if x_min is None:
        x_min = min(0.0, min(xpoints))
    if x_max is None:
        x_max = 1.5 * max(abs(p) for p in xpoints) or 1.0
    if not x_min < x_max:
        raise ValueError(f"empty x range [{x_min}, {x_max}]")
    xs = np.linspace(x_min, x_max, points)
    series = []
    for e, (u, n), xp in zip(eps_values, pairs, xpoints):
        series.append({
            "eps": e,
            "u": u,
            "n": n,
            "xpoint": xp,
            "value_at_xpoint": u(xp),
            "x": xs,
            "u_values": u.slope * xs + u.intercept,
            "n_values": n.slope * xs + n.intercept,
        })
    return series


def table_rows(series):
    """Long-format rows ``(eps, x, u, n)``."""
    for s in series:
        for x, u, n in zip(s["x"], s["u_values"], s["n_values"]):
            yield s["eps"], float(x), float(u), float(n)


def _ticks(lo, hi, count=5):
    return np.linspace(lo, hi, count)


def render_svg(series, title="", x_label="action x", y_label="value") -> str:
    """Fixed-viewport SVG with one utility and one norm line per environment.

    Axes are linear. Each X-point is marked with a circle.
    """
    x_lo = float(min(s["x"][0] for s in series))
    x_hi = float(max(s["x"][-1] for s in series))
    ys = np.concatenate([np.concatenate([s["u_values"], s["n_values"]]) for s in series])
    y_lo, y_hi = float(ys.min()), float(ys.max())
    if y_lo == y_hi:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0

    plot_w = WIDTH - 2 * MARGIN
    plot_h = HEIGHT - 2 * MARGIN

    def px(x):
        return MARGIN + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y):
        return HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * plot_h

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="{MARGIN / 2:.1f}" text-anchor="middle" '
        f'font-size="14">{escape(title)}</text>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
    ]
    for t in _ticks(x_lo, x_hi):
        out.append(f'<text x="{px(t):.1f}" y="{HEIGHT - MARGIN + 16}" text-anchor="middle" '
                   f'font-size="10">{t:.4g}</text>')
    for t in _ticks(y_lo, y_hi):
        out.append(f'<text x="{MARGIN - 6}" y="{py(t):.1f}" text-anchor="end" '
                   f'font-size="10">{t:.4g}</text>')
    out.append(f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle" '
               f'font-size="12">{escape(x_label)}</text>')
    out.append(f'<text x="15" y="{HEIGHT / 2:.1f}" text-anchor="middle" font-size="12" '
               f'transform="rotate(-90 15 {HEIGHT / 2:.1f})">{escape(y_label)}</text>')

    for s in series:
        x0, x1 = s["x"][0], s["x"][-1]
        for line, color, kind in ((s["u"], UTILITY_COLOR, "utility"),
                                  (s["n"], NORM_COLOR, "norm")):
            out.append(
                f'<line class="{kind}" data-eps="{s["eps"]:.9g}" '
                f'x1="{px(x0):.2f}" y1="{py(line(x0)):.2f}" '
                f'x2="{px(x1):.2f}" y2="{py(line(x1)):.2f}" stroke="{color}" stroke-width="1.5"/>'
            )
        out.append(
            f'<circle class="xpoint" data-eps="{s["eps"]:.9g}" data-x="{s["xpoint"]:.9g}" '
            f'cx="{px(s["xpoint"]):.2f}" cy="{py(s["value_at_xpoint"]):.2f}" r="4" '
            f'fill="none" stroke="black"/>'
        )
        out.append(
            f'<text x="{px(s["xpoint"]) + 6:.2f}" y="{py(s["value_at_xpoint"]) - 6:.2f}" '
            f'font-size="10">eps={s["eps"]:.6g}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
