"""Tiny deterministic SVG plots.

Emitted artifacts only: fixed size, fixed number formatting, no
timestamps, so identical data produces identical bytes.
"""

import numpy as np

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 70, 20, 40, 50


def _fmt(x):
    return f"{x:.6g}"


def _scale(values, lo, hi, out_lo, out_hi):
    span = hi - lo if hi > lo else 1.0
    return out_lo + (np.asarray(values) - lo) * (out_hi - out_lo) / span


def _frame(title, xlabel, ylabel, xticks, yticks, body):
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.0f}" y="24" text-anchor="middle" '
        f'font-size="15" font-family="sans-serif">{title}</text>',
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" '
        f'height="{_H - _MT - _MB}" fill="none" stroke="#888"/>',
    ]
    for px, label in xticks:
        parts.append(
            f'<line x1="{px:.1f}" y1="{_H - _MB}" x2="{px:.1f}" '
            f'y2="{_H - _MB + 5}" stroke="#444"/>'
        )
        parts.append(
            f'<text x="{px:.1f}" y="{_H - _MB + 18}" text-anchor="middle" '
            f'font-size="11" font-family="sans-serif">{label}</text>'
        )
    for py, label in yticks:
        parts.append(
            f'<line x1="{_ML - 5}" y1="{py:.1f}" x2="{_ML}" y2="{py:.1f}" '
            f'stroke="#444"/>'
        )
        parts.append(
            f'<text x="{_ML - 8}" y="{py + 4:.1f}" text-anchor="end" '
            f'font-size="11" font-family="sans-serif">{label}</text>'
        )
    parts.append(
        f'<text x="{_W / 2:.0f}" y="{_H - 12}" text-anchor="middle" '
        f'font-size="12" font-family="sans-serif">{xlabel}</text>'
    )
    parts.append(
        f'<text x="16" y="{_H / 2:.0f}" text-anchor="middle" font-size="12" '
        f'font-family="sans-serif" transform="rotate(-90 16 {_H / 2:.0f})">'
        f"{ylabel}</text>"
    )
    parts.extend(body)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def line_plot(xs, ys, title="", xlabel="", ylabel="", log_y=False):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    yv = np.log10(np.maximum(ys, 1e-300)) if log_y else ys
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(yv.min()), float(yv.max())
    px = _scale(xs, x0, x1, _ML, _W - _MR)
    py = _scale(yv, y0, y1, _H - _MB, _MT)
    pts = " ".join(f"{a:.1f},{b:.1f}" for a, b in zip(px, py))
    body = [
        f'<polyline points="{pts}" fill="none" stroke="#1f77b4" stroke-width="2"/>'
    ]
    for a, b in zip(px, py):
        body.append(f'<circle cx="{a:.1f}" cy="{b:.1f}" r="2.5" fill="#1f77b4"/>')
    n_ticks = 5
    xticks = []
    for t in np.linspace(x0, x1, n_ticks):
        xticks.append((float(_scale([t], x0, x1, _ML, _W - _MR)[0]), _fmt(t)))
    yticks = []
    for t in np.linspace(y0, y1, n_ticks):
        label = _fmt(10.0 ** t) if log_y else _fmt(t)
        yticks.append((float(_scale([t], y0, y1, _H - _MB, _MT)[0]), label))
    return _frame(title, xlabel, ylabel, xticks, yticks, body)


def histogram(values, bins=40, title="", xlabel="", ylabel="count"):
    values = np.asarray(values, dtype=float)
    counts, edges = np.histogram(values, bins=bins)
    y1 = float(counts.max()) if counts.size else 1.0
    x0, x1 = float(edges[0]), float(edges[-1])
    body = []
    for c, e0, e1 in zip(counts, edges[:-1], edges[1:]):
        if c == 0:
            continue
        px0 = float(_scale([e0], x0, x1, _ML, _W - _MR)[0])
        px1 = float(_scale([e1], x0, x1, _ML, _W - _MR)[0])
        py = float(_scale([c], 0.0, y1, _H - _MB, _MT)[0])
        body.append(
            f'<rect x="{px0:.1f}" y="{py:.1f}" width="{max(px1 - px0 - 0.5, 0.5):.1f}" '
            f'height="{_H - _MB - py:.1f}" fill="#1f77b4" fill-opacity="0.7"/>'
        )
    xticks = [
        (float(_scale([t], x0, x1, _ML, _W - _MR)[0]), _fmt(t))
        for t in np.linspace(x0, x1, 5)
    ]
    yticks = [
        (float(_scale([t], 0.0, y1, _H - _MB, _MT)[0]), _fmt(t))
        for t in np.linspace(0.0, y1, 5)
    ]
    return _frame(title, xlabel, ylabel, xticks, yticks, body)


def save_svg(text, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
