"""Byte-stable SVG renderings: scatter maps, dendrograms and elbow plots."""

from __future__ import annotations

from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .errors import ValidationError
from .interpret import PALETTE

FONT = 'font-family="sans-serif" font-size="12"'
DEFAULT_FILL = PALETTE[0]
MARKER_R = 4.0


def _f(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _doc(width, height, body):
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def _fit(values, lo, hi, margin=0.05):
    """Affine map of ``values`` into [lo, hi] leaving ``margin`` on each side."""
    vmin, vmax = float(np.min(values)), float(np.max(values))
    span = vmax - vmin
    inner_lo = lo + margin * (hi - lo)
    inner_hi = hi - margin * (hi - lo)
    if span == 0:
        mid = 0.5 * (lo + hi)
        return lambda v: mid + 0.0 * (np.asarray(v) - vmin)
    scale = (inner_hi - inner_lo) / span
    return lambda v: inner_lo + (np.asarray(v) - vmin) * scale


def _marker(shape, x, y, fill):
    fill = quoteattr(fill)
    r = MARKER_R
    if shape == "circle":
        return f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}" fill={fill} stroke="black" stroke-width="0.5"/>'
    if shape == "square":
        return (f'<rect x="{_f(x - r)}" y="{_f(y - r)}" width="{_f(2 * r)}" height="{_f(2 * r)}" '
                f'fill={fill} stroke="black" stroke-width="0.5"/>')
    if shape == "triangle":
        pts = [(x, y - r), (x + r, y + r), (x - r, y + r)]
    else:
        pts = [(x, y - r), (x + r, y), (x, y + r), (x - r, y)]
    pts_s = " ".join(f"{_f(a)},{_f(b)}" for a, b in pts)
    return f'<polygon points="{pts_s}" fill={fill} stroke="black" stroke-width="0.5"/>'


def _axis_label(solution, i):
    share = solution.eigenvalue_share(i - 1)
    text = f"dim {i}"
    if share is not None:
        text += f" ({100 * share:.1f}%)"
    return text


def plot_map(solution, layer=None, dims=None, width: int = 640, height: int = 480) -> str:
    """2-D scatter of one dimension pair (1-based), colored by ``layer`` if given.

    The legend always lists the full palette of the layer, so layers sharing a
    palette render identically apart from marker fills.
    """
    coords = np.asarray(solution.coords, dtype=np.float64)
    m = coords.shape[1]
    if dims is None:
        dims = (1, 2) if m >= 2 else (1, 1)
    di, dj = dims
    if not (1 <= di <= m and 1 <= dj <= m):
        raise ValidationError(f"dimensions {dims} out of range for a {m}-dimensional solution")
    if layer is not None and len(layer.labels) != coords.shape[0]:
        raise ValidationError("coloring layer does not match the solution's points")

    legend_w = 160 if layer is not None else 0
    left, top, right, bottom = 60, 20, width - 20 - legend_w, height - 50
    # one scale for both axes keeps distances comparable
    x, y = coords[:, di - 1], coords[:, dj - 1]
    span = max(float(np.ptp(x)), float(np.ptp(y)))
    side = min(right - left, bottom - top)
    cx, cy = 0.5 * (left + right), 0.5 * (top + bottom)
    if span > 0:
        scale = 0.9 * side / span
        xmid, ymid = 0.5 * (x.max() + x.min()), 0.5 * (y.max() + y.min())
        px = cx + (x - xmid) * scale
        py = cy - (y - ymid) * scale
    else:
        px = np.full(len(x), cx)
        py = np.full(len(y), cy)

    body = [
        f'<rect x="{left}" y="{top}" width="{right - left}" height="{bottom - top}" '
        'fill="none" stroke="#999999"/>',
        f'<text x="{_f(cx)}" y="{height - 15}" text-anchor="middle" {FONT}>'
        f"{escape(_axis_label(solution, di))}</text>",
        f'<text x="15" y="{_f(cy)}" text-anchor="middle" {FONT} '
        f'transform="rotate(-90 15 {_f(cy)})">{escape(_axis_label(solution, dj))}</text>',
    ]
    for i in range(len(px)):
        if layer is None:
            body.append(_marker("circle", px[i], py[i], DEFAULT_FILL))
        else:
            body.append(_marker(layer.shape(i), px[i], py[i], layer.color(i)))
    if layer is not None:
        lx = width - legend_w
        for row, (label, (color, shape)) in enumerate(layer.palette.items()):
            ly = top + 10 + 18 * row
            body.append(f'<rect x="{lx}" y="{ly - 5}" width="10" height="10" fill={quoteattr(color)}/>')
            mark = "" if shape == "circle" else f" [{shape}]"
            body.append(f'<text x="{lx + 16}" y="{ly + 4}" {FONT}>{escape(label + mark)}</text>')
    return _doc(width, height, body)


def plot_dendrogram(dendrogram, width: int = 640, height: int = 400) -> str:
    """Classic dendrogram: leaves along the bottom, merge height on the vertical axis."""
    n = dendrogram.leaves
    order = dendrogram.leaf_order()
    left, right, top, bottom = 60, width - 20, 20, height - 60
    heights = dendrogram.heights()
    hmax = max(heights) if heights and max(heights) > 0 else 1.0
    to_y = _fit([0.0, hmax], bottom, top, margin=0.0)
    step = (right - left) / max(n, 1)
    xpos = {leaf: left + step * (k + 0.5) for k, leaf in enumerate(order)}
    ypos = {leaf: float(to_y(0.0)) for leaf in range(n)}

    body = [f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>']
    for t in np.linspace(0.0, hmax, 5):
        ty = float(to_y(t))
        body.append(f'<line x1="{left - 4}" y1="{_f(ty)}" x2="{left}" y2="{_f(ty)}" stroke="black"/>')
        body.append(f'<text x="{left - 6}" y="{_f(ty + 4)}" text-anchor="end" {FONT}>{t:.3g}</text>')
    for step_i, (a, b, h, _) in enumerate(dendrogram.merges):
        node = n + step_i
        yh = float(to_y(h))
        xa, xb = xpos[a], xpos[b]
        body.append(
            f'<path class="merge" d="M {_f(xa)} {_f(ypos[a])} V {_f(yh)} H {_f(xb)} V {_f(ypos[b])}" '
            'fill="none" stroke="black"/>'
        )
        xpos[node] = 0.5 * (xa + xb)
        ypos[node] = yh
    labels = dendrogram.labels or tuple(str(i) for i in range(n))
    for leaf in order:
        x = xpos[leaf]
        y = bottom + 12
        body.append(
            f'<text x="{_f(x)}" y="{y}" text-anchor="end" {FONT} '
            f'transform="rotate(-60 {_f(x)} {y})">{escape(labels[leaf])}</text>'
        )
    return _doc(width, height, body)


def plot_elbow(scan, width: int = 480, height: int = 320) -> str:
    """Stress against dimensionality, elbow marked with a circle."""
    dims = [k for k, _ in scan.rows]
    stress = [s for _, s in scan.rows]
    if not dims:
        raise ValidationError("empty elbow table")
    left, right, top, bottom = 60, width - 20, 20, height - 50
    to_x = _fit(dims, left, right)
    to_y = _fit([0.0, max(stress)], bottom, top)
    pts = " ".join(f"{_f(float(to_x(k)))},{_f(float(to_y(s)))}" for k, s in scan.rows)
    body = [
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="black"/>',
        f'<polyline points="{pts}" fill="none" stroke="{PALETTE[0]}" stroke-width="2"/>',
    ]
    for k in dims:
        kx = float(to_x(k))
        body.append(f'<text x="{_f(kx)}" y="{bottom + 16}" text-anchor="middle" {FONT}>{k}</text>')
    ymax = max(stress)
    body.append(f'<text x="{left - 6}" y="{_f(float(to_y(ymax)) + 4)}" text-anchor="end" {FONT}>{ymax:.3g}</text>')
    body.append(f'<text x="{left - 6}" y="{_f(float(to_y(0.0)) + 4)}" text-anchor="end" {FONT}>0</text>')
    ex, es = scan.rows[dims.index(scan.elbow)]
    body.append(
        f'<circle cx="{_f(float(to_x(ex)))}" cy="{_f(float(to_y(es)))}" r="6" fill="none" stroke="{PALETTE[1]}"/>'
    )
    body.append(f'<text x="{_f(0.5 * (left + right))}" y="{height - 12}" text-anchor="middle" {FONT}>'
                f"dimensions (elbow={scan.elbow})</text>")
    body.append(f'<text x="15" y="{_f(0.5 * (top + bottom))}" text-anchor="middle" {FONT} '
                f'transform="rotate(-90 15 {_f(0.5 * (top + bottom))})">stress</text>')
    return _doc(width, height, body)
