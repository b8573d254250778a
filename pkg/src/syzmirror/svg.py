"""Hand-written SVG figures. Each builder returns ``(svg_text, plotted_data)``."""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

_SIZE = 480
_PAD = 24


class _Canvas:
    """Maps a data box onto a fixed square viewBox with y pointing up."""

    def __init__(self, box):
        xmin, xmax, ymin, ymax = (float(b) for b in box)
        self.box = (xmin, xmax, ymin, ymax)
        self.sx = (_SIZE - 2 * _PAD) / (xmax - xmin)
        self.sy = (_SIZE - 2 * _PAD) / (ymax - ymin)
        self.items = []

    def xy(self, x, y):
        return (round(_PAD + (float(x) - self.box[0]) * self.sx, 3),
                round(_SIZE - _PAD - (float(y) - self.box[2]) * self.sy, 3))

    def line(self, p, q, stroke="black", width=1.5, dash=None):
        (x1, y1), (x2, y2) = self.xy(*p), self.xy(*q)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{stroke}" '
                          f'stroke-width="{width}"{extra}/>')

    def dot(self, p, r=3, fill="black"):
        x, y = self.xy(*p)
        self.items.append(f'<circle cx="{x}" cy="{y}" r="{r}" fill="{fill}"/>')

    def text(self, p, label, size=12, fill="black"):
        x, y = self.xy(*p)
        self.items.append(f'<text x="{x}" y="{y}" font-size="{size}" fill="{fill}" '
                          f'text-anchor="middle">{escape(str(label))}</text>')

    def rect(self, x0, y0, x1, y1, fill):
        (ax, ay), (bx, by) = self.xy(x0, y1), self.xy(x1, y0)
        self.items.append(f'<rect x="{ax}" y="{ay}" width="{round(bx - ax, 3)}" '
                          f'height="{round(by - ay, 3)}" fill="{fill}"/>')

    def render(self, title: str) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_SIZE} {_SIZE}" '
                f'width="{_SIZE}" height="{_SIZE}">')
        frame = (f'<rect x="{_PAD}" y="{_PAD}" width="{_SIZE - 2 * _PAD}" height="{_SIZE - 2 * _PAD}" '
                 f'fill="none" stroke="#999"/>')
        return "\n".join([head, f"<title>{escape(title)}</title>", frame, *self.items, "</svg>"]) + "\n"


def _label(alpha):
    return "(" + ",".join(str(a) for a in alpha) + ")"


def base2d_figure(base, mu_range=(-3.0, 3.0)):
    walls = list(base.walls)
    lo = (walls[0] if walls else 0.0) - 1.5
    hi = (walls[-1] if walls else 0.0) + 1.5
    canvas = _Canvas((lo, hi, mu_range[0], mu_range[1]))
    for s in walls:
        canvas.line((s, mu_range[0]), (s, mu_range[1]), stroke="#c0392b", dash="6,4")
        canvas.dot((s, 0.0), r=4, fill="#c0392b")
    edges = [lo] + walls + [hi]
    centres = [(a + b) / 2 for a, b in zip(edges, edges[1:])]
    for i, c in enumerate(centres):
        canvas.text((c, mu_range[1] * 0.8), f"U{i}")
    data = {"box": [lo, hi, mu_range[0], mu_range[1]], "walls": walls,
            "discriminant": [[s, 0.0] for s in walls],
            "chamber_label_positions": [[c, mu_range[1] * 0.8] for c in centres]}
    return canvas.render("base of the conic fibration"), data


def amoeba_figure(raster, curve=None, labeling=None, leg_length=None):
    canvas = _Canvas(raster.box)
    dx = (raster.xs[1] - raster.xs[0]) / 2
    dy = (raster.ys[1] - raster.ys[0]) / 2
    cells = []
    rows, cols = np.nonzero(raster.mask)
    for r, c in zip(rows.tolist(), cols.tolist()):
        x, y = float(raster.xs[c]), float(raster.ys[r])
        canvas.rect(x - dx, y - dy, x + dx, y + dy, "#7fa7d9")
        cells.append([x, y])
    data = {"box": list(raster.box), "pixel_half_size": [float(dx), float(dy)], "amoeba_pixels": cells}
    if curve is not None:
        length = leg_length if leg_length is not None else max(raster.box[1] - raster.box[0],
                                                               raster.box[3] - raster.box[2])
        segs = curve.segments(length)
        for p, q in segs:
            canvas.line(p, q, stroke="black", width=2)
        for v in curve.vertices.values():
            canvas.dot(tuple(map(float, v)))
        data["curve_segments"] = [[list(p), list(q)] for p, q in segs]
    if labeling is not None:
        chambers = []
        for comp in sorted(labeling.labels):
            p, alpha = labeling.representatives[comp], labeling.labels[comp]
            canvas.text(p, _label(alpha), fill="#1d3557")
            chambers.append({"label": list(alpha), "position": list(p)})
        data["chamber_labels"] = chambers
    return canvas.render("amoeba and tropical curve"), data


def subdivision_figure(S):
    pts = [p for p in S.points]
    if S.dim == 1:
        pts2 = [(p[0], 0) for p in pts]
    else:
        pts2 = pts
    xs = [p[0] for p in pts2]
    ys = [p[1] for p in pts2]
    box = (min(xs) - 1, max(xs) + 1, min(ys) - 1, max(ys) + 1)
    canvas = _Canvas(box)
    edges = []
    for i in range(len(S.cells)):
        cyc = S.cell_vertices(i)
        if S.dim == 1:
            cyc = [(p[0], 0) for p in cyc]
            pairs = [(cyc[0], cyc[1])]
        else:
            pairs = [(cyc[k], cyc[(k + 1) % len(cyc)]) for k in range(len(cyc))]
        for p, q in pairs:
            canvas.line(p, q)
            edges.append([list(p), list(q)])
    for p in pts2:
        canvas.dot(p)
    return canvas.render("regular subdivision"), {"box": list(box), "points": [list(p) for p in pts2],
                                                  "edges": edges}
