"""Numerical amoebas of plane curves and the labeling of their complements.

A base point ``p`` lies on the amoeba of ``f`` when ``f`` vanishes somewhere
on the torus ``|z_j| = exp(p_j)``. We search the angle torus on a grid and
refine the best candidates with damped Gauss-Newton steps; ``|f|`` is always
measured relative to the largest term modulus at ``p``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from . import _geometry as geo
from .exceptions import DimensionMismatch, UnresolvedComponents
from .laurent import LaurentPolynomial, log_lifting, newton_polytope

__all__ = [
    "AmoebaRaster",
    "ChamberLabeling",
    "amoeba_residual",
    "amoeba_membership",
    "amoeba_raster",
    "chamber_labeling",
    "tube_distance",
    "order_map",
    "default_box",
]

_CHUNK = 256


def _arrays(f: LaurentPolynomial):
    exps = f.exponent_array().astype(float)
    coeffs = f.coefficient_array()
    return exps, np.log(np.abs(coeffs)), np.angle(coeffs)


def amoeba_residual(f: LaurentPolynomial, points, theta_resolution: int = 64,
                    refine_steps: int = 20, starts: int = 3) -> np.ndarray:
    """``min_theta |f(exp(p + i theta))| / max_a |c_a exp(<a, p>)|`` for each point.

    The minimum is an upper estimate: a ``theta_resolution``-per-axis grid
    search followed by ``refine_steps`` damped Gauss-Newton steps from the
    ``starts`` best grid nodes.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != f.dim:
        raise DimensionMismatch(f"points must have {f.dim} coordinates")
    exps, logc, argc = _arrays(f)
    if len(logc) == 1:
        return np.ones(len(pts))
    axes = [np.linspace(0.0, 2 * np.pi, theta_resolution, endpoint=False)] * f.dim
    thetas = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
    phase = np.exp(1j * (argc[None, :] + thetas @ exps.T))
    out = np.empty(len(pts))
    for lo in range(0, len(pts), _CHUNK):
        chunk = pts[lo:lo + _CHUNK]
        logmod = logc[None, :] + chunk @ exps.T
        r = np.exp(logmod - logmod.max(axis=1, keepdims=True))
        vals = np.abs(r @ phase.T)
        k = min(starts, vals.shape[1])
        best = np.argpartition(vals, k - 1, axis=1)[:, :k]
        theta0 = thetas[best].reshape(-1, f.dim)
        rr = np.repeat(r, k, axis=0)
        res = _refine(theta0, rr, exps, argc, refine_steps)
        out[lo:lo + _CHUNK] = np.minimum(res.reshape(-1, k).min(axis=1), vals.min(axis=1))
    return out


def _residual(theta, rr, exps, argc):
    terms = rr * np.exp(1j * (argc[None, :] + theta @ exps.T))
    return terms.sum(axis=1), terms


def _refine(theta, rr, exps, argc, steps):
    g, terms = _residual(theta, rr, exps, argc)
    best = np.abs(g)
    for _ in range(steps):
        dg = (1j * terms) @ exps                         # (n, d) complex partials
        jac = np.stack([dg.real, dg.imag], axis=1)       # (n, 2, d)
        resid = np.stack([g.real, g.imag], axis=1)       # (n, 2)
        jjt = jac @ np.swapaxes(jac, 1, 2)
        lam = 1e-12 * np.trace(jjt, axis1=1, axis2=2) + 1e-300
        jjt = jjt + lam[:, None, None] * np.eye(2)
        y = np.linalg.solve(jjt, resid[..., None])[..., 0]
        delta = -(np.swapaxes(jac, 1, 2) @ y[..., None])[..., 0]
        chosen = theta
        chosen_g, chosen_terms = g, terms
        chosen_abs = np.abs(g)
        for s in (1.0, 0.5, 0.25, 0.125):
            cand = theta + s * delta
            cg, cterms = _residual(cand, rr, exps, argc)
            better = np.abs(cg) < chosen_abs
            chosen = np.where(better[:, None], cand, chosen)
            chosen_g = np.where(better, cg, chosen_g)
            chosen_terms = np.where(better[:, None], cterms, chosen_terms)
            chosen_abs = np.where(better, np.abs(cg), chosen_abs)
        theta, g, terms = chosen, chosen_g, chosen_terms
        best = np.minimum(best, chosen_abs)
    return best


def amoeba_membership(f: LaurentPolynomial, p, tol: float = 1e-6, theta_resolution: int = 64,
                      refine_steps: int = 20) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return bool(amoeba_residual(f, [p], theta_resolution, refine_steps)[0] < tol)


def default_box(curve, margin: float = 4.0):
    xs = [float(v[0]) for v in curve.vertices.values()]
    ys = [float(v[1]) for v in curve.vertices.values()]
    return (min(xs) - margin, max(xs) + margin, min(ys) - margin, max(ys) + margin)


@dataclass
class AmoebaRaster:
    """Pixel raster of an amoeba over ``box = (xmin, xmax, ymin, ymax)``.

    ``mask[row, col]`` refers to the pixel centred at ``(xs[col], ys[row])``.
    A pixel is marked when its closed cell may meet the amoeba: it is neither
    certified empty by a single dominating monomial nor by the residual at its
    centre exceeding ``cell_tolerance``.
    """

    box: tuple
    resolution: int
    xs: np.ndarray
    ys: np.ndarray
    mask: np.ndarray
    tol: float
    cell_tolerance: float

    def points(self) -> np.ndarray:
        gx, gy = np.meshgrid(self.xs, self.ys)
        return np.stack([gx.ravel(), gy.ravel()], axis=1)

    def complement_components(self):
        """4-connected components of the unmarked pixels: ``(labels, count)``."""
        labels, count = ndimage.label(~self.mask, structure=ndimage.generate_binary_structure(2, 1))
        return labels, int(count)

    def to_pgm(self) -> str:
        """Plain grey-map text; amoeba pixels black (0), top row = largest y."""
        rows = ["P2", f"{len(self.xs)} {len(self.ys)}", "1"]
        for row in self.mask[::-1]:
            rows.append(" ".join("0" if m else "1" for m in row))
        return "\n".join(rows) + "\n"

    def to_json(self) -> dict:
        return {
            "box": [float(b) for b in self.box],
            "resolution": self.resolution,
            "tol": self.tol,
            "cell_tolerance": self.cell_tolerance,
            "xs": [float(x) for x in self.xs],
            "ys": [float(y) for y in self.ys],
            "mask": ["".join("1" if m else "0" for m in row) for row in self.mask],
        }


def _dominance_certified(f, pts, half):
    exps, logc, _ = _arrays(f)
    logmod = logc[None, :] + pts @ exps.T
    certified = np.zeros(len(pts), dtype=bool)
    for a in range(len(logc)):
        diff = exps - exps[a]
        slack = np.abs(diff) @ np.asarray(half)
        ratio = logmod - logmod[:, [a]] + slack[None, :]
        ratio[:, a] = -np.inf
        certified |= np.exp(ratio).sum(axis=1) < 1.0
    return certified


def amoeba_raster(f: LaurentPolynomial, box=None, resolution: int = 64, tol: float = 1e-6,
                  curve=None, margin: float = 4.0, theta_resolution: int = 64) -> AmoebaRaster:
    """Raster of the amoeba of a two-variable ``f``.

    Without ``box`` the bounding box of the dual curve's vertices (``curve``
    or the zero-lifting curve of ``f``) padded by ``margin`` is used.
    """
    if f.dim != 2:
        raise DimensionMismatch("amoeba rasters are built for two-variable polynomials")
    if resolution < 16:
        raise ValueError("resolution must be at least 16")
    if box is None:
        if curve is None:
            from .subdivision import dual_tropical_curve, regular_subdivision

            curve = dual_tropical_curve(regular_subdivision(newton_polytope(f), log_lifting(f)))
        box = default_box(curve, margin)
    xmin, xmax, ymin, ymax = map(float, box)
    if not (xmin < xmax and ymin < ymax):
        raise ValueError("box must be nonempty")
    xs = np.linspace(xmin, xmax, resolution)
    ys = np.linspace(ymin, ymax, resolution)
    half = ((xmax - xmin) / (resolution - 1) / 2, (ymax - ymin) / (resolution - 1) / 2)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)

    exps = f.exponent_array()
    centre = np.round((exps.min(axis=0) + exps.max(axis=0)) / 2)
    spread = float((np.abs(exps - centre) @ np.asarray(half)).max())
    cell_tol = len(f) * np.expm1(spread) * np.exp(spread)
    threshold = max(tol, cell_tol)

    marked = np.zeros(len(pts), dtype=bool)
    open_ = ~_dominance_certified(f, pts, half)
    if open_.any() and len(f) > 1:
        resid = amoeba_residual(f, pts[open_], theta_resolution)
        marked[open_] = resid < threshold
    return AmoebaRaster((xmin, xmax, ymin, ymax), resolution, xs, ys,
                        marked.reshape(resolution, resolution), tol, float(cell_tol))


@dataclass
class ChamberLabeling:
    labels: dict
    representatives: dict
    component_map: np.ndarray = field(repr=False)
    unbounded: frozenset = frozenset()

    def label_at(self, raster: AmoebaRaster, p):
        """Label of the complement component whose pixel is nearest to ``p``."""
        col = int(np.abs(raster.xs - p[0]).argmin())
        row = int(np.abs(raster.ys - p[1]).argmin())
        comp = int(self.component_map[row, col])
        return self.labels.get(comp)

    def to_json(self) -> dict:
        return {
            "chambers": [
                {"component": c, "label": list(self.labels[c]),
                 "representative": [float(x) for x in self.representatives[c]],
                 "unbounded": c in self.unbounded}
                for c in sorted(self.labels)
            ]
        }


def chamber_labeling(raster: AmoebaRaster, f: LaurentPolynomial) -> ChamberLabeling:
    """Label each complement component by its dominant monomial.

    The representative of a component is its pixel where the largest term
    beats the sum of all others by the widest (logarithmic) margin.
    """
    labels_map, count = raster.complement_components()
    expected = len(newton_polytope(f).lattice_points)
    if count != expected:
        raise UnresolvedComponents(
            f"{count} complement components but {expected} lattice points; raise the resolution"
        )
    exps, logc, _ = _arrays(f)
    pts = raster.points()
    logmod = logc[None, :] + pts @ exps.T
    top = logmod.argmax(axis=1)
    srt = np.sort(logmod, axis=1)
    if logmod.shape[1] > 1:
        rest = np.log(np.exp(logmod - srt[:, [-1]]).sum(axis=1) - 1.0 + 1e-300) + srt[:, -1]
        margin = srt[:, -1] - rest
    else:
        margin = np.zeros(len(pts))
    flat = labels_map.ravel()
    border = set(np.unique(np.concatenate([labels_map[0], labels_map[-1], labels_map[:, 0], labels_map[:, -1]])))
    labels, reps = {}, {}
    for comp in range(1, count + 1):
        idx = np.flatnonzero(flat == comp)
        best = idx[margin[idx].argmax()]
        labels[comp] = tuple(int(a) for a in exps[top[best]])
        reps[comp] = tuple(float(x) for x in pts[best])
    if len(set(labels.values())) != count:
        raise UnresolvedComponents(f"labels are not distinct: {sorted(labels.values())}")
    return ChamberLabeling(labels, reps, labels_map, frozenset(int(b) for b in border if b))


def tube_distance(curve, p) -> float:
    """Euclidean distance from ``p`` to the dual tropical curve."""
    if len(p) != 2:
        raise DimensionMismatch("tube distance is defined in the plane")
    dists = [geo.point_segment_distance(p, e.start, e.end) for e in curve.bounded_edges]
    dists += [geo.point_ray_distance(p, leg.base, leg.direction) for leg in curve.legs]
    if not dists:
        dists = [geo.point_segment_distance(p, v, v) for v in curve.vertices.values()]
    return min(dists)


def order_map(f: LaurentPolynomial, p, n: int = 128) -> np.ndarray:
    """Gradient of the Ronkin function at ``p`` by the trapezoid rule.

    On a complement component this is the integer vector labeling it; it is
    an independent check of the dominant-monomial labels.
    """
    exps = f.exponent_array().astype(float)
    coeffs = f.coefficient_array()
    t = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    axes = np.meshgrid(*([t] * f.dim), indexing="ij")
    theta = np.stack([a.ravel() for a in axes], axis=1)
    logz = np.asarray(p, dtype=float)[None, :] + 1j * theta
    logmod = np.log(np.abs(coeffs)) + np.asarray(p, dtype=float) @ exps.T
    scale = logmod.max()
    terms = coeffs[None, :] * np.exp(logz @ exps.T - scale)
    fz = terms.sum(axis=1)
    return np.array([np.mean((terms @ exps[:, j]) / fz).real for j in range(f.dim)])
