"""Invariant suite run by ``syzmirror check``."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .amoeba import amoeba_residual, tube_distance
from .fibration import (
    ConicFibrationSpace,
    base_2d,
    circle_action,
    fiber_lagrangian_residual,
    hamiltonian_residual,
    monodromy_2d,
    syz_fibration_2d,
)
from .gluing import GluingUnit, toric_identification, verify_cocycle, wall_crossing_3d
from .laurent import newton_polytope, parse_laurent
from .subdivision import dual_tropical_curve, regular_subdivision
from .toricfan import fan_from_subdivision, fan_report
from .transform import (
    NumericSection,
    TropicalSection3D,
    curvature02_residual,
    intersection_number_2d,
    random_admissible_path,
    spiral_path,
    syz_transform_2d,
    syz_transform_3d,
    wall_values_from_path,
    winding_degree,
)


def _kp2():
    f = parse_laurent("t + z1 + z2 + 1/(z1*z2)", 2, {"t": 1})
    P = newton_polytope(f)
    h = {p: (-1 if p == (0, 0) else 0) for p in P.lattice_points}
    return regular_subdivision(P, h)


def check_fans(rng, cfg):
    report = fan_report(fan_from_subdivision(_kp2()))
    ok = (sorted(map(tuple, report["rays"])) == [(-1, -1, 1), (0, 0, 1), (0, 1, 1), (1, 0, 1)]
          and report["calabi_yau"] == [0, 0, 1] and report["smooth"] and report["convex_support"])
    return ok, report


def check_unit_algebra(rng, cfg):
    for _ in range(100):
        a = GluingUnit(Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 9))), *rng.integers(-4, 5, 2),
                       tuple(rng.integers(-3, 4, 2)))
        b = GluingUnit(Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 9))), *rng.integers(-4, 5, 2),
                       tuple(rng.integers(-3, 4, 2)))
        p = a * b
        if (p.w_exp, p.opw_exp) != (a.w_exp + b.w_exp, a.opw_exp + b.opw_exp) or not (p / b == a):
            return False, {"a": a.to_json(), "b": b.to_json()}
    ident = GluingUnit.from_factors(w_exp=1, opw_inv_exp=1) == GluingUnit(1, 0, 1)
    return ident, {"pairs": 100, "w(1+1/w) == 1+w": ident}


def check_cocycles(rng, cfg):
    curve = dual_tropical_curve(_kp2())
    bad = []
    for cyc in curve.vertex_cycles().values():
        loop = [wall_crossing_3d(cyc[i], cyc[(i + 1) % len(cyc)], curve) for i in range(len(cyc))]
        if not verify_cocycle(loop):
            bad.append([list(c) for c in cyc])
    labels = curve.labels
    ids = all(toric_identification(a).verify(b) for a in labels for b in labels)
    return not bad and ids, {"failed_loops": bad, "toric_identification": ids}


def check_degree_identity(rng, cfg):
    base = base_2d(ConicFibrationSpace(parse_laurent("(z-2)(z-4)", 1)))
    mismatches = []
    for k in range(25):
        path = random_admissible_path(rng, (2.0, 4.0))
        deg = syz_transform_2d(wall_values_from_path(path), base).invariants["degree"]
        if deg != intersection_number_2d(path):
            mismatches.append(k)
    spirals = {k: winding_degree(spiral_path(k)) for k in range(-2, 3)}
    ok = not mismatches and all(v == k for k, v in spirals.items()) and winding_degree([1, 2, 3]) == 0
    return ok, {"mismatched_paths": mismatches, "spiral_degrees": {str(k): v for k, v in spirals.items()}}


def check_zero_section(rng, cfg):
    curve = dual_tropical_curve(_kp2())
    bundle = syz_transform_3d(TropicalSection3D.zero(curve), curve)
    s1 = TropicalSection3D.constant_slope(curve, (1, 0))
    s2 = TropicalSection3D.constant_slope(curve, (0, 1))
    b1, b2, b12 = (syz_transform_3d(s, curve).bundle for s in (s1, s2, s1 + s2))
    tensor = all(b12.transition(*e) == b1.transition(*e) * b2.transition(*e) for e in b12.edges)
    return bundle.label == "structure sheaf" and bundle.bundle.is_trivial and tensor, \
        {"label": bundle.label, "tensor": tensor}


def check_curvature(rng, cfg):
    h = cfg["step"]
    worst = 0.0
    for _ in range(5):
        c = rng.normal(size=6)
        sec = NumericSection(2, lambda x, c=c: np.array([
            2 * c[0] * x[0] + c[2] * x[1] + 3 * c[3] * x[0] ** 2 + 2 * c[4] * x[0] * x[1] + c[5] * x[1] ** 2,
            2 * c[1] * x[1] + c[2] * x[0] + c[4] * x[0] ** 2 + 2 * c[5] * x[0] * x[1]]))
        worst = max(worst, curvature02_residual(sec, h=h))
    rot = curvature02_residual(NumericSection(2, lambda x: np.array([x[1], -x[0]])), h=h)
    return worst < 1e-5 and abs(rot - 2) < 1e-6, {"gradient_residual": worst, "rotation_residual": rot}


def check_amoeba(rng, cfg):
    f = parse_laurent("1+z1+z2", 2)
    curve = dual_tropical_curve(regular_subdivision(newton_polytope(f)))
    pts = rng.uniform(-4, 4, size=(200, 2))
    res = amoeba_residual(f, pts)
    far = np.array([tube_distance(curve, p) > 1 for p in pts])
    monotone = all((r < 1e-8) <= (r < 1e-6) for r in res)
    band = not np.any(far & (res < cfg["tol"]))
    return monotone and band, {"samples": len(pts), "monotone": monotone, "tropical_band": band}


def check_fibration(rng, cfg):
    space = ConicFibrationSpace(parse_laurent("(z-2)(z-4)", 1))
    worst_inv = worst_ham = worst_lag = 0.0
    for _ in range(20):
        z = complex(*rng.normal(size=2)) + 3
        x = complex(*rng.normal(size=2))
        p = (x, space.f(z) / x, z)
        base = np.array(syz_fibration_2d(space, p))
        for theta in rng.uniform(0, 2 * np.pi, 3):
            worst_inv = max(worst_inv, float(np.abs(base - syz_fibration_2d(space, circle_action(p, theta))).max()))
        worst_ham = max(worst_ham, hamiltonian_residual(space, p))
        worst_lag = max(worst_lag, fiber_lagrangian_residual(space, p))
    ok = worst_inv < 1e-12 and worst_ham < 1e-8 and worst_lag < 1e-8 and monodromy_2d().tolist() == [[1, 1], [0, 1]]
    return ok, {"s1_invariance": worst_inv, "hamiltonian": worst_ham, "lagrangian": worst_lag}


CHECKS = {
    "fan_certificates": check_fans,
    "unit_algebra": check_unit_algebra,
    "cocycles": check_cocycles,
    "degree_identity": check_degree_identity,
    "zero_section": check_zero_section,
    "curvature": check_curvature,
    "amoeba": check_amoeba,
    "fibration": check_fibration,
}


def run_checks(seed: int = 0, tol: float = 1e-6, step: float = 1e-4) -> dict:
    cfg = {"tol": tol, "step": step}
    out = {}
    for name, fn in CHECKS.items():
        rng = np.random.default_rng([seed, len(out)])
        ok, detail = fn(rng, cfg)
        out[name] = {"passed": bool(ok), "detail": detail}
    return out
