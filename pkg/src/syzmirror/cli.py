"""Command-line front end.

Exit codes: 0 success, 1 input or validation error, 2 a mathematical
property failed (the report is still written).
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .amoeba import amoeba_raster, chamber_labeling, default_box
from .checks import run_checks
from .exceptions import SYZError, UnresolvedComponents
from .fibration import ConicFibrationSpace, SYZBase2D, base_2d
from .laurent import LaurentPolynomial, as_lifting, log_lifting, newton_polytope, parse_laurent
from .subdivision import dual_tropical_curve, is_unimodular, regular_subdivision
from .svg import amoeba_figure, base2d_figure, subdivision_figure
from .toricfan import fan_from_subdivision, fan_report
from .transform import (
    AdmissiblePath2D,
    TropicalSection3D,
    intersection_number_2d,
    syz_transform_2d,
    syz_transform_3d,
    wall_values_from_path,
)


class InputError(Exception):
    """Unreadable or inconsistent command-line input."""


class MathFailure(Exception):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


@dataclass
class JobConfig:
    command: str
    inputs: dict
    tol: float = 1e-6
    gap: float = 1e-9
    step: float = 1e-4
    resolution: int = 64
    seed: int = 0
    out: str = "."
    fmt: str = "both"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("tol", "gap", "step"):
            if not getattr(self, name) > 0:
                raise InputError(f"--{name} must be positive")
        if self.resolution < 16:
            raise InputError("--resolution must be at least 16")


# ---- input helpers -------------------------------------------------------

def _read_text(arg: str) -> str:
    path = Path(arg)
    if path.is_file():
        return path.read_text()
    return arg


def _guess_dim(text: str) -> int:
    idx = [int(m) for m in re.findall(r"z(\d+)", text)]
    return max(idx) if idx else 1


def load_polynomial(arg: str, params: dict, dim: int | None = None) -> LaurentPolynomial:
    """A polynomial from an expression, a text file, or a JSON file."""
    text = _read_text(arg).strip()
    if text.startswith("{"):
        data = json.loads(text)
        if "terms" in data:
            return LaurentPolynomial.from_json(data)
        params = {**data.get("params", {}), **params}
        text = data["polynomial"]
        dim = dim or data.get("dim")
    return parse_laurent(text, dim or _guess_dim(text), params)


def load_lifting(arg: str | None, f: LaurentPolynomial, default: str = "zero") -> dict:
    """Heights for the subdivision.

    Without ``arg``: zero on every lattice point, or ``-log|c_a|`` on the
    exponents of ``f`` when ``default == "log"``. Given heights are completed
    by 0 on the remaining lattice points.
    """
    P = newton_polytope(f)
    if arg is None:
        if default == "log":
            return log_lifting(f)
        return {p: Fraction(0) for p in P.lattice_points}
    data = json.loads(_read_text(arg))
    given = as_lifting(data, P.lattice_points, f.dim)
    return {p: given.get(p, Fraction(0)) for p in P.lattice_points} | given


def _load_json(arg: str):
    return json.loads(_read_text(arg))


def _parse_params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise InputError(f"--param expects name=value, got {item!r}")
        name, value = item.split("=", 1)
        try:
            out[name.strip()] = Fraction(value.strip()) if "/" in value else float(value)
        except ValueError as exc:
            raise InputError(f"bad value for parameter {name!r}: {value!r}") from exc
    return out


# ---- output helpers ------------------------------------------------------

def _jsonify(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return _jsonify(obj.tolist())
    return obj


def write_atomic(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(obj) -> str:
    return json.dumps(_jsonify(obj), sort_keys=True, indent=2) + "\n"


def _emit(cfg: JobConfig, name: str, report: dict, figure=None) -> list:
    out = Path(cfg.out)
    report = dict(report)
    report["config"] = asdict(cfg)
    written = []
    if cfg.fmt in ("json", "both"):
        write_atomic(out / f"{name}.json", _dump(report))
        written.append(out / f"{name}.json")
    if figure is not None and cfg.fmt in ("svg", "both"):
        svg, data = figure
        write_atomic(out / f"{name}.svg", svg)
        write_atomic(out / f"{name}.svg.json", _dump({"figure": f"{name}.svg", "data": data, "seed": cfg.seed}))
        written += [out / f"{name}.svg", out / f"{name}.svg.json"]
    return written


# ---- commands ------------------------------------------------------------

def cmd_mirror(cfg: JobConfig):
    f = load_polynomial(cfg.inputs["polynomial"], cfg.params, cfg.inputs.get("dim"))
    h = load_lifting(cfg.inputs.get("lifting"), f)
    S = regular_subdivision(newton_polytope(f), h)
    fan = fan_from_subdivision(S)
    rep = fan_report(fan)
    try:
        unimodular = is_unimodular(S)
    except SYZError:
        unimodular = False
    P = S.polytope
    report = {
        "polynomial": f.to_string(),
        "newton_polytope": {"vertices": P.vertices, "lattice_points": P.lattice_points},
        "subdivision": S.to_json(),
        "unimodular": unimodular,
        "fan": {"rays": rep["rays"], "max_cones": rep["max_cones"]},
        "eta": rep["calabi_yau"],
        "smooth": rep["smooth"],
        "convex_support": rep["convex_support"],
        "seed": cfg.seed,
    }
    files = _emit(cfg, "mirror", report, subdivision_figure(S))
    if rep["calabi_yau"] is None or not rep["smooth"]:
        raise MathFailure("fan is not a smooth Calabi-Yau fan", report)
    return report, files


def cmd_base(cfg: JobConfig):
    mode = cfg.inputs["mode"]
    f = load_polynomial(cfg.inputs["polynomial"], cfg.params, 1 if mode == "2d" else 2)
    space = ConicFibrationSpace(f)
    if mode == "2d":
        moduli = cfg.inputs.get("root_moduli")
        base = base_2d(space, moduli, cfg.gap)
        report = base.to_json() | {"polynomial": f.to_string(), "root_moduli": list(base.root_moduli),
                                   "monodromy_convention": "counter-clockwise loop around both singular fibers",
                                   "seed": cfg.seed}
        return report, _emit(cfg, "base", report, base2d_figure(base))
    h = load_lifting(cfg.inputs.get("lifting"), f, default="log")
    curve = dual_tropical_curve(regular_subdivision(newton_polytope(f), h))
    raster = amoeba_raster(f, cfg.inputs.get("box") or default_box(curve), cfg.resolution, cfg.tol)
    try:
        labeling = chamber_labeling(raster, f)
    except UnresolvedComponents as exc:
        report = {"polynomial": f.to_json(), "error": str(exc), "seed": cfg.seed}
        _emit(cfg, "base", report)
        raise MathFailure(str(exc), report) from exc
    report = {
        "polynomial": f.to_json(),
        "lifting": {"(" + ",".join(map(str, p)) + ")": v for p, v in h.items()},
        "curve": curve.to_json(),
        "chambers": labeling.to_json()["chambers"],
        "raster": raster.to_json(),
        "seed": cfg.seed,
    }
    return report, _emit(cfg, "base", report, amoeba_figure(raster, curve, labeling))


def cmd_amoeba(cfg: JobConfig):
    f = load_polynomial(cfg.inputs["polynomial"], cfg.params, 2)
    h = load_lifting(cfg.inputs.get("lifting"), f, default="log")
    curve = dual_tropical_curve(regular_subdivision(newton_polytope(f), h))
    raster = amoeba_raster(f, cfg.inputs.get("box") or default_box(curve), cfg.resolution, cfg.tol)
    report = {"polynomial": f.to_string(), "raster": raster.to_json(), "seed": cfg.seed}
    labeling = None
    try:
        labeling = chamber_labeling(raster, f)
        report["chambers"] = labeling.to_json()["chambers"]
    except UnresolvedComponents as exc:
        report["chambers"] = None
        report["warning"] = str(exc)
    files = _emit(cfg, "amoeba", report, amoeba_figure(raster, curve, labeling))
    if cfg.fmt in ("json", "both"):
        write_atomic(Path(cfg.out) / "amoeba.pgm", raster.to_pgm())
        files.append(Path(cfg.out) / "amoeba.pgm")
    return report, files


def cmd_transform2d(cfg: JobConfig):
    section = _load_json(cfg.inputs["section"])
    base_rep = _load_json(cfg.inputs["base"])
    walls = tuple(float(w) for w in base_rep["walls"])
    base = SYZBase2D(walls, tuple(float(np.exp(w)) for w in walls))
    report = {"seed": cfg.seed}
    if "path" in section:
        cut = tuple(section.get("cut") or base_rep.get("root_moduli") or base.root_moduli)
        path = AdmissiblePath2D([complex(x, y) for x, y in section["path"]], cut)
        values = wall_values_from_path(path, base.root_moduli)
        bundle = syz_transform_2d(values, base)
        inter = intersection_number_2d(path)
        report["intersection_number"] = inter
        report["degree_equals_intersection"] = bundle.invariants.get("degree") == inter
    elif "wall_values" in section:
        bundle = syz_transform_2d(section["wall_values"], base)
    else:
        raise InputError("section needs 'path' or 'wall_values'")
    report["bundle"] = bundle.to_json()
    report["degree"] = bundle.invariants.get("degree")
    files = _emit(cfg, "bundle2d", report)
    if report.get("degree_equals_intersection") is False:
        raise MathFailure("degree differs from the intersection number", report)
    return report, files


def _curve_from_base_report(base_rep):
    f = LaurentPolynomial.from_json(base_rep["polynomial"])
    h = as_lifting(base_rep["lifting"], newton_polytope(f).lattice_points, f.dim)
    return dual_tropical_curve(regular_subdivision(newton_polytope(f), h))


def cmd_transform3d(cfg: JobConfig):
    section = TropicalSection3D.from_json(_load_json(cfg.inputs["section"]))
    curve = _curve_from_base_report(_load_json(cfg.inputs["base"]))
    bundle = syz_transform_3d(section, curve)
    report = {"bundle": bundle.to_json(), "section": section.to_json(), "seed": cfg.seed}
    return report, _emit(cfg, "bundle3d", report)


def cmd_check(cfg: JobConfig):
    results = run_checks(cfg.seed, cfg.tol, cfg.step)
    report = {"checks": results, "passed": all(r["passed"] for r in results.values()), "seed": cfg.seed}
    files = _emit(cfg, "check", report)
    if not report["passed"]:
        raise MathFailure("invariant suite failed", report)
    return report, files


COMMANDS = {
    "mirror": cmd_mirror,
    "base": cmd_base,
    "amoeba": cmd_amoeba,
    "transform2d": cmd_transform2d,
    "transform3d": cmd_transform3d,
    "check": cmd_check,
}


def _floats(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-6, help="amoeba membership tolerance")
    common.add_argument("--gap", type=float, default=1e-9, help="relative gap between root moduli")
    common.add_argument("--step", type=float, default=1e-4, help="finite-difference step")
    common.add_argument("--resolution", type=int, default=64, help="raster pixels per axis")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--format", dest="fmt", choices=["json", "svg", "both"], default="both")
    common.add_argument("--param", action="append", metavar="NAME=VALUE",
                        help="numeric value for a symbol in the polynomial")

    parser = argparse.ArgumentParser(prog="syzmirror", description="Toric mirrors and SYZ transforms.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mirror", parents=[common], help="fan of the mirror toric variety")
    p.add_argument("polynomial", help="expression, text file or JSON file")
    p.add_argument("--lifting", help="JSON mapping or file, e.g. '{\"(0,0)\": -1}'")
    p.add_argument("--dim", type=int)

    p = sub.add_parser("base", parents=[common], help="base of the SYZ fibration")
    p.add_argument("polynomial")
    p.add_argument("--mode", choices=["2d", "3d"], default="2d")
    p.add_argument("--root-moduli", type=_floats, dest="root_moduli")
    p.add_argument("--lifting")
    p.add_argument("--box", type=_floats)

    p = sub.add_parser("amoeba", parents=[common], help="amoeba raster and chamber labels")
    p.add_argument("polynomial")
    p.add_argument("--lifting")
    p.add_argument("--box", type=_floats)

    for name in ("transform2d", "transform3d"):
        p = sub.add_parser(name, parents=[common], help=f"{name[-2:]} SYZ transform of a section")
        p.add_argument("section", help="section JSON (file or inline)")
        p.add_argument("--base", required=True, help="base report JSON written by 'base'")

    sub.add_parser("check", parents=[common], help="run the invariant suite")
    return parser


def _inputs(args) -> dict:
    keys = ("polynomial", "lifting", "dim", "mode", "root_moduli", "box", "section", "base")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = JobConfig(args.command, _inputs(args), args.tol, args.gap, args.step, args.resolution,
                        args.seed, args.out, args.fmt, _parse_params(args.param))
        if "box" in cfg.inputs and len(cfg.inputs["box"]) != 4:
            raise InputError("--box needs xmin,xmax,ymin,ymax")
        report, files = COMMANDS[args.command](cfg)
    except MathFailure as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 2
    except (InputError, SYZError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in files:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
