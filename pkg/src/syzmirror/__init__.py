"""Toric mirror construction, SYZ bases and semi-flat transforms for conic fibrations ``xy = f(z)``."""

__version__ = "0.1.0"

from .laurent import LaurentPolynomial, TropicalFunction, newton_polytope, parse_laurent, tropicalize
from .subdivision import (
    DualTropicalCurve,
    LatticePolytope,
    RegularSubdivision,
    dual_tropical_curve,
    is_unimodular,
    regular_subdivision,
)
from .toricfan import Cone, Fan, calabi_yau_certificate, fan_from_subdivision, fan_report
from .amoeba import amoeba_membership, amoeba_raster, chamber_labeling, tube_distance
from .fibration import ConicFibrationSpace, base_2d, base_3d, monodromy_2d, syz_fibration_2d
from .gluing import ChartGluing, GluingUnit, compose, verify_cocycle, wall_crossing_2d, wall_crossing_3d
from .transform import (
    AdmissiblePath2D,
    NumericSection,
    TropicalSection3D,
    curvature02_residual,
    syz_transform_2d,
    syz_transform_3d,
)
from .estimators import AmoebaChamberClassifier, SYZFibrationTransformer

__all__ = [
    "LaurentPolynomial", "TropicalFunction", "newton_polytope", "parse_laurent", "tropicalize",
    "DualTropicalCurve", "LatticePolytope", "RegularSubdivision", "dual_tropical_curve",
    "is_unimodular", "regular_subdivision",
    "Cone", "Fan", "calabi_yau_certificate", "fan_from_subdivision", "fan_report",
    "amoeba_membership", "amoeba_raster", "chamber_labeling", "tube_distance",
    "ConicFibrationSpace", "base_2d", "base_3d", "monodromy_2d", "syz_fibration_2d",
    "ChartGluing", "GluingUnit", "compose", "verify_cocycle", "wall_crossing_2d", "wall_crossing_3d",
    "AdmissiblePath2D", "NumericSection", "TropicalSection3D", "curvature02_residual",
    "syz_transform_2d", "syz_transform_3d",
    "AmoebaChamberClassifier", "SYZFibrationTransformer",
]
