"""Input checks shared by the estimators and the command line."""
from __future__ import annotations

from numbers import Real

import numpy as np

from .exceptions import DimensionMismatch
from .laurent import LaurentPolynomial, parse_laurent


def check_positive(value, name: str) -> float:
    if not isinstance(value, Real) or not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def check_resolution(value) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 16:
        raise ValueError(f"resolution must be an integer >= 16, got {value!r}")
    return int(value)


def check_polynomial(f, dim: int, params=None) -> LaurentPolynomial:
    if isinstance(f, str):
        f = parse_laurent(f, dim, params)
    if not isinstance(f, LaurentPolynomial):
        raise TypeError("polynomial must be a string or a LaurentPolynomial")
    if f.dim != dim:
        raise DimensionMismatch(f"expected a polynomial in {dim} variables, got {f.dim}")
    if len(f) == 0:
        raise ValueError("polynomial must be nonzero")
    return f


def check_real_points(X, n_features: int) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != n_features:
        raise DimensionMismatch(f"expected an array of shape (n, {n_features}), got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("input contains non-finite values")
    return X


def check_complex_points(X, n_features: int) -> np.ndarray:
    """Like ``check_real_points`` but complex; scikit-learn's ``check_array`` rejects complex input."""
    X = np.asarray(X, dtype=complex)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != n_features:
        raise DimensionMismatch(f"expected an array of shape (n, {n_features}), got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("input contains non-finite values")
    return X
