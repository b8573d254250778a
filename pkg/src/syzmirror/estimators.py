"""Scikit-learn style wrappers around the amoeba base and the 2d fibration."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import (
    check_complex_points,
    check_polynomial,
    check_positive,
    check_real_points,
    check_resolution,
)
from .amoeba import amoeba_raster, amoeba_residual, chamber_labeling, order_map
from .fibration import ConicFibrationSpace, base_2d, on_hypersurface, syz_fibration_2d


class AmoebaChamberClassifier(ClassifierMixin, BaseEstimator):
    """Assign base points of ``R^2`` to the amoeba chambers of a two-variable polynomial.

    ``fit`` ignores its data: the model is the polynomial. ``predict`` returns
    the row of ``classes_`` (the chamber's lattice label) or ``-1`` on the amoeba.
    """

    def __init__(self, polynomial="1+z1+z2", params=None, box=None, resolution=64, tol=1e-6):
        self.polynomial = polynomial
        self.params = params
        self.box = box
        self.resolution = resolution
        self.tol = tol

    def fit(self, X=None, y=None):
        self.polynomial_ = check_polynomial(self.polynomial, 2, self.params)
        tol = check_positive(self.tol, "tol")
        res = check_resolution(self.resolution)
        self.raster_ = amoeba_raster(self.polynomial_, self.box, res, tol)
        self.labeling_ = chamber_labeling(self.raster_, self.polynomial_)
        self.classes_ = np.array(sorted(self.labeling_.labels.values()), dtype=int)
        return self

    def predict(self, X):
        check_is_fitted(self, "classes_")
        X = check_real_points(X, 2)
        on_amoeba = amoeba_residual(self.polynomial_, X) < self.tol
        index = {tuple(c): i for i, c in enumerate(self.classes_)}
        out = np.full(len(X), -1, dtype=int)
        for k, p in enumerate(X):
            if not on_amoeba[k]:
                label = tuple(int(v) for v in np.rint(order_map(self.polynomial_, p, n=64)))
                out[k] = index.get(label, -1)
        return out

    def predict_label(self, X):
        """Lattice label per point; rows of ``-1`` mark amoeba points."""
        idx = self.predict(X)
        labels = self.classes_[np.clip(idx, 0, None)].copy()
        labels[idx < 0] = -1
        return labels


class SYZFibrationTransformer(TransformerMixin, BaseEstimator):
    """``(x, y, z) -> (log|z|, (|x|^2 - |y|^2) / 2)`` on ``xy = f(z)``."""

    def __init__(self, polynomial="(z-2)(z-4)", params=None, tol=1e-8):
        self.polynomial = polynomial
        self.params = params
        self.tol = tol

    def fit(self, X=None, y=None):
        self.space_ = ConicFibrationSpace(check_polynomial(self.polynomial, 1, self.params))
        check_positive(self.tol, "tol")
        self.base_ = base_2d(self.space_)
        self.n_features_in_ = 3
        return self

    def transform(self, X):
        check_is_fitted(self, "space_")
        X = check_complex_points(X, 3)
        return np.array([syz_fibration_2d(self.space_, p, self.tol) for p in X], dtype=float)

    def on_hypersurface(self, X):
        check_is_fitted(self, "space_")
        X = check_complex_points(X, 3)
        return np.array([on_hypersurface(self.space_, p, self.tol) for p in X])

    def chamber(self, X):
        """Index of the base chamber containing each image point."""
        return np.array([self.base_.chamber_of(s) for s, _ in self.transform(X)])


__all__ = ["AmoebaChamberClassifier", "SYZFibrationTransformer"]
