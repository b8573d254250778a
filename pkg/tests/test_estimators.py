import numpy as np
import pytest
from sklearn.base import clone

from syzmirror.estimators import AmoebaChamberClassifier, SYZFibrationTransformer


@pytest.fixture(scope="module")
def classifier():
    return AmoebaChamberClassifier(box=(-4, 4, -4, 4), resolution=48).fit()


def test_classifier_params_and_clone(classifier):
    params = classifier.get_params()
    assert params["polynomial"] == "1+z1+z2" and params["resolution"] == 48
    twin = clone(classifier)
    assert not hasattr(twin, "classes_")
    assert twin.set_params(tol=1e-5).tol == 1e-5


def test_classifier_predicts_chambers(classifier):
    assert sorted(map(tuple, classifier.classes_)) == [(0, 0), (0, 1), (1, 0)]
    X = np.array([[-3.0, -3.0], [3.0, -1.0], [-1.0, 3.0], [0.0, -0.5]])
    labels = classifier.predict_label(X)
    assert [tuple(r) for r in labels[:3]] == [(0, 0), (1, 0), (0, 1)]
    assert classifier.predict(X)[3] == -1


def test_classifier_validation():
    with pytest.raises(ValueError):
        AmoebaChamberClassifier(resolution=4).fit()
    with pytest.raises(ValueError):
        AmoebaChamberClassifier(tol=-1).fit()
    with pytest.raises(ValueError):
        AmoebaChamberClassifier(box=(-4, 4, -4, 4), resolution=32).fit().predict(np.zeros((2, 3)))


def test_unfitted_raises():
    from sklearn.exceptions import NotFittedError
    with pytest.raises(NotFittedError):
        SYZFibrationTransformer().transform([[1, 1, 1]])


def test_fibration_transformer(rng):
    tr = SYZFibrationTransformer().fit()
    assert np.allclose(tr.base_.walls, [np.log(2), np.log(4)])
    z = rng.normal(size=5) + 1j * rng.normal(size=5) + 3
    x = rng.normal(size=5) + 1j * rng.normal(size=5)
    X = np.stack([x, (z - 2) * (z - 4) / x, z], axis=1)
    out = tr.fit_transform(X)
    assert out.shape == (5, 2)
    assert np.allclose(out[:, 0], np.log(np.abs(z)))
    assert np.allclose(out[:, 1], (np.abs(X[:, 0]) ** 2 - np.abs(X[:, 1]) ** 2) / 2)
    assert tr.on_hypersurface(X).all()
    assert set(tr.chamber(X)) <= {0, 1, 2}
    assert clone(tr).get_params() == tr.get_params()
