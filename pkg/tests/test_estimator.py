import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from soefgt import FastGaussTransform, TransformRequest, direct


def test_params_roundtrip():
    est = FastGaussTransform(delta=0.2, n_e=4)
    assert est.get_params() == {"delta": 0.2, "n_e": 4, "precompute": False, "soe": None}
    c = clone(est).set_params(n_e=5)
    assert c.n_e == 5 and est.n_e == 4


def test_fit_predict_matches_direct(rng):
    X = rng.random((300, 1))
    y = rng.standard_normal(300)
    T = rng.random(50)
    est = FastGaussTransform(delta=0.05).fit(X, y)
    assert est.n_features_in_ == 1
    ref = direct(TransformRequest(X[:, 0], y, 0.05, T)).potentials
    np.testing.assert_allclose(est.predict(T.reshape(-1, 1)), ref, atol=1e-8)
    np.testing.assert_allclose(est.predict(T), ref, atol=1e-8)


def test_training_potentials(rng):
    X = rng.random(200)
    est = FastGaussTransform(precompute=True)
    u = est.fit_predict(X)
    np.testing.assert_allclose(u, est.predict(X), atol=1e-11)
    np.testing.assert_allclose(est.predict_training(2 * np.ones(200)), 2 * u, rtol=1e-14)


def test_validation():
    with pytest.raises(NotFittedError):
        FastGaussTransform().predict([0.0])
    with pytest.raises(ValueError):
        FastGaussTransform().fit(np.zeros((3, 2)))
    with pytest.raises(ValueError):
        FastGaussTransform(delta=-1).fit([0.0])
    with pytest.raises(ValueError):
        FastGaussTransform().fit([0.0, 1.0], [1.0])
    with pytest.raises(ValueError):
        FastGaussTransform().fit([0.0, np.nan])
