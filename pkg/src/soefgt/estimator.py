"""scikit-learn style wrapper around the fast Gauss transform."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from . import fgt
from ._validation import check_delta, check_positive_int
from .soe import SOEApprox


def _column(X, name):
    X = check_array(X, ensure_2d=False, dtype=np.float64, input_name=name)
    if X.ndim == 2:
        if X.shape[1] != 1:
            raise ValueError(f"{name} must have a single feature, got {X.shape[1]}")
        X = X[:, 0]
    return X


class FastGaussTransform(BaseEstimator):
    """Sum of Gaussians centred at the training points.

    ``fit(X, y)`` stores sources ``X`` with strengths ``y`` (ones when
    omitted); ``predict(T)`` returns
    ``sum_j y_j exp(-(T_i - X_j)**2 / (4 * delta))`` for every row of ``T``.

    Parameters
    ----------
    delta : float, default=1.0
        Kernel bandwidth parameter.
    n_e : int, default=6
        Number of folded complex modes of the kernel expansion; 3, 4, 5 and 6
        give roughly 4, 7, 9 and 11 correct digits.
    soe : SOEApprox, optional
        Explicit kernel expansion, overrides ``n_e``.
    precompute : bool, default=False
        Tabulate the gap exponentials of the training points so that
        :meth:`predict_training` can be repeated cheaply.

    Attributes
    ----------
    sources_ : ndarray of shape (n_samples,)
    strengths_ : ndarray of shape (n_samples,)
    plan_ : TransformPlan
        Sorted training geometry.
    n_features_in_ : int
    """

    def __init__(self, delta=1.0, n_e=6, soe: SOEApprox | None = None, precompute=False):
        self.delta = delta
        self.n_e = n_e
        self.soe = soe
        self.precompute = precompute

    def _check_params(self):
        check_delta(self.delta)
        check_positive_int(self.n_e, "n_e")

    def fit(self, X, y=None):
        self._check_params()
        x = _column(X, "X")
        a = np.ones_like(x) if y is None else _column(y, "y")
        if a.shape != x.shape:
            raise ValueError(f"y has {a.size} entries, X has {x.size}")
        req = fgt.TransformRequest(x, a, self.delta)
        self.sources_ = req.sources
        self.strengths_ = req.strengths
        self.plan_ = fgt.plan(req, self.soe, self.precompute, self.n_e)
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        """Potentials at the rows of ``X``."""
        check_is_fitted(self, "plan_")
        x = _column(X, "X")
        req = fgt.TransformRequest(self.sources_, self.strengths_, self.delta, x)
        p = fgt.plan(req, self.plan_.soe)
        return fgt.apply_general(p, req.strengths).potentials

    def predict_training(self, strengths=None):
        """Potentials at the training points, optionally with new strengths."""
        check_is_fitted(self, "plan_")
        a = self.strengths_ if strengths is None else _column(strengths, "strengths")
        return fgt.apply_same(self.plan_, a).potentials

    def fit_predict(self, X, y=None):
        return self.fit(X, y).predict_training()
