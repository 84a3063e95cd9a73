from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .decomposition import Constraints, Dataset, decompose, fit_linear


def _env_column(X):
    if X.shape[1] != 1:
        raise ValueError(
            f"expected a single environment column, got {X.shape[1]} features"
        )
    return X[:, 0]


class XPointRegressor(RegressorMixin, TransformerMixin, BaseEstimator):
    """Fit an action line and split it into utility and norm lines.

    ``fit`` regresses the action ``y`` on the single environment column of
    ``X`` and decomposes the line under the thresholds ``eps_u0`` (utility
    slope zero) and ``eps_n0`` (norm slope zero). ``predict`` returns the
    X-point action; ``transform`` returns per-row
    ``[a_u, b_u, a_n, b_n]``.

    Parameters
    ----------
    eps_u0 : float
        Environment at which the utility slope vanishes.
    eps_n0 : float
        Environment at which the norm slope vanishes.
    lam : float, default=1.0
        Positive value scale. It multiplies every slope and intercept but
        never moves the predicted action.
    """

    def __init__(self, eps_u0=0.0, eps_n0=1.0, lam=1.0):
        self.eps_u0 = eps_u0
        self.eps_n0 = eps_n0
        self.lam = lam

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=np.float64, ensure_min_samples=2)
        eps = _env_column(X)
        constraints = Constraints(self.eps_u0, self.eps_n0, self.lam)
        self.fit_ = fit_linear(Dataset.from_arrays(eps, y))
        self.decomposition_ = decompose(self.fit_, constraints)
        c = self.decomposition_.coefficients
        self.alpha_ = self.fit_.alpha
        self.beta_ = self.fit_.beta
        self.coef_ = np.array([c.kappa_u, c.lambda_u, c.kappa_n, c.lambda_n])
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "decomposition_")
        eps = _env_column(check_array(X, dtype=np.float64))
        return np.array([self.decomposition_.predicted_action(e) for e in eps])

    def transform(self, X):
        check_is_fitted(self, "decomposition_")
        eps = _env_column(check_array(X, dtype=np.float64))
        rows = []
        for e in eps:
            u, n = self.decomposition_.affine_at(e)
            rows.append((u.slope, u.intercept, n.slope, n.intercept))
        return np.array(rows, dtype=float).reshape(-1, 4)

    def get_feature_names_out(self, input_features=None):
        return np.array(["a_u", "b_u", "a_n", "b_n"], dtype=object)
