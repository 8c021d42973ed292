"""Binary usefulness classifiers with a shared sklearn-style interface.

Class order is always (not-useful, useful) = (0, 1). A probability of exactly
0.5 predicts not-useful.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.ensemble import RandomForestClassifier
from sklearn.utils.validation import check_array, check_is_fitted

from ..exceptions import SingleClassError

CLASSES = np.array([0, 1])


def _check_xy(X, y, accept_sparse=True):
    X = check_array(X, accept_sparse="csr" if accept_sparse else False, dtype=float)
    y = np.asarray(y, dtype=int).ravel()
    if len(y) != X.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but y has {len(y)} labels")
    if not np.isin(y, CLASSES).all():
        raise ValueError("labels must be 0 (not-useful) or 1 (useful)")
    return X, y


def _require_both_classes(y) -> None:
    if len(np.unique(y)) < 2:
        raise SingleClassError(f"training labels contain a single class ({int(y[0]) if len(y) else 'none'})")


class _Binary(ClassifierMixin, BaseEstimator):
    kind = ""

    def _check_input(self, X, accept_sparse=True):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X, accept_sparse="csr" if accept_sparse else False, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, model was trained on {self.n_features_in_}")
        return X

    def predict_proba(self, X) -> np.ndarray:
        p = np.clip(self.predict_useful(X), 0.0, 1.0)
        return np.column_stack([1.0 - p, p])

    def predict(self, X) -> np.ndarray:
        return (self.predict_useful(X) > 0.5).astype(int)


class LogisticRegression(_Binary):
    """L2-regularized logistic regression fit by full-batch gradient descent.

    Minimizes ``sum_i nll_i + l2/2 * |w|^2`` (the intercept is not penalized).
    Steps use the Barzilai-Borwein length, shrunk by Armijo backtracking until
    the objective decreases sufficiently, so every iteration is monotone.
    Converged when the gradient max-norm falls below ``tol``.
    """

    kind = "logreg"

    def __init__(self, l2: float = 1.0, max_iter: int = 1000, tol: float = 1e-6, fit_intercept: bool = True):
        self.l2 = l2
        self.max_iter = max_iter
        self.tol = tol
        self.fit_intercept = fit_intercept

    def _objective(self, X, y, theta):
        w, b = theta[:-1], theta[-1]
        z = X @ w + b
        # log(1 + e^z) - y z, evaluated stably
        loss = float(np.sum(np.logaddexp(0.0, z) - y * z)) + 0.5 * self.l2 * float(w @ w)
        s = np.exp(-np.logaddexp(0.0, -z))  # sigmoid
        r = s - y
        grad = np.empty_like(theta)
        grad[:-1] = X.T @ r + self.l2 * w
        grad[-1] = r.sum() if self.fit_intercept else 0.0
        return loss, grad

    def fit(self, X, y):
        X, y = _check_xy(X, y)
        _require_both_classes(y)
        n, d = X.shape
        y = y.astype(float)
        theta = np.zeros(d + 1)
        loss, grad = self._objective(X, y, theta)
        step = 1.0 / max(1.0, 0.25 * n + self.l2)
        converged = float(np.max(np.abs(grad))) < self.tol
        it = 0
        while not converged and it < self.max_iter:
            it += 1
            while True:
                cand = theta - step * grad
                c_loss, c_grad = self._objective(X, y, cand)
                if c_loss <= loss - 1e-4 * step * float(grad @ grad) or step < 1e-20:
                    break
                step *= 0.5
            s_vec, y_vec = cand - theta, c_grad - grad
            theta, loss, grad = cand, c_loss, c_grad
            converged = float(np.max(np.abs(grad))) < self.tol
            sy = float(s_vec @ y_vec)
            step = float(s_vec @ s_vec) / sy if sy > 0 else step * 2.0
        self.coef_ = theta[:-1].copy()
        self.intercept_ = float(theta[-1])
        self.n_iter_ = it
        self.converged_ = converged
        self.classes_ = CLASSES
        self.n_features_in_ = d
        return self

    def decision_function(self, X) -> np.ndarray:
        X = self._check_input(X)
        return np.asarray(X @ self.coef_).ravel() + self.intercept_

    def predict_useful(self, X) -> np.ndarray:
        z = self.decision_function(X)
        return np.exp(-np.logaddexp(0.0, -z))

    def get_state(self) -> dict:
        return {"coef": self.coef_.tolist(), "intercept": self.intercept_,
                "n_iter": self.n_iter_, "converged": bool(self.converged_)}

    def set_state(self, state: dict) -> "LogisticRegression":
        self.coef_ = np.array(state["coef"], dtype=float)
        self.intercept_ = float(state["intercept"])
        self.n_iter_ = int(state.get("n_iter", 0))
        self.converged_ = bool(state.get("converged", True))
        self.classes_ = CLASSES
        self.n_features_in_ = len(self.coef_)
        return self


class GaussianNaiveBayes(_Binary):
    """Per-class Gaussian likelihoods with pooled variance smoothing.

    Every variance gets ``var_smoothing * max feature variance`` added (or
    ``var_smoothing`` itself when all features are constant).
    """

    kind = "gnb"

    def __init__(self, var_smoothing: float = 1e-9):
        self.var_smoothing = var_smoothing

    def fit(self, X, y):
        X, y = _check_xy(X, y)
        X = X.toarray() if sp.issparse(X) else X
        _require_both_classes(y)
        max_var = float(X.var(axis=0).max()) if X.size else 0.0
        self.epsilon_ = self.var_smoothing * max_var if max_var > 0 else self.var_smoothing
        self.theta_ = np.array([X[y == c].mean(axis=0) for c in CLASSES])
        self.var_ = np.array([X[y == c].var(axis=0) for c in CLASSES]) + self.epsilon_
        self.class_prior_ = np.array([np.mean(y == c) for c in CLASSES])
        self.classes_ = CLASSES
        self.n_features_in_ = X.shape[1]
        return self

    def joint_log_likelihood(self, X) -> np.ndarray:
        X = self._check_input(X)
        X = X.toarray() if sp.issparse(X) else X
        out = np.empty((X.shape[0], 2))
        for c in range(2):
            ll = -0.5 * np.sum(np.log(2.0 * np.pi * self.var_[c]))
            ll = ll - 0.5 * np.sum((X - self.theta_[c]) ** 2 / self.var_[c], axis=1)
            out[:, c] = np.log(self.class_prior_[c]) + ll
        return out

    def predict_proba(self, X) -> np.ndarray:
        jll = self.joint_log_likelihood(X)
        jll -= jll.max(axis=1, keepdims=True)
        p = np.exp(jll)
        return p / p.sum(axis=1, keepdims=True)

    def predict_useful(self, X) -> np.ndarray:
        return self.predict_proba(X)[:, 1]

    def predict(self, X) -> np.ndarray:
        return (self.predict_useful(X) > 0.5).astype(int)

    def get_state(self) -> dict:
        return {"theta": self.theta_.tolist(), "var": self.var_.tolist(),
                "prior": self.class_prior_.tolist(), "epsilon": self.epsilon_}

    def set_state(self, state: dict) -> "GaussianNaiveBayes":
        self.theta_ = np.array(state["theta"], dtype=float)
        self.var_ = np.array(state["var"], dtype=float)
        self.class_prior_ = np.array(state["prior"], dtype=float)
        self.epsilon_ = float(state["epsilon"])
        self.classes_ = CLASSES
        self.n_features_in_ = self.theta_.shape[1]
        return self


class RandomForest(_Binary):
    """Bootstrap CART forest (sklearn trees); probability = fraction of trees voting useful."""

    kind = "rf"

    def __init__(self, n_trees: int = 100, seed: int = 2023, max_features="sqrt"):
        self.n_trees = n_trees
        self.seed = seed
        self.max_features = max_features

    def fit(self, X, y):
        X, y = _check_xy(X, y)
        _require_both_classes(y)
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        self.forest_ = RandomForestClassifier(
            n_estimators=self.n_trees,
            criterion="gini",
            max_features=self.max_features,
            bootstrap=True,
            min_samples_leaf=1,
            random_state=self.seed,
            n_jobs=1,
        ).fit(X, y)
        self.classes_ = CLASSES
        self.n_features_in_ = X.shape[1]
        return self

    @property
    def feature_importances_(self) -> np.ndarray:
        check_is_fitted(self, "forest_")
        return self.forest_.feature_importances_

    def predict_useful(self, X) -> np.ndarray:
        X = self._check_input(X)
        votes = np.zeros(X.shape[0])
        for tree in self.forest_.estimators_:
            # sub-estimators were fit on encoded labels; column 1 is class 1 here
            votes += tree.predict_proba(X)[:, 1] > 0.5
        return votes / len(self.forest_.estimators_)


class MajorityClassifier(_Binary):
    """Predicts the training majority for everyone; the score is the useful prior."""

    kind = "majority"

    def fit(self, X, y):
        y = np.asarray(y, dtype=int).ravel()
        if len(y) == 0:
            raise ValueError("cannot fit on zero samples")
        self.prior_ = float(np.mean(y == 1))
        self.classes_ = CLASSES
        self.n_features_in_ = None
        return self

    def predict_useful(self, X) -> np.ndarray:
        check_is_fitted(self, "prior_")
        return np.full(_n_rows(X), self.prior_)

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "prior_")
        return np.full(_n_rows(X), int(self.prior_ > 0.5))

    def get_state(self) -> dict:
        return {"prior": self.prior_}

    def set_state(self, state: dict) -> "MajorityClassifier":
        self.prior_ = float(state["prior"])
        self.classes_ = CLASSES
        self.n_features_in_ = None
        return self


def _n_rows(X) -> int:
    return X.shape[0] if hasattr(X, "shape") else len(X)


CLASSIFIERS = {
    "logreg": LogisticRegression,
    "gnb": GaussianNaiveBayes,
    "rf": RandomForest,
    "majority": MajorityClassifier,
}


def make_classifier(kind: str, **params) -> _Binary:
    try:
        cls = CLASSIFIERS[kind]
    except KeyError:
        raise ValueError(f"unknown classifier {kind!r}; expected one of {sorted(CLASSIFIERS)}") from None
    return cls(**params)


def train_logreg(X, y, l2: float = 1.0, max_iter: int = 1000, tol: float = 1e-6) -> LogisticRegression:
    return LogisticRegression(l2=l2, max_iter=max_iter, tol=tol).fit(X, y)


def train_gnb(X, y, var_smoothing: float = 1e-9) -> GaussianNaiveBayes:
    return GaussianNaiveBayes(var_smoothing=var_smoothing).fit(X, y)


def train_rf(X, y, n_trees: int = 100, seed: int = 2023) -> RandomForest:
    return RandomForest(n_trees=n_trees, seed=seed).fit(X, y)


def predict_proba(model: _Binary, x) -> float | np.ndarray:
    """Probability of useful for one vector (a float) or for each row of a matrix."""
    if not sp.issparse(x) and np.ndim(x) == 1:
        return float(model.predict_useful(np.asarray(x, dtype=float).reshape(1, -1))[0])
    return model.predict_useful(x)
