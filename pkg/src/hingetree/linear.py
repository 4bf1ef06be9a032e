"""Ridge-regularized least squares on augmented design matrices.

Every predictor in this package is affine and stored as one coefficient
vector of length d+1: feature weights first, bias last.  The solver works
on the augmented design (features plus a trailing column of ones) so the
bias lives inside the coefficient vector but stays outside the penalty.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DegenerateSystem

# Relative diagonal jitter used for the single retry on a failed factorization.
JITTER_SCALE = 1e-10


def augment(X: np.ndarray) -> np.ndarray:
    """Append the constant-1 column that carries the bias term."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("expected a 2-D feature matrix")
    return np.hstack([X, np.ones((X.shape[0], 1))])


def _spd_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    c, low = scipy.linalg.cho_factor(a, lower=True, check_finite=False)
    return scipy.linalg.cho_solve((c, low), b, check_finite=False)


def ridge_solve(X: np.ndarray, y: np.ndarray, alpha: float = 0.0) -> np.ndarray:
    """Minimize ``0.5*||y - X @ theta||^2 + 0.5*alpha*||theta[:-1]||^2``.

    ``X`` is an augmented design whose last column is identically 1; the
    bias coefficient is excluded from the penalty.  The system is solved
    through the normal equations with a Cholesky factorization.  If the
    factorization fails, one retry is made with a small jitter
    (``1e-10 * trace(X.T @ X) / (d+1)``) added to every diagonal entry;
    a second failure raises :class:`DegenerateSystem`.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim != 2 or X.shape[0] < 1:
        raise ValueError("design matrix must be 2-D with at least one row")
    if X.shape[0] != y.shape[0]:
        raise ValueError("design and target row counts differ")
    if alpha < 0:
        raise ValueError("ridge penalty must be non-negative")
    p = X.shape[1]
    gram = X.T @ X
    rhs = X.T @ y
    system = gram
    if alpha > 0:
        penalty = np.eye(p)
        penalty[-1, -1] = 0.0  # bias is not regularized
        system = gram + alpha * penalty
    try:
        return _spd_solve(system, rhs)
    except np.linalg.LinAlgError:
        pass
    jitter = JITTER_SCALE * float(np.trace(gram)) / p
    try:
        return _spd_solve(system + jitter * np.eye(p), rhs)
    except np.linalg.LinAlgError:
        raise DegenerateSystem(
            "normal equations are singular even after the jitter retry"
        ) from None


def fit_or_mean(X: np.ndarray, y: np.ndarray, alpha: float = 0.0) -> np.ndarray:
    """ridge_solve with the documented fallback to the constant predictor.

    On :class:`DegenerateSystem` the returned model is all-zero weights
    with bias ``mean(y)``.
    """
    try:
        return ridge_solve(X, y, alpha)
    except DegenerateSystem:
        theta = np.zeros(X.shape[1])
        theta[-1] = float(np.mean(y))
        return theta


def predict_linear(theta: np.ndarray, x: np.ndarray) -> float:
    """Evaluate the affine model: dot(x, weights) + bias."""
    theta = np.asarray(theta, dtype=float)
    x = np.asarray(x, dtype=float).ravel()
    return float(x @ theta[:-1] + theta[-1])
