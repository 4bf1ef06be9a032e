import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_regression(seed, n, d, noise=0.1):
    """Well-conditioned random regression data with a planted linear signal."""
    gen = np.random.default_rng(seed)
    X = gen.normal(0.0, 1.0, size=(n, d))
    w = gen.normal(0.0, 1.0, size=d)
    b = gen.normal()
    y = X @ w + b + noise * gen.normal(size=n)
    return X, y
