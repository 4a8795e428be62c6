import numpy as np

from fluxlab.common.math_util import (
    central_difference, fibonacci_sphere, loglog_slope, positive_increments, sign_runs,
)


def test_loglog_slope():
    x = np.array([1e-4, 1e-3, 1e-2, 1e-1])
    slope, intercept = loglog_slope(x, -3 * x ** 2)
    assert np.isclose(slope, 2.0)
    assert np.isclose(intercept, np.log(3))


def test_central_difference():
    x = np.linspace(0, 1, 11)
    d = central_difference(x ** 2, x)
    assert np.allclose(d[1:-1], 2 * x[1:-1])


def test_positive_increments():
    assert np.isclose(positive_increments([0, 1, 0.5, 2]), 2.5)
    assert positive_increments([3, 2, 1]) == 0.0


def test_sign_runs():
    assert sign_runs([-1, 1, 2, -1, 3]) == [(1, 3), (4, 5)]
    assert sign_runs([0.5, 0.2], threshold=0.3) == [(0, 1)]
    assert sign_runs([-1, -2]) == []


def test_fibonacci_sphere():
    n = fibonacci_sphere(100)
    assert n.shape == (100, 3)
    assert np.allclose(np.linalg.norm(n, axis=1), 1.0)
    assert abs(n[:, 2].mean()) < 1e-12
