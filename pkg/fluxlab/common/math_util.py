import numpy as np
import scipy.stats


def loglog_slope(x, y):
    """
    Least-squares slope of log|y| against log x.

    inputs
    ------
    x: 1d array of positive abscissae
    y: 1d array, nonzero

    outputs
    -------
    (slope, intercept) of the fitted line log|y| = slope * log x + intercept
    """
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    assert x.ndim == 1 and x.shape == y.shape
    fit = scipy.stats.linregress(np.log(x), np.log(y))
    return float(fit.slope), float(fit.intercept)


def central_difference(y, x):
    """dy/dx with second order central differences inside and one-sided at the ends."""
    return np.gradient(np.asarray(y, dtype=float), np.asarray(x, dtype=float))


def positive_increments(y):
    """Sum of the positive parts of consecutive differences of y."""
    d = np.diff(np.asarray(y, dtype=float))
    return float(np.sum(d[d > 0]))


def sign_runs(y, threshold=0.0):
    """
    Maximal index ranges [start, stop) on which y > threshold.
    """
    above = np.asarray(y) > threshold
    edges = np.diff(np.concatenate([[0], above.astype(int), [0]]))
    starts = np.nonzero(edges == 1)[0]
    stops = np.nonzero(edges == -1)[0]
    return list(zip(starts.tolist(), stops.tolist()))


def fibonacci_sphere(n):
    """n quasi-uniform unit vectors (golden angle spiral), deterministic."""
    k = np.arange(n) + 0.5
    z = 1 - 2 * k / n
    r = np.sqrt(1 - z * z)
    phi = np.pi * (3 - np.sqrt(5)) * k
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
