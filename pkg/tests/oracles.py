"""Independent reference computations used only by the tests."""

import math

import numpy as np


class PointMass:
    """Constant increments; duck-types the parts of a law the simulators use.

    ``sigma2`` is a claimed variance so that rate formulas stay defined.
    """

    def __init__(self, value, sigma2=1.0):
        self.mu = float(value)
        self.sigma2 = float(sigma2)

    def sample(self, rng, size=None):
        if size is None:
            return self.mu
        return np.full(size, self.mu)


def interpolated_value(increments, n, t):
    """Direct transcription of the interpolated partial sum at time ``t``."""
    k = int(math.floor(n * t))
    total = sum(increments[:k])
    if k < len(increments):
        total += (n * t - k) * increments[k]
    return total


def grid_scan_hitting_time(increments, n, r, sub=1000):
    """First point of the grid of step ``1 / (n sub**2)`` where the path reaches ``n r``.

    Scans every segment at ``sub`` points, then rescans the single cell that
    first reaches the level at ``sub`` points again. Between consecutive grid
    points inside one segment the path is linear, so no crossing can hide
    between them and the two-level scan returns exactly what a full scan at
    the fine resolution would. Returns ``inf`` if the level is never reached.
    """
    x = np.asarray(increments, dtype=float)
    level = n * r
    starts = np.concatenate([[0.0], np.cumsum(x)])[:-1]
    frac = np.arange(sub) / sub
    vals = starts[:, None] + frac[None, :] * x[:, None]
    times = (np.arange(x.size)[:, None] + frac[None, :]) / n
    vals, times = vals.ravel(), times.ravel()
    end_val = starts[-1] + x[-1] if x.size else 0.0
    vals = np.append(vals, end_val)
    times = np.append(times, x.size / n)
    idx = np.flatnonzero(vals >= level)
    if idx.size == 0:
        return math.inf
    i = idx[0]
    if i == 0:
        return 0.0
    # refine the cell (i-1, i]
    t0, v0 = times[i - 1], vals[i - 1]
    slope = (vals[i] - v0) / (times[i] - t0)
    fine_t = t0 + (times[i] - t0) * np.arange(1, sub + 1) / sub
    fine_v = v0 + slope * (fine_t - t0)
    j = np.flatnonzero(fine_v >= level)
    return float(fine_t[j[0]]) if j.size else float(times[i])
