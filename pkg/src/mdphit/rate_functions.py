"""Path functionals and the hitting-time decay rate.

Paths are piecewise linear with ``f(0) = 0``, so both functionals reduce to
exact finite sums over segments:

* quadratic action ``I_T(f) = (1 / 2 sigma^2) * sum slope_i^2 dt_i``
* conjugate action ``J_T(f) = sum Lambda*(slope_i) dt_i``
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import DistributionSpec, legendre

__all__ = [
    "DomainError",
    "PiecewisePath",
    "eval_I",
    "eval_J",
    "endpoint_infimum",
    "verify_endpoint_infimum",
    "minimize_segment_action",
    "theorem_rate",
    "straight_path",
    "near_minimizer",
]


class DomainError(ValueError):
    """Level ``r`` outside ``(0, mu)``."""


@dataclass(frozen=True, eq=False)
class PiecewisePath:
    """Piecewise-linear ``f`` on ``[0, T]`` given by its knots.

    The first knot must be ``(0, 0)`` and knot times strictly increase.
    """

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.array(self.times, dtype=float)
        v = np.array(self.values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or t.size < 2:
            raise ValueError("need at least two knots with matching times and values")
        if t[0] != 0.0 or v[0] != 0.0:
            raise ValueError(f"path must start at (0, 0), got ({t[0]}, {v[0]})")
        if not np.all(np.diff(t) > 0):
            raise ValueError("knot times must be strictly increasing")
        if not np.all(np.isfinite(v)) or not np.all(np.isfinite(t)):
            raise ValueError("knots must be finite")
        t.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_knots(cls, knots) -> "PiecewisePath":
        k = np.asarray(knots, dtype=float)
        return cls(k[:, 0], k[:, 1])

    @classmethod
    def from_slopes(cls, slopes, dts) -> "PiecewisePath":
        slopes = np.asarray(slopes, dtype=float)
        dts = np.asarray(dts, dtype=float)
        times = np.concatenate([[0.0], np.cumsum(dts)])
        values = np.concatenate([[0.0], np.cumsum(slopes * dts)])
        return cls(times, values)

    @property
    def T(self) -> float:
        return float(self.times[-1])

    @property
    def end_value(self) -> float:
        return float(self.values[-1])

    @property
    def dts(self) -> np.ndarray:
        return np.diff(self.times)

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / self.dts

    def __call__(self, t):
        return np.interp(t, self.times, self.values)

    def concat(self, other: "PiecewisePath") -> "PiecewisePath":
        """``self`` followed by ``other`` shifted to start at ``(T, f(T))``."""
        times = np.concatenate([self.times, self.T + other.times[1:]])
        values = np.concatenate([self.values, self.end_value + other.values[1:]])
        return PiecewisePath(times, values)


def eval_I(path: PiecewisePath, sigma2: float) -> float:
    if not sigma2 > 0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")
    return float(np.sum(path.slopes**2 * path.dts) / (2.0 * sigma2))


def eval_J(path: PiecewisePath, dist: DistributionSpec) -> float:
    """Sum of ``Lambda*(slope) * dt`` over segments; ``inf`` if any slope is infeasible."""
    total = 0.0
    for s, dt in zip(path.slopes, path.dts):
        val = legendre(dist, float(s))
        if math.isinf(val):
            return math.inf
        total += val * dt
    return total


def endpoint_infimum(a: float, T: float, sigma2: float) -> float:
    """Smallest quadratic action over paths with ``f(T) = a``: ``a^2 / (2 sigma^2 T)``."""
    if not T > 0 or not sigma2 > 0:
        raise ValueError(f"need T > 0 and sigma2 > 0, got T={T}, sigma2={sigma2}")
    return a * a / (2.0 * sigma2 * T)


def minimize_segment_action(a: float, T: float, sigma2: float,
                            segments: int) -> PiecewisePath:
    """Minimiser of the quadratic action over equal-width piecewise-linear paths.

    Solves the KKT system of ``min sum s_i^2 h / (2 sigma^2)`` subject to
    ``sum s_i h = a`` directly; the objective is a diagonal quadratic in the
    slopes so the linear solve is exact.
    """
    if segments < 1:
        raise ValueError(f"segments must be >= 1, got {segments}")
    h = T / segments
    kkt = np.zeros((segments + 1, segments + 1))
    kkt[np.arange(segments), np.arange(segments)] = h / sigma2
    kkt[:segments, segments] = h
    kkt[segments, :segments] = h
    rhs = np.zeros(segments + 1)
    rhs[segments] = a
    slopes = np.linalg.solve(kkt, rhs)[:segments]
    return PiecewisePath.from_slopes(slopes, np.full(segments, h))


def verify_endpoint_infimum(a: float, T: float, sigma2: float, segments: int) -> float:
    """Minimum quadratic action found by optimising over ``segments`` slopes."""
    return eval_I(minimize_segment_action(a, T, sigma2, segments), sigma2)


def theorem_rate(mu: float, sigma2: float, r: float, t: float) -> float:
    """Decay rate ``mu^3 t^2 / (2 sigma^2 r)`` of the scaled hitting-time tails."""
    if not 0 < r < mu:
        raise DomainError(f"level r={r} outside (0, mu={mu})")
    if not sigma2 > 0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")
    return mu**3 * t * t / (2.0 * sigma2 * r)


def straight_path(a: float, T: float) -> PiecewisePath:
    """``f(t) = (a / T) t``, the optimal path to endpoint ``a``."""
    return PiecewisePath(np.array([0.0, T]), np.array([0.0, a]))


def near_minimizer(mu: float, t: float, tau: float, eps: float, delta: float) -> PiecewisePath:
    """Line through the origin ending below ``-mu t (1 + eps)`` on ``[tau - delta, tau + delta]``.

    Slope ``-mu t (1 + eps) / (tau - delta)`` on ``[0, tau + delta]``.
    """
    if not 0 < delta < tau:
        raise ValueError(f"need 0 < delta < tau, got delta={delta}, tau={tau}")
    slope = -mu * t * (1.0 + eps) / (tau - delta)
    return PiecewisePath.from_slopes([slope], [tau + delta])
