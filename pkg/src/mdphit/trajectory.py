"""Interpolated partial-sum paths and their first hitting times.

For increments ``X_1, X_2, ...`` and scale ``n`` the path is

    S~_n(t) = S_floor(nt) + (nt - floor(nt)) X_(floor(nt)+1),

which is linear on each segment ``[k/n, (k+1)/n]``. The hitting time of level
``r`` is the first ``t`` with ``S~_n(t) >= n r``; it is found exactly by
solving the linear piece of the first segment that reaches the level.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .distributions import DistributionSpec

__all__ = [
    "OutOfRange",
    "Trajectory",
    "HitStatus",
    "HittingResult",
    "build_trajectory",
    "evaluate",
    "hitting_time",
    "first_hit",
    "limit_hitting_time",
    "default_horizon",
]

# above this many increments prefix sums use compensated summation
COMPENSATED_THRESHOLD = 100_000


class OutOfRange(ValueError):
    """Evaluation time outside ``[0, horizon]``."""


def _prefix_sums(x: np.ndarray) -> np.ndarray:
    out = np.empty(x.size + 1)
    out[0] = 0.0
    if x.size <= COMPENSATED_THRESHOLD:
        np.cumsum(x, out=out[1:])
        return out
    # Kahan-Babuska
    s = 0.0
    c = 0.0
    for k, v in enumerate(x.tolist(), start=1):
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out[k] = s + c
    return out


@dataclass(frozen=True, eq=False)
class Trajectory:
    """One realisation of the interpolated walk on ``[0, horizon]``."""

    n: int
    increments: np.ndarray
    prefix_sums: np.ndarray
    horizon: float

    @classmethod
    def from_increments(cls, increments, n: int, horizon: float | None = None) -> "Trajectory":
        x = np.array(increments, dtype=float)
        if n < 1:
            raise ValueError(f"scale n must be >= 1, got {n}")
        if horizon is None:
            horizon = x.size / n
        if x.size < math.ceil(n * horizon - 1e-9):
            raise ValueError(f"{x.size} increments cannot cover horizon {horizon} at n={n}")
        x.flags.writeable = False
        s = _prefix_sums(x)
        s.flags.writeable = False
        return cls(int(n), x, s, float(horizon))

    @property
    def m(self) -> int:
        return self.increments.size

    def __call__(self, t: float) -> float:
        return evaluate(self, t)


class HitStatus(enum.Enum):
    HIT = "hit"
    CENSORED = "censored"


@dataclass(frozen=True)
class HittingResult:
    status: HitStatus
    level_r: float
    n: int
    tau: float = math.inf

    @property
    def hit(self) -> bool:
        return self.status is HitStatus.HIT


def default_horizon(mu: float, r: float) -> float:
    """``max(1, 2 r / mu)``: twice the limit hitting time, never below 1."""
    return max(1.0, 2.0 * r / mu)


def build_trajectory(dist: DistributionSpec, n: int, horizon: float,
                     rng: np.random.Generator) -> Trajectory:
    """Draw ``ceil(n * horizon)`` i.i.d. increments from ``dist``."""
    if n < 1:
        raise ValueError(f"scale n must be >= 1, got {n}")
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    m = math.ceil(n * horizon)
    x = np.asarray(dist.sample(rng, m), dtype=float)
    return Trajectory.from_increments(x, n, horizon)


def evaluate(traj: Trajectory, t: float) -> float:
    """``S~_n(t)`` for ``0 <= t <= horizon``."""
    if not 0.0 <= t <= traj.horizon:
        raise OutOfRange(f"t={t!r} outside [0, {traj.horizon!r}]")
    nt = traj.n * t
    k = math.floor(nt)
    frac = nt - k
    # snap grid times k/n whose product with n missed the integer by rounding
    nearest = round(nt)
    if abs(nt - nearest) <= 1e-12 * max(1.0, nt):
        k, frac = nearest, 0.0
    if k >= traj.m:
        return float(traj.prefix_sums[traj.m])
    if frac <= 0.0:
        return float(traj.prefix_sums[k])
    return float(traj.prefix_sums[k] + frac * traj.increments[k])


def first_hit(increments: np.ndarray, prefix_sums: np.ndarray, n: int, r: float) -> float:
    """Hitting time of level ``n r`` from raw arrays; ``inf`` when censored.

    Array-level kernel shared by :func:`hitting_time` and the Monte Carlo
    driver.
    """
    level = n * r
    above = prefix_sums >= level
    j = int(np.argmax(above))
    if not above[j]:
        return math.inf
    if prefix_sums[j] == level or j == 0:
        return j / n
    k = j - 1
    # segment k rises from below the level to at or above it, so X_{k+1} > 0
    frac = (level - prefix_sums[k]) / increments[k]
    return (k + min(frac, 1.0)) / n


def hitting_time(traj: Trajectory, r: float) -> HittingResult:
    """First ``t`` in ``[0, horizon]`` with ``S~_n(t) >= n r``.

    Only the first upcrossing matters. Segments starting below the level with a
    non-positive increment are skipped, and an exact touch of a grid value
    returns that grid time.
    """
    if not r > 0:
        raise ValueError(f"level r must be positive, got {r}")
    tau = first_hit(traj.increments, traj.prefix_sums, traj.n, r)
    if math.isinf(tau):
        return HittingResult(HitStatus.CENSORED, r, traj.n)
    return HittingResult(HitStatus.HIT, r, traj.n, tau)


def limit_hitting_time(mu: float, r: float) -> float:
    """Hitting time ``r / mu`` of the straight line ``x(t) = mu t``."""
    if mu == 0:
        raise ZeroDivisionError("mean increment is zero")
    return r / mu
