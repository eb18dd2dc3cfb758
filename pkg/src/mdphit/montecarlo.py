"""Replicated hitting-time experiments and empirical decay rates.

Replication ``i`` draws its increments from ``random_stream(master_seed, i)``,
so results depend only on the configuration and never on how the work is
scheduled across threads.
"""

from __future__ import annotations

import enum
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .distributions import DistributionSpec, random_stream
from .rate_functions import theorem_rate
from .trajectory import build_trajectory, default_horizon, first_hit, limit_hitting_time

__all__ = [
    "Tail",
    "ExperimentConfig",
    "RateRow",
    "RateCurve",
    "CltResult",
    "default_t_grid",
    "hitting_times",
    "scaled_deviations",
    "rate_rows",
    "run_experiment",
    "wilson_interval",
    "clt_check",
    "lln_check",
]

WILSON_Z = float(stats.norm.ppf(0.975))
DEFAULT_GRID_POINTS = 40


class Tail(enum.Enum):
    UPPER = "upper"
    LOWER = "lower"
    BOTH = "both"


def default_t_grid(dist: DistributionSpec, n: int, r: float, an_exponent: float,
                   replications: int, points: int = DEFAULT_GRID_POINTS) -> tuple:
    """``points`` equally spaced values over ``(0, t_max]``.

    ``t_max`` is where the Gaussian approximation of the scaled deviation puts
    the tail probability at ``10 / replications``.
    """
    sd = math.sqrt(n) / n**an_exponent * math.sqrt(dist.sigma2 * r / dist.mu**3)
    p = 10.0 / replications
    t_max = sd * stats.norm.isf(p) if p < 0.5 else sd
    return tuple(t_max * k / points for k in range(1, points + 1))


@dataclass(frozen=True)
class ExperimentConfig:
    dist: DistributionSpec
    n: int
    r: float
    an_exponent: float = 0.9
    replications: int = 10_000
    t_grid: Optional[Sequence[float]] = None
    horizon: Optional[float] = None
    master_seed: int = 0
    tail: Tail = Tail.UPPER

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if not 0 < self.r < self.dist.mu:
            raise ValueError(f"r={self.r} outside (0, mu={self.dist.mu})")
        if not 0.5 < self.an_exponent < 1:
            raise ValueError(f"an_exponent={self.an_exponent} outside (0.5, 1)")
        if int(self.replications) != self.replications or self.replications < 1:
            raise ValueError(f"replications must be a positive integer, got {self.replications}")
        if self.t_grid is None:
            grid = default_t_grid(self.dist, self.n, self.r, self.an_exponent, self.replications)
        else:
            grid = tuple(float(t) for t in self.t_grid)
        if not grid or grid[0] <= 0 or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("t_grid must be a non-empty increasing list of positive reals")
        horizon = default_horizon(self.dist.mu, self.r) if self.horizon is None else float(self.horizon)
        if horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {horizon}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "replications", int(self.replications))
        object.__setattr__(self, "t_grid", grid)
        object.__setattr__(self, "horizon", horizon)
        object.__setattr__(self, "tail", Tail(self.tail))

    @property
    def a_n(self) -> float:
        return self.n**self.an_exponent

    @property
    def speed(self) -> float:
        """``n / a_n^2``, the factor turning ``-log p`` into a rate."""
        return self.n / self.a_n**2

    @property
    def tau_r(self) -> float:
        return limit_hitting_time(self.dist.mu, self.r)


@dataclass(frozen=True)
class RateRow:
    t: float
    hits: int
    censored: int
    non_hits: int
    p_hat: float
    empirical_rate: float
    theoretical_rate: float
    ci_low: float
    ci_high: float


@dataclass
class RateCurve:
    config: ExperimentConfig
    upper: Optional[list] = None
    lower: Optional[list] = None
    meta: dict = field(default_factory=dict)

    @property
    def rows(self) -> list:
        return self.upper if self.upper is not None else self.lower


@dataclass(frozen=True)
class CltResult:
    sample_var: float
    target_var: float
    ks_distance: float
    censored: int = 0


def _run_indices(dist, n, r, horizon, seed, indices, out):
    for i in indices:
        traj = build_trajectory(dist, n, horizon, random_stream(seed, i))
        out[i] = first_hit(traj.increments, traj.prefix_sums, n, r)


def hitting_times(dist: DistributionSpec, n: int, r: float, replications: int,
                  master_seed: int, horizon: Optional[float] = None,
                  workers: int = 1) -> np.ndarray:
    """Hitting times of ``replications`` independent paths (``inf`` = censored).

    Replication ``i`` always uses stream ``i``; ``workers`` only changes the
    scheduling, never the values.
    """
    if horizon is None:
        horizon = default_horizon(dist.mu, r)
    out = np.empty(replications)
    workers = max(1, int(workers))
    if workers == 1:
        _run_indices(dist, n, r, horizon, master_seed, range(replications), out)
        return out
    chunks = np.array_split(np.arange(replications), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        jobs = [pool.submit(_run_indices, dist, n, r, horizon, master_seed, c, out) for c in chunks]
        for j in jobs:
            j.result()
    return out


def scaled_deviations(config: ExperimentConfig, workers: int = 1) -> np.ndarray:
    """``(n / a_n) (tau_r^n - tau_r)`` per replication; ``inf`` marks censoring."""
    tau = hitting_times(config.dist, config.n, config.r, config.replications,
                        config.master_seed, config.horizon, workers)
    return (config.n / config.a_n) * (tau - config.tau_r)


def wilson_interval(hits: int, m: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    p = hits / m
    z2 = z * z
    denom = 1.0 + z2 / m
    centre = (p + z2 / (2 * m)) / denom
    half = z / denom * math.sqrt(p * (1 - p) / m + z2 / (4 * m * m))
    lo = 0.0 if hits == 0 else max(0.0, centre - half)
    hi = 1.0 if hits == m else min(1.0, centre + half)
    return lo, hi


def _neglog_rate(p: float, speed: float) -> float:
    if p <= 0:
        return math.inf
    return 0.0 - speed * math.log(p)


def rate_rows(deviations: np.ndarray, config: ExperimentConfig,
              tail: Tail = Tail.UPPER) -> list:
    """Tail counts and rates over ``config.t_grid`` for a given set of deviations.

    Censored replications (``inf``) fall in every upper-tail event and in no
    lower-tail event.
    """
    if tail is Tail.BOTH:
        raise ValueError("rate_rows handles one tail at a time")
    d = np.asarray(deviations, dtype=float)
    m = d.size
    censored = int(np.isinf(d).sum())
    finite = d[np.isfinite(d)]
    rows = []
    for t in config.t_grid:
        if tail is Tail.UPPER:
            hits = int((d > t).sum())
            non_hits = int((finite <= t).sum())
        else:
            hits = int((d < -t).sum())
            non_hits = int((finite >= -t).sum())
        p_hat = hits / m
        p_lo, p_hi = wilson_interval(hits, m)
        rows.append(RateRow(
            t=float(t),
            hits=hits,
            censored=censored,
            non_hits=non_hits,
            p_hat=p_hat,
            empirical_rate=_neglog_rate(p_hat, config.speed),
            theoretical_rate=theorem_rate(config.dist.mu, config.dist.sigma2, config.r, t),
            ci_low=_neglog_rate(p_hi, config.speed),
            ci_high=_neglog_rate(p_lo, config.speed),
        ))
    return rows


def run_experiment(config: ExperimentConfig, workers: int = 1,
                   deviations: Optional[np.ndarray] = None) -> RateCurve:
    """Simulate ``config.replications`` paths and tabulate the empirical rates.

    Pass ``deviations`` to tabulate a previously computed sample instead of
    simulating.
    """
    start = time.perf_counter()
    if deviations is None:
        deviations = scaled_deviations(config, workers)
    curve = RateCurve(config)
    if config.tail in (Tail.UPPER, Tail.BOTH):
        curve.upper = rate_rows(deviations, config, Tail.UPPER)
    if config.tail in (Tail.LOWER, Tail.BOTH):
        curve.lower = rate_rows(deviations, config, Tail.LOWER)
    curve.meta = {
        "master_seed": config.master_seed,
        "wall_clock_s": time.perf_counter() - start,
        "censored": int(np.isinf(deviations).sum()),
    }
    return curve


def clt_check(dist: DistributionSpec, n: int, r: float, replications: int,
              master_seed: int, horizon: Optional[float] = None,
              workers: int = 1) -> CltResult:
    """Compare ``sqrt(n) (tau_r^n - tau_r)`` with its Gaussian limit.

    The limit variance is ``sigma^2 r / mu^3``. Censored replications are
    excluded from the statistics and counted in the result.
    """
    tau = hitting_times(dist, n, r, replications, master_seed, horizon, workers)
    hit = np.isfinite(tau)
    z = math.sqrt(n) * (tau[hit] - limit_hitting_time(dist.mu, r))
    target = dist.sigma2 * r / dist.mu**3
    ks = stats.kstest(z, stats.norm(0.0, math.sqrt(target)).cdf).statistic
    return CltResult(
        sample_var=float(np.var(z, ddof=1)) if z.size > 1 else 0.0,
        target_var=target,
        ks_distance=float(ks),
        censored=int((~hit).sum()),
    )


def lln_check(dist: DistributionSpec, r: float, n_list: Sequence[int], replications: int,
              master_seed: int, workers: int = 1) -> list[tuple[int, float]]:
    """Median of ``|tau_r^n - r / mu|`` for each ``n`` in ``n_list``."""
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly increasing")
    tau_r = limit_hitting_time(dist.mu, r)
    out = []
    for n in n_list:
        tau = hitting_times(dist, n, r, replications, master_seed, workers=workers)
        out.append((int(n), float(np.median(np.abs(tau - tau_r)))))
    return out
