# %% [markdown]
# # Empirical decay rates of hitting-time deviations
#
# With `a_n = n^0.9` the probability that `(n / a_n)(tau - tau_r)` exceeds `t`
# decays like `exp(-(a_n^2 / n) * 2 t^2)` for mean 1, variance 1 increments
# and `r = 0.25`. We estimate `-(n / a_n^2) log P` by simulation.
#
# The same runs are available from the shell:
#
#     mdp rate-curve --preset example2 --plot --out poisson_run
#     mdp rate-curve --preset example1 --plot --out exponential_run

# %%
import numpy as np

from mdphit import Exponential, Poisson
from mdphit.montecarlo import ExperimentConfig, Tail, run_experiment
from mdphit.output import rate_svg

grid = tuple(k / 40 for k in range(1, 41))

# %%
for name, dist in (("Poisson(1)", Poisson(1.0)), ("Exponential(1)", Exponential(1.0))):
    cfg = ExperimentConfig(dist, n=100, r=0.25, replications=10_000, t_grid=grid, master_seed=0)
    curve = run_experiment(cfg)
    print(name, f"({curve.meta['wall_clock_s']:.2f}s)")
    print(f"{'t':>6} {'hits':>6} {'empirical':>10} {'2t^2':>8} {'95% band':>20}")
    for row in curve.rows[:14]:
        print(f"{row.t:6.3f} {row.hits:6d} {row.empirical_rate:10.4f} {row.theoretical_rate:8.4f} "
              f"[{row.ci_low:7.4f}, {row.ci_high:7.4f}]")

# %% [markdown]
# At small `t` the empirical rate sits well above `2 t^2`: even at `t = 0`
# the probability is about one half, which costs `(n / a_n^2) log 2` at
# `n = 100`. The gap closes only slowly as `n` grows, since the prefactor
# is multiplied by `n / a_n^2 = n^(-0.8)`.

# %%
for n in (100, 1000, 10_000):
    cfg = ExperimentConfig(Poisson(1.0), n=n, r=0.25, replications=4000, t_grid=(0.01, 0.02), master_seed=0)
    rows = run_experiment(cfg).rows
    print(f"n={n:>6} " + "  ".join(f"t={r.t}: {r.empirical_rate:.4f} vs {r.theoretical_rate:.4f}" for r in rows))

# %% [markdown]
# Upper and lower tails share the same limit rate.

# %%
from mdphit import Normal  # noqa: E402

cfg = ExperimentConfig(Normal(1.0, 1.0), n=1000, r=0.25, replications=5000, master_seed=0, tail=Tail.BOTH)
curve = run_experiment(cfg)
for up, lo in list(zip(curve.upper, curve.lower))[5:40:6]:
    print(f"t={up.t:.4f} upper {up.empirical_rate:.5f} lower {lo.empirical_rate:.5f}")

# %% [markdown]
# An SVG chart with both series can be written without any plotting library.

# %%
svg = rate_svg(run_experiment(ExperimentConfig(Poisson(1.0), 100, 0.25, t_grid=grid)).rows, "Poisson(1)")
print(svg[:120], "...")
