# %% [markdown]
# # Action functionals on piecewise linear paths
#
# For a path `f` with `f(0) = 0` the quadratic action is
# `I_T(f) = (1 / 2 sigma^2) int f'(t)^2 dt` and the general one is
# `J_T(f) = int Lambda*(f'(t)) dt`. On piecewise linear paths both are finite
# sums over segments.

# %%
import numpy as np

from mdphit import Normal, Poisson
from mdphit.rate_functions import (
    PiecewisePath,
    endpoint_infimum,
    eval_I,
    eval_J,
    minimize_segment_action,
    near_minimizer,
    straight_path,
    theorem_rate,
)

# %% [markdown]
# Among paths ending at `a` at time `T` the straight line is cheapest, with
# cost `a^2 / (2 sigma^2 T)`. Bending it only adds cost.

# %%
a, T = 1.0, 1.0
print("straight:", eval_I(straight_path(a, T), 1.0), "bound:", endpoint_infimum(a, T, 1.0))
bent = PiecewisePath.from_knots([(0, 0), (0.5, 0.8), (1.0, 1.0)])
print("bent:    ", eval_I(bent, 1.0))
best = minimize_segment_action(a, T, 1.0, segments=16)
print("optimised 16-segment slopes:", np.round(best.slopes, 12)[:4], "...")

# %% [markdown]
# `J_T` vanishes on the mean line and matches `I_T` exactly for Gaussian
# increments once the drift is removed. Poisson paths cannot go down.

# %%
print(eval_J(straight_path(2.0, 2.0), Poisson(1.0)))
print(eval_J(PiecewisePath.from_slopes([1.0, -0.5], [0.5, 0.5]), Poisson(1.0)))
d = Normal(1.0, 2.0)
p = PiecewisePath.from_slopes([0.3, 2.5, 1.0], [0.2, 0.5, 0.3])
print(eval_J(p, d), eval_I(PiecewisePath(p.times, p.values - d.mu * p.times), d.sigma2))

# %% [markdown]
# The hitting-time rate `mu^3 t^2 / (2 sigma^2 r)` is the cost of the
# cheapest path that is still below `-mu t` around `tau_r`. A family of
# near-optimal paths approaches it as the slack goes to zero.

# %%
mu, sigma2, r, t = 1.0, 1.0, 0.25, 0.8
print("rate:", theorem_rate(mu, sigma2, r, t))
for eps in (0.1, 0.01, 0.001):
    print(f"eps={eps:<6} action = {eval_I(near_minimizer(mu, t, r / mu, eps, eps / 10), sigma2):.6f}")
