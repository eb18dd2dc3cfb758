# %% [markdown]
# # Hitting times of interpolated walks
#
# Given increments `X_1, X_2, ...` the path `t -> S~_n(t)` joins the partial
# sums `S_k` at times `k/n` by straight lines. Its first passage above `n r`
# is found exactly, segment by segment.

# %%
import numpy as np

from mdphit import Exponential, Poisson, Trajectory, build_trajectory, hitting_time, random_stream
from mdphit.montecarlo import clt_check, hitting_times, lln_check

# %% [markdown]
# A hand-sized example: two increments `3, -1` at scale `n = 2`. The level
# `n r = 2` (with `r = 1`) is crossed two thirds of the way through the first
# segment, that is at `t = 1/3`.

# %%
tr = Trajectory.from_increments([3.0, -1.0], n=2)
print([tr(t) for t in (0.0, 0.25, 0.5, 0.75, 1.0)])
print(hitting_time(tr, 1.0))

# %% [markdown]
# A random path. The straight line `mu t` reaches `r` at `tau_r = r / mu`.

# %%
rng = random_stream(master_seed=1)
tr = build_trajectory(Exponential(1.0), n=1000, horizon=1.0, rng=rng)
res = hitting_time(tr, 0.25)
print(f"tau = {res.tau:.5f}, limit = 0.25")

# %% [markdown]
# Law of large numbers: the median distance to the limit shrinks roughly
# like `n^(-1/2)`.

# %%
for n, med in lln_check(Exponential(1.0), 0.25, [100, 1000, 10_000], 500, master_seed=0):
    print(f"n={n:>6}  median |tau - tau_r| = {med:.5f}  x sqrt(n) = {med * np.sqrt(n):.3f}")

# %% [markdown]
# Central limit: `sqrt(n) (tau - tau_r)` is approximately normal with variance
# `sigma^2 r / mu^3`, here `0.25`.

# %%
res = clt_check(Poisson(1.0), 10_000, 0.25, 2000, master_seed=0)
print(res)

# %% [markdown]
# Replication `i` always uses stream `(seed, i)`, so thread count never changes
# the numbers.

# %%
a = hitting_times(Poisson(1.0), 100, 0.25, 1000, master_seed=3, workers=1)
b = hitting_times(Poisson(1.0), 100, 0.25, 1000, master_seed=3, workers=4)
print("identical:", np.array_equal(a, b))
