# %% [markdown]
# # Legendre transforms of increment laws
#
# The conjugate `Lambda*(x) = sup_a {a x - Lambda(a)}` of the cumulant
# generating function controls how costly it is for a walk to move at slope
# `x`. Here we compare the numeric transform with the known closed forms and
# with a derivative-free grid search.

# %%
import numpy as np

from mdphit import Exponential, Normal, Poisson, legendre
from mdphit.distributions import check_assumptions, legendre_grid_search

laws = {"Normal(1, 1)": Normal(1.0, 1.0), "Exponential(1)": Exponential(1.0), "Poisson(1)": Poisson(1.0)}
xs = np.array([0.25, 0.5, 1.0, 1.5, 2.0, 3.0])

# %% [markdown]
# All three laws have mean 1, so every transform vanishes at `x = 1` and grows
# on both sides. The growth rates differ: the Gaussian one is symmetric, the
# exponential one is cheap above the mean, and the Poisson one stays finite
# at `x = 0` (the cost of never jumping).

# %%
print(f"{'x':>6}" + "".join(f"{name:>18}" for name in laws))
for x in xs:
    print(f"{x:6.2f}" + "".join(f"{legendre(d, x, 'numeric'):18.10f}" for d in laws.values()))
print("Poisson at x=0:", legendre(Poisson(1.0), 0.0))
print("Exponential at x=0:", legendre(Exponential(1.0), 0.0))

# %% [markdown]
# Agreement with closed forms and with the grid oracle.

# %%
for name, d in laws.items():
    numeric = np.array([legendre(d, x, "numeric") for x in xs])
    closed = np.array([d.legendre_closed(x) for x in xs])
    grid = np.array([legendre_grid_search(d, x) for x in xs])
    print(f"{name:16s} |numeric-closed| {np.max(np.abs(numeric - closed)):.1e}  "
          f"|grid-closed| {np.max(np.abs(grid - closed)):.1e}")

# %% [markdown]
# Near the mean every transform is close to the Gaussian quadratic
# `(x - mu)^2 / (2 sigma^2)`, which is why the moderate deviation rate only
# depends on the first two moments.

# %%
for h in (0.2, 0.1, 0.05, 0.025):
    errs = [abs(legendre(d, 1.0 + h) - h * h / 2) for d in laws.values()]
    print(f"h={h:<6} " + "  ".join(f"{e:.2e}" for e in errs))

# %% [markdown]
# Tail conditions. The exponential law has `Lambda(a) = inf` for `a >= 1`
# and no finite `E exp(theta |X|^v)` with `v > 1`; Poisson tails are only
# slightly lighter than exponential, so they fail the `v > 1` moment too.

# %%
for name, d in laws.items():
    print(name)
    for line in check_assumptions(d).lines():
        print("   ", line)
