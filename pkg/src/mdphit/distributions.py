"""Increment laws for the random walk.

Each law exposes its moments, the cumulant generating function
``Lambda(a) = log E exp(a X)`` with derivatives on the effective domain, the
convex conjugate ``Lambda*(x) = sup_a {a x - Lambda(a)}`` and a sampler driven
by an explicit :class:`numpy.random.Generator`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate, special

__all__ = [
    "ConvergenceFailure",
    "DistKind",
    "DistributionSpec",
    "Exponential",
    "Poisson",
    "Normal",
    "ShiftedBernoulli",
    "TableDiscrete",
    "AssumptionWitness",
    "AssumptionReport",
    "make_distribution",
    "random_stream",
    "sample",
    "cgf",
    "legendre",
    "legendre_grid_search",
    "check_assumptions",
]

INF = math.inf

# residual target for Lambda'(a) = x, relative to max(1, |x|)
LEGENDRE_RTOL = 1e-10
LEGENDRE_MAXITER = 200
# doubling steps allowed while bracketing; covers the float range
BRACKET_MAXITER = 2100

THETA_GRID = tuple(round(0.1 * k, 1) for k in range(1, 11))
V_GRID = (1.1, 1.5, 2.0)


class ConvergenceFailure(RuntimeError):
    """The conjugate root-finder did not reach its residual target."""


class DistKind(enum.Enum):
    EXPONENTIAL = "exponential"
    POISSON = "poisson"
    NORMAL = "normal"
    BERNOULLI = "bernoulli"
    TABLE = "table"


def random_stream(master_seed: int, index: int = 0) -> np.random.Generator:
    """Independent generator for stream ``index`` under ``master_seed``.

    Streams are derived by hashing ``(master_seed, index)`` through
    :class:`numpy.random.SeedSequence`, so no state is shared between indices
    and any index can be regenerated in isolation.
    """
    seq = np.random.SeedSequence(int(master_seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(seq))


class DistributionSpec:
    """Base class for an increment law with ``mu > 0`` and ``sigma2 > 0``."""

    kind: DistKind

    # -- moments --------------------------------------------------------
    @property
    def mu(self) -> float:
        raise NotImplementedError

    @property
    def sigma2(self) -> float:
        raise NotImplementedError

    @property
    def lambda_domain(self) -> tuple[float, float]:
        """Open interval ``(a_lo, a_hi)`` on which ``Lambda`` is finite."""
        return (-INF, INF)

    @property
    def slope_range(self) -> tuple[float, float]:
        """Open interval swept by ``Lambda'`` over the domain."""
        return (-INF, INF)

    # -- cumulant generating function ----------------------------------
    def cgf(self, a: float) -> float:
        raise NotImplementedError

    def dcgf(self, a: float) -> float:
        raise NotImplementedError

    def d2cgf(self, a: float) -> float:
        raise NotImplementedError

    def legendre_closed(self, x: float) -> Optional[float]:
        """Closed-form conjugate, or ``None`` when the law has none."""
        return None

    def _edge_conjugate(self, x: float) -> float:
        """Conjugate at a finite endpoint of :attr:`slope_range`."""
        return INF

    def exp_moment(self, theta: float, v: float) -> float:
        """``E exp(theta |X|^v)``, possibly ``inf``."""
        raise NotImplementedError

    # -- sampling -------------------------------------------------------
    def sample(self, rng: np.random.Generator, size=None):
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError

    def _check_moments(self) -> None:
        if not self.mu > 0:
            raise ValueError(f"{self.kind.value}: mean must be positive, got {self.mu}")
        if not self.sigma2 > 0:
            raise ValueError(f"{self.kind.value}: degenerate law (variance {self.sigma2})")


@dataclass(frozen=True)
class Exponential(DistributionSpec):
    rate: float = 1.0
    kind = DistKind.EXPONENTIAL

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError(f"exponential rate must be positive, got {self.rate}")
        self._check_moments()

    @property
    def mu(self):
        return 1.0 / self.rate

    @property
    def sigma2(self):
        return 1.0 / self.rate**2

    @property
    def lambda_domain(self):
        return (-INF, self.rate)

    @property
    def slope_range(self):
        return (0.0, INF)

    def cgf(self, a):
        if a >= self.rate:
            return INF
        return -math.log1p(-a / self.rate)

    def dcgf(self, a):
        return 1.0 / (self.rate - a) if a < self.rate else INF

    def d2cgf(self, a):
        d = self.rate - a
        return 1.0 / (d * d) if a < self.rate else INF

    def legendre_closed(self, x):
        if x <= 0:
            return INF
        lx = self.rate * x
        return lx - 1.0 - math.log(lx)

    def exp_moment(self, theta, v):
        if v > 1:
            return INF
        if v == 1:
            return self.rate / (self.rate - theta) if theta < self.rate else INF
        val, _ = integrate.quad(
            lambda x: self.rate * math.exp(theta * x**v - self.rate * x), 0, INF
        )
        return val

    def sample(self, rng, size=None):
        return rng.exponential(1.0 / self.rate, size)

    def params(self):
        return {"rate": self.rate}


@dataclass(frozen=True)
class Poisson(DistributionSpec):
    rate: float = 1.0
    kind = DistKind.POISSON

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError(f"poisson rate must be positive, got {self.rate}")
        self._check_moments()

    @property
    def mu(self):
        return float(self.rate)

    @property
    def sigma2(self):
        return float(self.rate)

    @property
    def slope_range(self):
        return (0.0, INF)

    def cgf(self, a):
        return self.rate * math.expm1(a) if a < 709 else INF

    def dcgf(self, a):
        return self.rate * math.exp(a) if a < 709 else INF

    d2cgf = dcgf

    def legendre_closed(self, x):
        if x < 0:
            return INF
        if x == 0:
            return float(self.rate)
        return x * math.log(x / self.rate) - x + self.rate

    def _edge_conjugate(self, x):
        return float(self.rate)

    def exp_moment(self, theta, v):
        return _integer_series(
            lambda k: -self.rate + k * math.log(self.rate) - special.gammaln(k + 1),
            theta,
            v,
            mode=int(self.rate),
        )

    def sample(self, rng, size=None):
        out = rng.poisson(self.rate, size)
        return float(out) if size is None else out.astype(float)

    def params(self):
        return {"rate": self.rate}


@dataclass(frozen=True)
class Normal(DistributionSpec):
    mean: float = 1.0
    std: float = 1.0
    kind = DistKind.NORMAL

    def __post_init__(self):
        if not self.std > 0:
            raise ValueError(f"normal std must be positive, got {self.std}")
        self._check_moments()

    @property
    def mu(self):
        return float(self.mean)

    @property
    def sigma2(self):
        return float(self.std) ** 2

    def cgf(self, a):
        return self.mean * a + 0.5 * self.sigma2 * a * a

    def dcgf(self, a):
        return self.mean + self.sigma2 * a

    def d2cgf(self, a):
        return self.sigma2

    def legendre_closed(self, x):
        return (x - self.mean) ** 2 / (2.0 * self.sigma2)

    def exp_moment(self, theta, v):
        s2 = self.sigma2
        if v > 2:
            return INF
        if v == 2:
            if 2.0 * theta * s2 >= 1.0:
                return INF
            q = 1.0 - 2.0 * theta * s2
            return math.exp(theta * self.mean**2 / q) / math.sqrt(q)
        logc = -0.5 * math.log(2.0 * math.pi * s2)

        def integrand(x):
            return math.exp(theta * abs(x) ** v - (x - self.mean) ** 2 / (2 * s2) + logc)

        left, _ = integrate.quad(integrand, -INF, 0.0)
        right, _ = integrate.quad(integrand, 0.0, INF)
        return left + right

    def sample(self, rng, size=None):
        return rng.normal(self.mean, self.std, size)

    def params(self):
        return {"mean": self.mean, "std": self.std}


@dataclass(frozen=True)
class TableDiscrete(DistributionSpec):
    """Finitely supported law; every quantity is an exact finite sum."""

    values: tuple = ()
    probs: tuple = ()
    kind = DistKind.TABLE
    _v: np.ndarray = field(init=False, repr=False, compare=False)
    _logp: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        p = np.asarray(self.probs, dtype=float)
        if v.ndim != 1 or v.shape != p.shape or v.size == 0:
            raise ValueError("values and probs must be equal-length non-empty sequences")
        if np.any(p < 0):
            raise ValueError("probabilities must be nonnegative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
        keep = p > 0
        object.__setattr__(self, "values", tuple(float(x) for x in self.values))
        object.__setattr__(self, "probs", tuple(float(x) for x in self.probs))
        object.__setattr__(self, "_v", v[keep])
        object.__setattr__(self, "_logp", np.log(p[keep]))
        self._check_moments()

    @property
    def _p(self):
        return np.exp(self._logp)

    @property
    def mu(self):
        return float(np.dot(self._p, self._v))

    @property
    def sigma2(self):
        return float(np.dot(self._p, (self._v - self.mu) ** 2))

    @property
    def slope_range(self):
        return (float(self._v.min()), float(self._v.max()))

    def _weights(self, a):
        z = a * self._v + self._logp
        return z, special.softmax(z)

    def cgf(self, a):
        if a == 0:
            return 0.0
        z, _ = self._weights(a)
        return float(special.logsumexp(z))

    def dcgf(self, a):
        _, w = self._weights(a)
        return float(np.dot(w, self._v))

    def d2cgf(self, a):
        _, w = self._weights(a)
        m = np.dot(w, self._v)
        return float(np.dot(w, (self._v - m) ** 2))

    def _edge_conjugate(self, x):
        # mass at the extreme atom
        return float(-special.logsumexp(self._logp[self._v == x]))

    def exp_moment(self, theta, v):
        return float(np.dot(self._p, np.exp(theta * np.abs(self._v) ** v)))

    def sample(self, rng, size=None):
        return rng.choice(self._v, size=size, p=self._p)

    def params(self):
        return {"values": self.values, "probs": self.probs}


@dataclass(frozen=True)
class ShiftedBernoulli(TableDiscrete):
    """``offset + B`` with ``B ~ Bernoulli(p)``."""

    values: tuple = field(init=False, default=())
    probs: tuple = field(init=False, default=())
    p: float = 0.5
    offset: float = 0.0
    kind = DistKind.BERNOULLI

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise ValueError(f"bernoulli p must lie in (0, 1), got {self.p}")
        object.__setattr__(self, "values", (self.offset, self.offset + 1.0))
        object.__setattr__(self, "probs", (1.0 - self.p, self.p))
        super().__post_init__()

    def params(self):
        return {"p": self.p, "offset": self.offset}


_KINDS = {
    "exponential": Exponential,
    "poisson": Poisson,
    "normal": Normal,
    "bernoulli": ShiftedBernoulli,
    "table": TableDiscrete,
}


def make_distribution(kind: str, **params) -> DistributionSpec:
    """Build a law from its kind name and keyword parameters."""
    try:
        cls = _KINDS[kind.lower()]
    except KeyError:
        raise ValueError(f"unknown distribution kind {kind!r}; expected one of {sorted(_KINDS)}")
    return cls(**params)


def _integer_series(logpmf, theta, v, mode=0, kmax=10**6):
    """``E exp(theta X^v)`` for a law on the nonnegative integers.

    Divergence is detected by a growth test on the log-terms at geometrically
    spaced indices; a single term above ``e^700`` already makes the sum
    numerically infinite.
    """

    def logterm(k):
        return theta * float(k) ** v + logpmf(k)

    for j in range(1, int(300 / max(v, 1.0)) + 1):
        if logterm(10.0**j) > 700.0:
            return INF
    total = []
    k = 0
    while k < kmax:
        lt = logterm(k)
        total.append(lt)
        if k > mode and lt < max(total) - 40.0:
            break
        k += 1
    return float(math.exp(special.logsumexp(total)))


# ---------------------------------------------------------------------------
# module-level operations


def sample(dist: DistributionSpec, rng: np.random.Generator) -> float:
    """One draw of ``X_1`` from ``dist`` using ``rng``."""
    return float(dist.sample(rng))


def cgf(dist: DistributionSpec, a: float) -> float:
    """``Lambda(a)``; ``inf`` outside the effective domain."""
    lo, hi = dist.lambda_domain
    if not lo < a < hi:
        return INF
    return dist.cgf(a)


def _solve_slope(dist: DistributionSpec, x: float) -> float:
    """Root of ``Lambda'(a) = x`` by Newton steps safeguarded with bisection."""
    tol = LEGENDRE_RTOL * max(1.0, abs(x))
    # iterate to a relative residual so small |x| still gets an accurate root
    target = min(tol, LEGENDRE_RTOL * 1e-2 * abs(x)) if x != 0 else tol
    lo_dom, hi_dom = dist.lambda_domain
    f0 = dist.dcgf(0.0) - x
    if abs(f0) <= target:
        return 0.0

    # bracket [lo, hi] with Lambda'(lo) < x < Lambda'(hi)
    if f0 < 0:
        lo, hi = 0.0, None
        step = 1.0
        for _ in range(BRACKET_MAXITER):
            cand = lo + step if math.isinf(hi_dom) else lo + 0.5 * (hi_dom - lo)
            if cand >= hi_dom or cand == lo:
                break
            if dist.dcgf(cand) - x >= 0:
                hi = cand
                break
            lo, step = cand, 2.0 * step
    else:
        lo, hi = None, 0.0
        step = 1.0
        for _ in range(BRACKET_MAXITER):
            cand = hi - step if math.isinf(lo_dom) else hi - 0.5 * (hi - lo_dom)
            if cand <= lo_dom or cand == hi:
                break
            if dist.dcgf(cand) - x <= 0:
                lo = cand
                break
            hi, step = cand, 2.0 * step
    if lo is None or hi is None:
        raise ConvergenceFailure(f"could not bracket Lambda'(a) = {x!r} on {dist.lambda_domain}")

    a = 0.5 * (lo + hi)
    for _ in range(LEGENDRE_MAXITER):
        g = dist.dcgf(a) - x
        if abs(g) <= target:
            return a
        if g < 0:
            lo = a
        else:
            hi = a
        h = dist.d2cgf(a)
        nxt = a - g / h if h > 0 else None
        if nxt is None or not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if nxt == a:
            break
        a = nxt
    g = dist.dcgf(a) - x
    if abs(g) <= tol:
        return a
    raise ConvergenceFailure(
        f"Lambda'(a) = {x!r}: residual {g:.3e} exceeds {tol:.1e} after {LEGENDRE_MAXITER} iterations"
    )


def legendre(dist: DistributionSpec, x: float, method: str = "auto") -> float:
    """Convex conjugate ``Lambda*(x)``.

    ``method="numeric"`` always solves ``Lambda'(a) = x`` by root finding,
    ``"closed"`` uses the law's closed form, ``"auto"`` prefers the closed form
    when one exists. Values outside the closure of the range of ``Lambda'`` are
    ``inf``; finite endpoints of that range get their limiting value.
    """
    if method not in ("auto", "numeric", "closed"):
        raise ValueError(f"unknown method {method!r}")
    if method != "numeric":
        val = dist.legendre_closed(x)
        if val is not None:
            return val
        if method == "closed":
            raise NotImplementedError(f"{dist.kind.value} has no closed-form conjugate")
    lo, hi = dist.slope_range
    if x < lo or x > hi:
        return INF
    if x == lo or x == hi:
        return dist._edge_conjugate(x)
    a = _solve_slope(dist, x)
    return max(a * x - dist.cgf(a), 0.0)


def legendre_grid_search(dist: DistributionSpec, x: float, a_lo: float = -50.0,
                         a_hi: float = 50.0, step: float = 1e-6, points: int = 2001) -> float:
    """Brute-force ``sup_a {a x - Lambda(a)}`` over grids of ``a``.

    Independent check of :func:`legendre`: no derivative of ``Lambda`` is used.
    The search scans ``points`` equally spaced values over ``(a_lo, a_hi)``
    clipped to the effective domain, then repeatedly rescans the two cells
    around the best point until the spacing reaches ``step``. Concavity of the
    objective keeps the maximiser inside each zoom window.
    """
    dlo, dhi = dist.lambda_domain
    lo, hi = max(a_lo, dlo), min(a_hi, dhi)

    def objective(grid):
        return np.array([a * x - dist.cgf(a) for a in grid])

    best = -INF
    while True:
        spacing = max((hi - lo) / (points - 1), step)
        grid = np.arange(lo, hi + 0.5 * spacing, spacing)
        grid = grid[(grid > dlo) & (grid < dhi)]
        vals = objective(grid)
        i = int(np.argmax(vals))
        best = max(best, float(vals[i]))
        if spacing <= step:
            return best
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, grid.size - 1)]


@dataclass(frozen=True)
class AssumptionWitness:
    theta: float
    v: float
    b: float

    def __post_init__(self):
        if not (0 < self.theta <= 1 and self.v > 1 and self.b > 0):
            raise ValueError(f"invalid witness {self}")


@dataclass(frozen=True)
class AssumptionReport:
    """Outcome of the exponential-moment checks.

    The second check is a finite witness search over ``THETA_GRID x V_GRID``;
    a negative outcome means no witness was found there, not a disproof.
    """

    assumption1_holds: bool
    assumption1_detail: str
    assumption2_holds: bool
    assumption2_witness: Optional[AssumptionWitness]
    witnesses: tuple = ()

    def lines(self) -> list[str]:
        a1 = "holds" if self.assumption1_holds else "fails"
        out = [f"assumption1: {a1} ({self.assumption1_detail})"]
        if self.assumption2_witness is None:
            out.append("assumption2: no witness found (witness search)")
        else:
            w = self.assumption2_witness
            out.append(f"assumption2: holds (witness search: theta={w.theta!r}, v={w.v!r}, b={w.b!r})")
        out.append(f"assumption2_witnesses: {len(self.witnesses)}")
        return out


def check_assumptions(dist: DistributionSpec) -> AssumptionReport:
    """Report on finiteness of ``Lambda`` and search for an exponential-moment witness.

    The lower-boundedness clause ``sup_a {-Lambda(a)} < inf`` is not checked
    separately.
    """
    lo, hi = dist.lambda_domain
    holds1 = math.isinf(lo) and math.isinf(hi)
    if holds1:
        detail = "Λ(a) finite for all real a"
    else:
        parts = []
        if not math.isinf(hi):
            parts.append(f"Λ(a)=+inf for a≥{hi:g}")
        if not math.isinf(lo):
            parts.append(f"Λ(a)=+inf for a≤{lo:g}")
        detail = ", ".join(parts)

    found = []
    for v in V_GRID:
        for theta in THETA_GRID:
            m = dist.exp_moment(theta, v)
            if math.isfinite(m) and m > 1.0:
                found.append(AssumptionWitness(theta, v, math.log(m)))
    best = min(found, key=lambda w: w.b) if found else None
    return AssumptionReport(holds1, detail, bool(found), best, tuple(found))
