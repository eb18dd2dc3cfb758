import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from mdphit.distributions import (
    ConvergenceFailure,
    Exponential,
    Normal,
    Poisson,
    ShiftedBernoulli,
    TableDiscrete,
    cgf,
    check_assumptions,
    legendre,
    legendre_grid_search,
    make_distribution,
    random_stream,
    sample,
)

LAWS = [
    Normal(1.0, 1.0),
    Normal(2.0, 0.5),
    Exponential(1.0),
    Exponential(2.5),
    Poisson(1.0),
    Poisson(3.0),
    ShiftedBernoulli(0.3, 0.5),
    TableDiscrete((-1.0, 0.0, 2.0), (0.2, 0.3, 0.5)),
]
ids = [f"{d.kind.value}{i}" for i, d in enumerate(LAWS)]


class TestConstruction:
    def test_moments(self):
        assert Exponential(2.0).mu == 0.5
        assert Exponential(2.0).sigma2 == 0.25
        assert Poisson(3.0).sigma2 == 3.0
        b = ShiftedBernoulli(0.25, 1.0)
        assert b.mu == pytest.approx(1.25)
        assert b.sigma2 == pytest.approx(0.1875)

    @pytest.mark.parametrize("kind,params", [
        ("normal", {"mean": 0.0, "std": 1.0}),
        ("normal", {"mean": -1.0, "std": 1.0}),
        ("normal", {"mean": 1.0, "std": 0.0}),
        ("exponential", {"rate": 0.0}),
        ("poisson", {"rate": -1.0}),
        ("bernoulli", {"p": 0.0, "offset": 1.0}),
        ("bernoulli", {"p": 0.5, "offset": -0.5}),
        ("table", {"values": (1.0, 2.0), "probs": (0.5, 0.6)}),
        ("table", {"values": (1.0, 2.0), "probs": (1.2, -0.2)}),
        ("table", {"values": (1.0,), "probs": (1.0,)}),
    ])
    def test_invalid_laws_rejected(self, kind, params):
        with pytest.raises(ValueError):
            make_distribution(kind, **params)

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown distribution"):
            make_distribution("cauchy")

    def test_table_probability_tolerance(self):
        TableDiscrete((0.0, 3.0), (0.5, 0.5 + 5e-13))
        with pytest.raises(ValueError):
            TableDiscrete((0.0, 3.0), (0.5, 0.5 + 1e-11))

    @pytest.mark.parametrize("dist", LAWS, ids=ids)
    def test_domain_contains_zero(self, dist):
        lo, hi = dist.lambda_domain
        assert lo < 0 < hi


class TestSampling:
    def test_same_seed_same_value(self):
        a = sample(Normal(0.5, 1.0), random_stream(42, 7))
        b = sample(Normal(0.5, 1.0), random_stream(42, 7))
        assert a == b

    def test_streams_differ(self):
        a = Normal(1, 1).sample(random_stream(42, 0), 5)
        b = Normal(1, 1).sample(random_stream(42, 1), 5)
        assert not np.array_equal(a, b)

    def test_exponential_mean(self):
        x = Exponential(1.0).sample(random_stream(3), 10**6)
        assert abs(x.mean() - 1.0) < 0.01

    def test_poisson_support(self):
        x = Poisson(1.0).sample(random_stream(5), 10**4)
        assert np.all(x >= 0)
        assert np.all(x == np.round(x))

    def test_table_support(self):
        d = TableDiscrete((-1.0, 0.0, 2.0), (0.2, 0.3, 0.5))
        x = d.sample(random_stream(1), 10**4)
        assert set(np.unique(x)) <= {-1.0, 0.0, 2.0}
        assert abs(x.mean() - d.mu) < 0.05


class TestCgf:
    @pytest.mark.parametrize("dist", LAWS, ids=ids)
    def test_zero_at_origin(self, dist):
        assert cgf(dist, 0.0) == 0.0

    def test_poisson_closed_form_vs_series(self):
        # E e^{aX} = sum_k e^{ak} e^{-1} / k!
        series = sum(math.exp(k - 1.0 - math.lgamma(k + 1)) for k in range(60))
        assert cgf(Poisson(1.0), 1.0) == pytest.approx(math.e - 1, rel=1e-14)
        assert cgf(Poisson(1.0), 1.0) == pytest.approx(math.log(series), rel=1e-13)

    def test_exponential_outside_domain(self):
        assert cgf(Exponential(1.0), 1.0) == math.inf
        assert cgf(Exponential(1.0), 3.0) == math.inf

    def test_table_finite_sum(self):
        d = TableDiscrete((-1.0, 0.0, 2.0), (0.2, 0.3, 0.5))
        a = 0.7
        expected = math.log(0.2 * math.exp(-a) + 0.3 + 0.5 * math.exp(2 * a))
        assert cgf(d, a) == pytest.approx(expected, rel=1e-14)

    def test_normal_quadrature(self):
        from scipy import integrate

        d = Normal(1.5, 0.8)
        a = 0.9
        val, _ = integrate.quad(
            lambda x: math.exp(a * x) * math.exp(-(x - 1.5) ** 2 / (2 * 0.64)) / math.sqrt(2 * math.pi * 0.64),
            -20, 20,
        )
        assert cgf(d, a) == pytest.approx(math.log(val), rel=1e-10)

    @settings(max_examples=200, deadline=None)
    @given(st.sampled_from(LAWS), st.floats(-5, 5), st.floats(-5, 5), st.floats(0, 1))
    def test_convexity(self, dist, a1, a2, w):
        lo, hi = dist.lambda_domain
        a1, a2 = min(a1, 0.99 * hi), min(a2, 0.99 * hi)
        lhs = cgf(dist, w * a1 + (1 - w) * a2)
        rhs = w * cgf(dist, a1) + (1 - w) * cgf(dist, a2)
        assert lhs <= rhs + 1e-12 * max(1.0, abs(rhs))

    @pytest.mark.parametrize("dist", LAWS, ids=ids)
    def test_derivatives_match_finite_differences(self, dist):
        h = 1e-5
        for a in (-0.7, 0.0, 0.4):
            fd1 = (dist.cgf(a + h) - dist.cgf(a - h)) / (2 * h)
            fd2 = (dist.cgf(a + h) - 2 * dist.cgf(a) + dist.cgf(a - h)) / h**2
            assert dist.dcgf(a) == pytest.approx(fd1, rel=1e-7, abs=1e-9)
            assert dist.d2cgf(a) == pytest.approx(fd2, rel=1e-4, abs=1e-5)
        assert dist.dcgf(0.0) == pytest.approx(dist.mu, rel=1e-14)
        assert dist.d2cgf(0.0) == pytest.approx(dist.sigma2, rel=1e-13)


class TestLegendre:
    @pytest.mark.parametrize("dist", LAWS, ids=ids)
    def test_zero_at_mean(self, dist):
        assert legendre(dist, dist.mu, method="numeric") <= 1e-12
        assert legendre(dist, dist.mu) <= 1e-12

    @pytest.mark.parametrize("dist", LAWS, ids=ids)
    def test_positive_off_mean(self, dist):
        lo, hi = dist.slope_range
        for x in (dist.mu - 0.1, dist.mu + 0.1):
            if lo <= x <= hi:
                assert legendre(dist, x, method="numeric") > 0

    def test_exponential_at_two(self):
        oracle = legendre_grid_search(Exponential(1.0), 2.0, a_lo=-50.0, a_hi=1.0)
        assert oracle == pytest.approx(2 - 1 - math.log(2), abs=1e-10)
        assert legendre(Exponential(1.0), 2.0, method="numeric") == pytest.approx(0.3068528194400547, abs=1e-12)

    def test_poisson_negative_is_infinite(self):
        assert legendre(Poisson(1.0), -0.5) == math.inf
        assert legendre(Poisson(1.0), -0.5, method="numeric") == math.inf

    def test_boundary_values(self):
        assert legendre(Poisson(2.0), 0.0, method="numeric") == 2.0
        assert legendre(Exponential(1.0), 0.0, method="numeric") == math.inf
        d = TableDiscrete((-1.0, 0.0, 2.0), (0.2, 0.3, 0.5))
        assert legendre(d, -1.0) == pytest.approx(-math.log(0.2), rel=1e-14)
        assert legendre(d, 2.0) == pytest.approx(-math.log(0.5), rel=1e-14)
        assert legendre(d, 2.5) == math.inf
        assert legendre(d, -1.5) == math.inf

    def test_boundary_is_limit(self):
        # lower semicontinuous convention: edge value is the limit from inside
        d = Poisson(1.0)
        assert legendre(d, 1e-9, method="numeric") == pytest.approx(legendre(d, 0.0), abs=1e-7)
        t = TableDiscrete((-1.0, 0.0, 2.0), (0.2, 0.3, 0.5))
        assert legendre(t, 2.0 - 1e-7, method="numeric") == pytest.approx(legendre(t, 2.0), abs=1e-5)

    def test_closed_method_requires_closed_form(self):
        with pytest.raises(NotImplementedError):
            legendre(TableDiscrete((0.0, 2.0), (0.5, 0.5)), 1.0, method="closed")

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            legendre(Poisson(1.0), 1.0, method="newton")

    @pytest.mark.parametrize("dist", LAWS, ids=ids)
    def test_numeric_matches_grid_oracle(self, dist):
        lo, hi = dist.slope_range
        xs = [x for x in (0.2, 0.9, 1.3, 2.7) if lo < x < hi]
        for x in xs:
            assert legendre(dist, x, method="numeric") == pytest.approx(
                legendre_grid_search(dist, x), abs=1e-9)

    @settings(max_examples=300, deadline=None)
    @given(st.sampled_from(LAWS), st.floats(-4, 4), st.floats(-3, 6))
    def test_young_fenchel(self, dist, a, x):
        # roots for |x| below ~1e-300 lie outside the float range
        assume(x == 0 or abs(x) > 1e-300)
        lo, hi = dist.lambda_domain
        if not lo < a < hi:
            return
        assert a * x <= cgf(dist, a) + legendre(dist, x, method="numeric") + 1e-9

    @settings(max_examples=100, deadline=None)
    @given(st.sampled_from(LAWS), st.floats(-3, 6))
    def test_nonnegative(self, dist, x):
        assume(x == 0 or abs(x) > 1e-300)
        assert legendre(dist, x, method="numeric") >= 0

    def test_root_beyond_float_range(self):
        with pytest.raises(ConvergenceFailure):
            legendre(Exponential(1.0), 5e-324, method="numeric")
        assert legendre(Exponential(1.0), 1e-200, method="numeric") == pytest.approx(
            legendre(Exponential(1.0), 1e-200, method="closed"), rel=1e-12)

    def test_convergence_failure_raised(self, monkeypatch):
        import mdphit.distributions as dmod

        monkeypatch.setattr(dmod, "LEGENDRE_MAXITER", 2)
        with pytest.raises(ConvergenceFailure):
            legendre(Exponential(1.0), 37.0, method="numeric")


class TestAssumptions:
    def test_normal_gaussian_witness(self):
        rep = check_assumptions(Normal(1.0, 1.0))
        assert rep.assumption1_holds
        assert rep.assumption2_holds
        v2 = [w for w in rep.witnesses if w.v == 2.0]
        assert {w.theta for w in v2} == {0.1, 0.2, 0.3, 0.4}
        for w in v2:
            # E exp(theta X^2) for X ~ N(m, 1)
            q = 1 - 2 * w.theta
            assert w.b == pytest.approx(w.theta / q - 0.5 * math.log(q), rel=1e-12)

    def test_normal_fractional_power_quadrature(self):
        from scipy import integrate

        d = Normal(1.0, 1.0)
        val, _ = integrate.quad(
            lambda x: math.exp(0.3 * abs(x) ** 1.5 - (x - 1) ** 2 / 2) / math.sqrt(2 * math.pi), -40, 40,
            points=[0.0], limit=200)
        assert d.exp_moment(0.3, 1.5) == pytest.approx(val, rel=1e-8)

    def test_exponential_fails_assumption1(self):
        rep = check_assumptions(Exponential(1.0))
        assert not rep.assumption1_holds
        assert "a≥1" in rep.assumption1_detail
        assert not rep.assumption2_holds
        assert rep.assumption2_witness is None

    def test_poisson(self):
        rep = check_assumptions(Poisson(1.0))
        assert rep.assumption1_holds
        assert not rep.assumption2_holds

    def test_poisson_series_terms_grow(self):
        # partial-sum growth: log-terms eventually increase for v > 1
        theta, v = 0.1, 1.1

        def logterm(k):
            return theta * k**v - 1.0 - math.lgamma(k + 1)

        assert logterm(1e31) > logterm(1e30) > 0

    def test_poisson_series_finite_for_v_one(self):
        # E exp(theta X) = exp(lambda (e^theta - 1)) when v = 1
        d = Poisson(2.0)
        assert d.exp_moment(0.5, 1.0) == pytest.approx(math.exp(2.0 * math.expm1(0.5)), rel=1e-12)

    def test_bounded_support_holds(self):
        rep = check_assumptions(ShiftedBernoulli(0.5, 0.5))
        assert rep.assumption1_holds and rep.assumption2_holds
        assert len(rep.witnesses) == 30
        w = rep.assumption2_witness
        assert 0 < w.theta <= 1 and w.v > 1 and w.b > 0
        assert w.b == min(x.b for x in rep.witnesses)

    def test_report_lines(self):
        lines = check_assumptions(Exponential(1.0)).lines()
        assert lines[0] == "assumption1: fails (Λ(a)=+inf for a≥1)"
        assert "witness search" in lines[1]
