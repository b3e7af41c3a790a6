from __future__ import annotations

import numpy as np
import pytest

from ldchoquet.indices import (
    breakpoint_average_weights,
    importance_profile,
    interaction,
    interaction_profile,
    shapley,
)
from ldchoquet.model import LevelDependentCapacity, MobiusCapacity, Scale

from gen import random_ldc, random_scale, random_two_additive
from oracles import interaction_mu_form, shapley_by_orderings, shapley_mu_form

TOL = 1e-9
MP = ("M", "Ph")


def cap2(w_m, w_ph):
    return MobiusCapacity(MP, {"M": w_m, "Ph": w_ph}, {frozenset(MP): 1.0 - w_m - w_ph})


def single_interval(c):
    return LevelDependentCapacity("interval", Scale((0.0, 30.0)), (c,))


class TestShapley:
    def test_additive_capacity(self):
        ldc = single_interval(MobiusCapacity(MP, {"M": 0.3, "Ph": 0.7}))
        assert shapley(ldc, "M") == pytest.approx(0.3, abs=TOL)
        assert shapley(ldc, "Ph") == pytest.approx(0.7, abs=TOL)

    def test_against_ordering_oracle(self):
        c = MobiusCapacity(MP, {"M": 0.6, "Ph": 0.7}, {frozenset(MP): -0.3})
        ldc = single_interval(c)
        assert shapley(ldc, "M") == pytest.approx(0.45, abs=TOL)
        assert shapley(ldc, "Ph") == pytest.approx(0.55, abs=TOL)
        assert shapley(ldc, "M") == pytest.approx(
            shapley_by_orderings(c.mu, MP, "M"), abs=TOL
        )

    def test_equal_lengths_average(self):
        # per-interval importance values 0.3 and 0.5 average to 0.4
        scale = Scale((0.0, 15.0, 30.0))
        ldc = LevelDependentCapacity(
            "interval",
            scale,
            (
                MobiusCapacity(MP, {"M": 0.3, "Ph": 0.7}),
                MobiusCapacity(MP, {"M": 0.5, "Ph": 0.5}),
            ),
        )
        assert shapley(ldc, "M", interval=1) == pytest.approx(0.3, abs=TOL)
        assert shapley(ldc, "M", interval=2) == pytest.approx(0.5, abs=TOL)
        assert shapley(ldc, "M") == pytest.approx(0.4, abs=TOL)

    def test_closed_form_equals_mu_form_brute_force(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            n = int(rng.integers(2, 7))
            crits = tuple(f"c{i}" for i in range(n))
            c = random_two_additive(rng, crits)
            ldc = LevelDependentCapacity("interval", Scale((0.0, 1.0)), (c,))
            i = crits[int(rng.integers(0, n))]
            assert shapley(ldc, i) == pytest.approx(shapley_mu_form(c.mu, crits, i), abs=TOL)

    def test_unknown_criterion(self):
        with pytest.raises(ValueError):
            shapley(single_interval(cap2(0.4, 0.4)), "Q")

    def test_scope_conflict(self):
        with pytest.raises(ValueError, match="at most one"):
            shapley(single_interval(cap2(0.4, 0.4)), "M", t=1.0, interval=1)

    def test_out_of_range_scope(self):
        ldc = single_interval(cap2(0.4, 0.4))
        with pytest.raises(ValueError):
            shapley(ldc, "M", t=31.0)
        with pytest.raises(ValueError):
            shapley(ldc, "M", interval=2)


class TestInteraction:
    def test_additive_zero(self):
        ldc = single_interval(MobiusCapacity(MP, {"M": 0.3, "Ph": 0.7}))
        assert interaction(ldc, "M", "Ph") == 0.0
        assert interaction(ldc, "M", "Ph", interval=1) == 0.0

    def test_symmetric_cancellation(self):
        scale = Scale((0.0, 15.0, 30.0))
        ldc = LevelDependentCapacity("interval", scale, (cap2(0.4, 0.4), cap2(0.6, 0.6)))
        assert interaction(ldc, "M", "Ph", interval=1) == pytest.approx(0.2, abs=TOL)
        assert interaction(ldc, "M", "Ph", interval=2) == pytest.approx(-0.2, abs=TOL)
        assert interaction(ldc, "M", "Ph") == pytest.approx(0.0, abs=TOL)

    def test_against_mu_form_oracle(self):
        c = MobiusCapacity(MP, {"M": 0.6, "Ph": 0.7}, {frozenset(MP): -0.3})
        ldc = single_interval(c)
        assert interaction(ldc, "M", "Ph") == pytest.approx(-0.3, abs=TOL)
        assert interaction(ldc, "M", "Ph") == pytest.approx(
            interaction_mu_form(c.mu, MP, "M", "Ph"), abs=TOL
        )

    def test_mu_form_oracle_general(self):
        rng = np.random.default_rng(4)
        for _ in range(30):
            n = int(rng.integers(2, 6))
            crits = tuple(f"c{i}" for i in range(n))
            c = random_two_additive(rng, crits)
            ldc = LevelDependentCapacity("interval", Scale((0.0, 1.0)), (c,))
            i, j = crits[0], crits[1]
            assert interaction(ldc, i, j) == pytest.approx(
                interaction_mu_form(c.mu, crits, i, j), abs=TOL
            )

    def test_same_criterion_rejected(self):
        with pytest.raises(ValueError):
            interaction(single_interval(cap2(0.4, 0.4)), "M", "M")

    def test_sign_semantics(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            scale = random_scale(rng, 2)
            ldc = random_ldc(rng, MP, scale, "interval")
            for r in (1, 2):
                coeff = ldc.capacity_for_interval(r).pairs.get(frozenset(MP), 0.0)
                value = interaction(ldc, "M", "Ph", interval=r)
                assert value == pytest.approx(coeff, abs=TOL)
                assert (value > 0) == (coeff > 0)


class TestEfficiency:
    def test_shapley_sums_to_one(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            n = int(rng.integers(2, 6))
            crits = tuple(f"c{i}" for i in range(n))
            variant = "interval" if rng.random() < 0.5 else "piecewise_linear"
            scale = random_scale(rng, int(rng.integers(1, 5)))
            ldc = random_ldc(rng, crits, scale, variant)
            for t in rng.uniform(scale.alpha, scale.beta, 20):
                total = sum(shapley(ldc, c, t=float(t)) for c in crits)
                assert total == pytest.approx(1.0, abs=TOL)


class TestPiecewiseScopes:
    def test_level_value_is_breakpoint_blend(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            scale = random_scale(rng, 3)
            ldc = random_ldc(rng, MP, scale, "piecewise_linear")
            t = float(rng.uniform(scale.alpha, scale.beta))
            r = scale.interval_of(t)
            lo, hi = scale.breakpoints[r - 1], scale.breakpoints[r]
            lam = (hi - t) / (hi - lo)
            for c in MP:
                expected = lam * ldc.capacities[r - 1].shapley(c) + (1 - lam) * ldc.capacities[r].shapley(c)
                assert shapley(ldc, c, t=t) == pytest.approx(expected, abs=TOL)

    def test_comprehensive_is_exact_integral(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            scale = random_scale(rng, int(rng.integers(1, 5)))
            ldc = random_ldc(rng, MP, scale, "piecewise_linear")
            ts = np.linspace(scale.alpha, scale.beta, 20001)
            values = np.array([shapley(ldc, "M", t=float(t)) for t in ts])
            trapezoid = getattr(np, "trapezoid", getattr(np, "trapz", None))
            numeric = trapezoid(values, ts) / (scale.beta - scale.alpha)
            assert shapley(ldc, "M") == pytest.approx(numeric, abs=1e-6)

    def test_breakpoint_weights_sum_to_one(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            scale = random_scale(rng, int(rng.integers(1, 6)))
            assert sum(breakpoint_average_weights(scale)) == pytest.approx(1.0, abs=TOL)

    def test_interval_scope_membership(self):
        scale = Scale((0.0, 10.0, 30.0))
        ldc = LevelDependentCapacity("interval", scale, (cap2(0.7, 0.1), cap2(0.1, 0.7)))
        # beta maps to the last interval; interior breakpoint to its right
        assert shapley(ldc, "M", t=30.0) == pytest.approx(shapley(ldc, "M", interval=2))
        assert shapley(ldc, "M", t=10.0) == pytest.approx(shapley(ldc, "M", interval=2))
        assert shapley(ldc, "M", t=9.999) == pytest.approx(shapley(ldc, "M", interval=1))


class TestProfiles:
    def test_importance_profile_consistency(self):
        scale = Scale((0.0, 15.0, 30.0))
        ldc = LevelDependentCapacity("interval", scale, (cap2(0.3, 0.5), cap2(0.5, 0.3)))
        profile = importance_profile(ldc)
        assert profile.per_level["M"] == pytest.approx((0.4, 0.6))
        assert profile.comprehensive["M"] == pytest.approx(shapley(ldc, "M"))
        assert profile.level_labels == ("[0, 15[", "[15, 30]")

    def test_interaction_profile_consistency(self):
        scale = Scale((0.0, 15.0, 30.0))
        ldc = LevelDependentCapacity("interval", scale, (cap2(0.4, 0.4), cap2(0.6, 0.6)))
        profile = interaction_profile(ldc)
        key = tuple(sorted(MP))
        assert profile.per_level[key] == pytest.approx((0.2, -0.2))
        assert profile.comprehensive[key] == pytest.approx(0.0, abs=TOL)
