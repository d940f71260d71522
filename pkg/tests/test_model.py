import numpy as np
import pytest
from numpy.testing import assert_allclose

from genmargin.lp import detect_degeneracy, dual_value_range, solve_lp
from genmargin.model import (
    ModelError,
    SystemParams,
    build_lrmc_dual,
    build_lrmc_primal,
    build_srmc_dual,
    build_srmc_primal,
    extract_decision,
    extract_duals,
    solve_lrmc,
)


def canonical(cl=200.0, d1=2000.0, d2=8000.0):
    return SystemParams.from_values(
        ci_r=60, cp_r=1, m_r=3000, ci_f=82, cp_f=20, m_f=4000,
        cl=cl, d1=d1, d2=d2,
    )


def random_valid_params(rng):
    while True:
        ci_r = rng.uniform(5, 100)
        ci_f = ci_r * rng.uniform(1.05, 3.0)
        cp_r = rng.uniform(0.5, 20)
        cp_f = cp_r * rng.uniform(1.05, 3.0)
        m_r = rng.uniform(500, 5000)
        m_f = rng.uniform(500, 5000)
        cl = rng.uniform(1, 400)
        d1 = rng.uniform(0, 2 * (m_r + m_f))
        d2 = rng.uniform(0, 2 * (m_r + m_f))
        try:
            return SystemParams.from_values(ci_r, cp_r, m_r, ci_f, cp_f, m_f,
                                            cl, d1, d2)
        except ModelError:
            continue


class TestParams:
    def test_cost_ordering_enforced(self):
        with pytest.raises(ModelError):
            SystemParams.from_values(82, 1, 3000, 60, 20, 4000, 200, 1, 2)
        with pytest.raises(ModelError):
            SystemParams.from_values(60, 20, 3000, 82, 1, 4000, 200, 1, 2)

    def test_lifetime_pinned_at_two(self):
        from genmargin.model import GeneratorTech
        with pytest.raises(ModelError):
            GeneratorTech("r", 60, 1, 3000, lifetime=3)


class TestLrmcPrimal:
    def test_canonical_objective_vector(self):
        p = build_lrmc_primal(canonical(cl=80.0, d2=4000.0))
        assert_allclose(p.c, [60, 60, 82, 82, 1, 1, 20, 20, 80, 80])
        assert p.relations == ("=", "=", ">=", ">=", ">=", ">=",
                               ">=", ">=", ">=", ">=")

    def test_group3_objective_value(self):
        # Frozen by hand: D1*(CI_r + 2 CP_r) + (D2 - D1)*(CI_r + CP_r)
        #              = 2000*62 + 2000*61 = 246000
        prob = build_lrmc_primal(canonical(cl=80.0, d2=4000.0))
        sol = solve_lp(prob)
        assert_allclose(sol.objective, 246000.0, rtol=1e-10)

    def test_zero_demand(self):
        prob = build_lrmc_primal(canonical(d1=0.0, d2=0.0))
        sol = solve_lp(prob)
        assert_allclose(sol.objective, 0.0, atol=1e-9)
        assert_allclose(sol.x, np.zeros(10), atol=1e-9)

    def test_equal_caps_mirror_bound_rows(self):
        params = SystemParams.from_values(60, 1, 3500, 82, 20, 3500, 200, 1000, 2000)
        prob = build_lrmc_primal(params)
        assert_allclose(prob.b[6:], [-3500] * 4)


class TestLrmcDual:
    def test_loadshed_row_is_price_cap(self):
        prob = build_lrmc_dual(canonical())
        i = prob.row_labels.index("L_1")
        row = prob.A[i]
        assert_allclose(row, np.eye(10)[0])
        assert_allclose(prob.b[i], 200.0)

    def test_duality_group6(self):
        params = canonical()   # d2 = 8000, cl = 200 -> fossil marginal regime
        zp = solve_lp(build_lrmc_primal(params)).objective
        zd = solve_lp(build_lrmc_dual(params)).objective
        assert_allclose(zp, zd, rtol=1e-9)

    def test_duality_randomized(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            params = random_valid_params(rng)
            zp = solve_lp(build_lrmc_primal(params)).objective
            zd = solve_lp(build_lrmc_dual(params)).objective
            assert abs(zp - zd) <= 1e-8 * (1 + abs(zp))

    def test_zero_demand_dual(self):
        assert_allclose(solve_lp(build_lrmc_dual(canonical(d1=0, d2=0))).objective,
                        0.0, atol=1e-9)


class TestSrmc:
    def test_same_optimum_as_lrmc(self):
        rng = np.random.default_rng(1)
        for _ in range(30):
            params = random_valid_params(rng)
            lr = solve_lrmc(params)
            srmc = solve_lp(build_srmc_primal(params, lr.decision))
            assert abs(srmc.objective - lr.objective) <= 1e-8 * (1 + abs(lr.objective))

    def test_group3_degenerate_at_zero_epsilon(self):
        params = canonical(cl=80.0, d2=4000.0)
        lr = solve_lrmc(params)
        prob = build_srmc_primal(params, lr.decision, epsilon=0.0)
        sol = solve_lp(prob)
        rep = detect_degeneracy(prob, sol)
        assert rep.primal_degenerate
        assert rep.dual_multiple[0]       # balance_1 dual is an interval
        lo, hi = dual_value_range(prob, "balance_1")
        assert_allclose([lo, hi], [1.0, 80.0], atol=1e-7)

    def test_group3_interval_against_vertex_enumeration(self):
        # independent route: enumerate the optimal dual vertices outright
        from lp_oracle import brute_force_dual_range
        params = canonical(cl=80.0, d2=4000.0)
        lr = solve_lrmc(params)
        prob = build_srmc_primal(params, lr.decision, epsilon=0.0)
        for row in (0, 1):
            lo, hi = brute_force_dual_range(prob.c, prob.A, prob.relations,
                                            prob.b, row=row)
            assert_allclose([lo, hi], [1.0, 80.0], atol=1e-7)
            assert_allclose(dual_value_range(prob, row), [lo, hi], atol=1e-7)

    def test_group3_epsilon_resolves(self):
        params = canonical(cl=80.0, d2=4000.0)
        lr = solve_lrmc(params)
        prob = build_srmc_primal(params, lr.decision, epsilon=1e-3)
        sol = solve_lp(prob)
        assert_allclose(sol.duals[0], 1.0, atol=1e-9)   # off-peak price = CP_r
        lo, hi = dual_value_range(prob, "balance_1")
        assert_allclose([lo, hi], [1.0, 1.0], atol=1e-9)

    def test_no_capacity_full_shed(self):
        params = canonical()
        prob = build_srmc_primal(params, (0, 0, 0, 0), epsilon=0.0)
        sol = solve_lp(prob)
        assert_allclose(sol.duals[:2], [200.0, 200.0])
        assert_allclose(sol.objective, 200.0 * (2000 + 8000))

    def test_negative_inputs_rejected(self):
        params = canonical()
        with pytest.raises(ModelError):
            build_srmc_primal(params, (-1, 0, 0, 0))
        with pytest.raises(ModelError):
            build_srmc_primal(params, (0, 0, 0, 0), epsilon=-1e-9)

    def test_srmc_dual_matches(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            params = random_valid_params(rng)
            lr = solve_lrmc(params)
            zp = solve_lp(build_srmc_primal(params, lr.decision)).objective
            zd = solve_lp(build_srmc_dual(params, lr.decision)).objective
            assert abs(zp - zd) <= 1e-8 * (1 + abs(zp))


class TestExtraction:
    def test_group3_decision_and_duals(self):
        params = canonical(cl=80.0, d2=4000.0)
        lr = solve_lrmc(params)
        d = lr.decision
        assert_allclose(
            [d.i_r1, d.i_r2, d.i_f1, d.i_f2], [2000, 2000, 0, 0], atol=1e-7)
        assert_allclose([lr.duals.lam_1, lr.duals.lam_2], [1.0, 61.0], atol=1e-9)

    def test_group1_full_shed(self):
        params = canonical(cl=20.0, d2=4000.0)   # CL below every option
        lr = solve_lrmc(params)
        d = lr.decision
        assert_allclose([d.l_1, d.l_2], [2000, 4000], atol=1e-7)
        assert_allclose([lr.duals.lam_1, lr.duals.lam_2], [20.0, 20.0], atol=1e-9)

    def test_zero_demand_extraction(self):
        lr = solve_lrmc(canonical(d1=0, d2=0))
        assert_allclose(lr.decision.as_vector(), np.zeros(10), atol=1e-9)

    def test_wrong_shape_rejected(self):
        from genmargin.lp import LinearProgram
        p = LinearProgram(sense="min", c=[1.0], A=[[1.0]], relations=(">=",), b=[1.0])
        sol = solve_lp(p)
        with pytest.raises(ModelError):
            extract_decision(sol)
        with pytest.raises(ModelError):
            extract_duals(sol)

    def test_roundtrip_feasible_randomized(self):
        # build -> solve -> extract keeps every decision invariant, over
        # the whole valid parameter space (no ladder assumption needed)
        rng = np.random.default_rng(3)
        for _ in range(1000):
            params = random_valid_params(rng)
            lr = solve_lrmc(params, canonical=False)
            assert lr.decision.is_feasible(params)
            assert lr.duals.max_dual_violation(params) <= 1e-6

    def test_objective_monotone_in_demand(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            params = random_valid_params(rng)
            z = solve_lrmc(params).objective
            bumped = SystemParams.from_values(
                params.ci_r, params.cp_r, params.m_r, params.ci_f,
                params.cp_f, params.m_f, params.cl,
                params.d1 + 50.0, params.d2,
            )
            assert solve_lrmc(bumped).objective >= z - 1e-7
