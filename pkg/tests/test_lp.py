import numpy as np
import pytest
from numpy.testing import assert_allclose

from genmargin.lp import (
    LinearProgram,
    LpInputError,
    IterationLimitError,
    detect_degeneracy,
    dual_value_range,
    explicit_dual,
    solve_lp,
)

from lp_oracle import brute_force_solve


def lp(sense, c, A, rel, b, lb=None, **kw):
    return LinearProgram(sense=sense, c=c, A=A, relations=rel, b=b,
                         lower_bounds=lb, **kw)


class TestBasics:
    def test_single_binding_constraint(self):
        # min x  s.t. x >= 3
        p = lp("min", [1.0], [[1.0]], (">=",), [3.0])
        sol = solve_lp(p)
        assert sol.optimal
        assert_allclose(sol.x, [3.0])
        assert_allclose(sol.duals, [1.0])
        assert_allclose(sol.objective, 3.0)

    def test_empty_feasible_set(self):
        p = lp("min", [0.0], [[1.0], [1.0]], (">=", "<="), [1.0, 0.0])
        sol = solve_lp(p)
        assert sol.status == "infeasible"

    def test_unbounded(self):
        p = lp("min", [-1.0], [[1.0]], (">=",), [0.0])
        assert solve_lp(p).status == "unbounded"

    def test_free_variable(self):
        # min y s.t. y >= -5, y free -> y = -5
        p = lp("min", [1.0], [[1.0]], (">=",), [-5.0], lb=[-np.inf])
        sol = solve_lp(p)
        assert_allclose(sol.x, [-5.0])
        assert_allclose(sol.objective, -5.0)

    def test_maximization_and_dual_signs(self):
        # max 3x + 2y s.t. 2x + y <= 10, x + y <= 8, x <= 4
        p = lp("max", [3.0, 2.0], [[2, 1], [1, 1], [1, 0]],
               ("<=", "<=", "<="), [10, 8, 4])
        sol = solve_lp(p)
        assert sol.optimal
        assert_allclose(sol.x, [2.0, 6.0])
        assert_allclose(sol.objective, 18.0)
        assert np.all(sol.duals >= -1e-9)     # <= rows of a max: nonneg duals
        assert_allclose(p.b @ sol.duals, sol.objective)

    def test_equality_rows_two_phase(self):
        # min x + y s.t. x + y = 4, x - y = 2
        p = lp("min", [1.0, 1.0], [[1, 1], [1, -1]], ("=", "="), [4, 2])
        sol = solve_lp(p)
        assert_allclose(sol.x, [3.0, 1.0])
        assert_allclose(sol.objective, 4.0)

    def test_objective_offset(self):
        p = lp("min", [1.0], [[1.0]], (">=",), [3.0])
        p2 = LinearProgram(sense="min", c=[1.0], A=[[1.0]], relations=(">=",),
                           b=[3.0], objective_offset=100.0)
        assert_allclose(solve_lp(p2).objective, solve_lp(p).objective + 100.0)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(LpInputError):
            lp("min", [1.0, 2.0], [[1.0]], (">=",), [3.0])
        with pytest.raises(LpInputError):
            lp("min", [1.0], [[1.0]], (">=", "<="), [3.0])

    def test_duplicate_labels_rejected(self):
        with pytest.raises(LpInputError):
            lp("min", [1.0, 1.0], [[1.0, 1.0]], (">=",), [1.0],
               var_labels=("a", "a"))

    def test_shifted_lower_bound(self):
        # min x s.t. x >= 1 with lb x >= 2 -> x = 2
        p = lp("min", [1.0], [[1.0]], (">=",), [1.0], lb=[2.0])
        sol = solve_lp(p)
        assert_allclose(sol.x, [2.0])


class TestDegeneracyAndRanges:
    def test_not_degenerate(self):
        p = lp("min", [1.0], [[1.0]], (">=",), [3.0])
        rep = detect_degeneracy(p, solve_lp(p))
        assert not rep.primal_degenerate
        assert rep.dual_multiple == (False,)

    def test_degenerate_basic_at_zero(self):
        # min x + y s.t. x + y >= 1, x >= 1: optimum (1, 0); one basic at 0
        p = lp("min", [1.0, 1.0], [[1, 1], [1, 0]], (">=", ">="), [1, 1])
        sol = solve_lp(p)
        assert_allclose(sol.objective, 1.0)
        rep = detect_degeneracy(p, sol)
        assert rep.primal_degenerate

    def test_requires_optimal_solution(self):
        p = lp("min", [0.0], [[1.0], [1.0]], (">=", "<="), [1.0, 0.0])
        with pytest.raises(Exception):
            detect_degeneracy(p, solve_lp(p))

    def test_trivial_range_is_point(self):
        p = lp("min", [1.0], [[1.0]], (">=",), [3.0])
        lo, hi = dual_value_range(p, 0)
        assert_allclose([lo, hi], [1.0, 1.0], atol=1e-9)

    def test_degenerate_range_has_width(self):
        # min x subject to x >= 1 twice: duals split the unit mass any way.
        p = lp("min", [1.0], [[1.0], [1.0]], (">=", ">="), [1.0, 1.0])
        lo, hi = dual_value_range(p, 0)
        assert_allclose([lo, hi], [0.0, 1.0], atol=1e-9)
        sol = solve_lp(p)
        assert lo - 1e-9 <= sol.duals[0] <= hi + 1e-9

    def test_range_contains_reported_dual(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            m, n = 3, 3
            A = rng.uniform(-1, 2, size=(m, n))
            b = rng.uniform(0.5, 3, size=m)
            c = rng.uniform(0.1, 2, size=n)
            p = lp("min", c, A, (">=",) * m, b)
            sol = solve_lp(p)
            if not sol.optimal:
                continue
            for i in range(m):
                lo, hi = dual_value_range(p, i)
                assert lo - 1e-7 <= sol.duals[i] <= hi + 1e-7


class TestAgainstBruteForce:
    def test_random_inequality_lps(self):
        rng = np.random.default_rng(42)
        n_checked = 0
        for _ in range(60):
            m = int(rng.integers(1, 4))
            n = int(rng.integers(1, 4))
            A = np.round(rng.uniform(-2, 3, size=(m + n, n)), 2)
            # box rows keep every instance bounded
            A[m:] = np.eye(n)
            rel = ("<=",) * m + ("<=",) * n
            b = np.round(rng.uniform(-1, 4, size=m + n), 2)
            b[m:] = rng.uniform(1, 5, size=n)
            c = np.round(rng.uniform(-3, 3, size=n), 2)
            p = lp("min", c, A, rel, b)
            sol = solve_lp(p)
            status, obj, _ = brute_force_solve(c, A, rel, b)
            assert sol.status == status
            if status == "optimal":
                assert_allclose(sol.objective, obj, rtol=1e-8, atol=1e-8)
                n_checked += 1
        assert n_checked > 20

    def test_solution_invariants(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            m, n = int(rng.integers(1, 5)), int(rng.integers(1, 5))
            A = rng.uniform(0.1, 2, size=(m, n))
            b = rng.uniform(0.5, 4, size=m)
            c = rng.uniform(0.1, 3, size=n)
            p = lp("min", c, A, (">=",) * m, b)
            sol = solve_lp(p)
            assert sol.optimal
            # primal feasibility residuals
            assert np.all(A @ sol.x - b >= -1e-9)
            assert np.all(sol.x >= -1e-9)
            # strong duality
            assert abs(sol.objective - b @ sol.duals) <= 1e-8 * (1 + abs(sol.objective))
            # dual feasibility: sign convention and reduced costs
            assert np.all(sol.duals >= -1e-9)
            assert np.all(sol.reduced_costs >= -1e-7)
            assert np.all(np.abs(c - sol.duals @ A - sol.reduced_costs) <= 1e-9)

    def test_mixed_relations_and_free_vars(self):
        # equality rows force the two-phase path; a free variable exercises
        # the split-column bookkeeping; box rows keep everything bounded
        rng = np.random.default_rng(17)
        n_optimal = 0
        for _ in range(80):
            n = int(rng.integers(1, 4))
            m = int(rng.integers(1, 3))
            A_main = np.round(rng.uniform(-2, 2, size=(m, n)), 2)
            rel_main = tuple(rng.choice(["<=", "=", ">="], size=m))
            b_main = np.round(rng.uniform(-2, 3, size=m), 2)
            A = np.vstack([A_main, np.eye(n), -np.eye(n)])
            rel = rel_main + ("<=",) * n + ("<=",) * n
            b = np.concatenate([b_main, rng.uniform(1, 4, size=n),
                                rng.uniform(1, 4, size=n)])
            c = np.round(rng.uniform(-2, 2, size=n), 2)
            lb = np.where(rng.uniform(size=n) < 0.4, -np.inf, 0.0)
            p = lp("min", c, A, rel, b, lb=list(lb))
            sol = solve_lp(p)
            status, obj, _ = brute_force_solve(c, A, rel, b, lower_bounds=lb)
            assert sol.status == status
            if status == "optimal":
                n_optimal += 1
                assert_allclose(sol.objective, obj, rtol=1e-8, atol=1e-8)
                resid = A @ sol.x - b
                for i, r in enumerate(rel):
                    if r == "<=":
                        assert resid[i] <= 1e-8
                    elif r == ">=":
                        assert resid[i] >= -1e-8
                    else:
                        assert abs(resid[i]) <= 1e-8
        assert n_optimal > 25

    def test_variable_permutation_invariance(self):
        rng = np.random.default_rng(11)
        A = rng.uniform(0.1, 2, size=(4, 5))
        b = rng.uniform(1, 3, size=4)
        c = rng.uniform(0.5, 2, size=5)
        p = lp("min", c, A, (">=",) * 4, b)
        z = solve_lp(p).objective
        perm = rng.permutation(5)
        p2 = lp("min", c[perm], A[:, perm], (">=",) * 4, b)
        assert_allclose(solve_lp(p2).objective, z, rtol=1e-9)


class TestAntiCycling:
    def test_beale_cycling_instance_terminates(self):
        # Classic instance on which Dantzig's rule cycles; Bland's must not.
        c = [-0.75, 150.0, -0.02, 6.0]
        A = [
            [0.25, -60.0, -0.04, 9.0],
            [0.5, -90.0, -0.02, 3.0],
            [0.0, 0.0, 1.0, 0.0],
        ]
        b = [0.0, 0.0, 1.0]
        p = lp("min", c, A, ("<=",) * 3, b)
        sol = solve_lp(p)
        assert sol.optimal
        assert_allclose(sol.objective, -0.05, atol=1e-9)

    def test_iteration_cap_raises(self):
        p = lp("min", [1.0, 1.0], [[1, 1]], (">=",), [1.0])
        with pytest.raises(IterationLimitError):
            solve_lp(p, max_iterations=0)


class TestExplicitDual:
    def test_dual_optimum_matches_primal(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            m, n = int(rng.integers(1, 4)), int(rng.integers(1, 4))
            A = rng.uniform(0.2, 2, size=(m, n))
            b = rng.uniform(0.5, 3, size=m)
            c = rng.uniform(0.1, 2, size=n)
            p = lp("min", c, A, (">=",) * m, b)
            d, _ = explicit_dual(p)
            zp = solve_lp(p).objective
            zd = solve_lp(d).objective
            assert_allclose(zp, zd, rtol=1e-8)
