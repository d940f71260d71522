"""Short-run marginal prices: detection, interval, and resolution.

With investments frozen at their optimum, a period whose capacity is
exactly exhausted makes the flow-balance dual degenerate: its coefficient
in the dual objective vanishes and the price can sit anywhere between the
marginal operating cost and the loadshed cost.  Slackening every capacity
bound by a small epsilon removes the tie; the resolved price is the
interval's lower endpoint, the marginal operating cost.

Three rules relate the long-run price of a period to its resolved
short-run price:

    lam == CP          ->  rule-CP        (srmc = CP)
    lam == CL          ->  rule-CL        (srmc = CL)
    CP < lam < CL      ->  rule-interior  (srmc = CP)

``predict_srmc_from_lrmc`` applies them directly; ``compute_srmc`` gets
the same numbers out of perturbed solves, so the two can be played against
each other as independent routes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .groups import analytic_solution, classify, marginal_cp
from .lp import dual_value_range, solve_lp
from .model import SystemParams, build_lrmc_primal, build_srmc_primal
from .tolerances import DEFAULT

RULE_CP = "rule-CP"
RULE_CL = "rule-CL"
RULE_INTERIOR = "rule-interior"

#: Tolerance for matching a long-run price to CP or CL when labeling
#: rules.  Tighter than the general money tolerance so prices close to,
#: but distinct from, CL resolve the way the perturbed solve does.
RULE_TOL = 1e-7


class SrmcError(ValueError):
    pass


def default_epsilon(params: SystemParams) -> float:
    """Capacity slack used to resolve degeneracy.

    Small enough to never change which options serve demand, large enough
    to clear the degeneracy tolerance by many orders of magnitude.
    """
    return 1e-6 * max(params.d1, params.d2, 1.0)


@dataclass(frozen=True)
class SrmcResult:
    intervals: tuple        # per-period (lo, hi) at epsilon = 0
    resolved: tuple         # per-period price from the perturbed solve
    epsilon: float
    rules: tuple            # per-period rule label
    degenerate: tuple       # per-period: interval has positive width
    lrmc: tuple             # the long-run pair the rules were read against
    marginal_cp: tuple      # per-period marginal operating cost (None if all shed)


def predict_srmc_from_lrmc(lrmc_t: float, marginal_cp_t: float, cl: float,
                           *, tol: float = RULE_TOL) -> float:
    """Map one period's long-run price to its short-run price by rule."""
    if marginal_cp_t > cl + tol:
        raise SrmcError("marginal operating cost exceeds the loadshed cost")
    if abs(lrmc_t - marginal_cp_t) <= tol:
        return float(marginal_cp_t)
    if abs(lrmc_t - cl) <= tol:
        return float(cl)
    if marginal_cp_t < lrmc_t < cl:
        return float(marginal_cp_t)
    raise SrmcError(
        f"long-run price {lrmc_t} outside [{marginal_cp_t}, {cl}]: "
        "classifier/profile mismatch"
    )


def _rule_label(lrmc_t, cp_t, cl, tol=RULE_TOL):
    if cp_t is not None and abs(lrmc_t - cp_t) <= tol:
        return RULE_CP
    if abs(lrmc_t - cl) <= tol:
        return RULE_CL
    return RULE_INTERIOR


def compute_srmc(params: SystemParams, istar, *, epsilon: float = None,
                 lrmc_objective: float = None) -> SrmcResult:
    """Solve the short-run model, record dual intervals, resolve by epsilon.

    ``istar`` must be the investment part of an optimal long-run decision;
    this is verified by comparing against the long-run optimum (re-solved
    here unless the caller passes a known ``lrmc_objective``), and inputs
    that fail it are rejected.
    """
    eps = default_epsilon(params) if epsilon is None else float(epsilon)
    if eps <= 0:
        raise SrmcError("epsilon must be positive to resolve degeneracy")

    if lrmc_objective is None:
        z_star = solve_lp(build_lrmc_primal(params)).objective
    else:
        z_star = float(lrmc_objective)
    frozen = build_srmc_primal(params, istar, epsilon=0.0)
    sol0 = solve_lp(frozen)
    if not sol0.optimal:
        raise SrmcError(f"short-run model {sol0.status}")
    if abs(sol0.objective - z_star) > DEFAULT.gap * (1.0 + abs(z_star)):
        raise SrmcError(
            f"istar is not an optimal investment plan "
            f"(short-run cost {sol0.objective:g} vs long-run optimum {z_star:g})"
        )

    intervals = tuple(
        dual_value_range(frozen, f"balance_{t}", solution=sol0) for t in (1, 2)
    )
    degenerate = tuple(
        hi - lo > 1e-7 * (1.0 + abs(lo) + abs(hi)) for lo, hi in intervals
    )

    perturbed = solve_lp(build_srmc_primal(params, istar, epsilon=eps))
    resolved = (float(perturbed.duals[0]), float(perturbed.duals[1]))

    group = classify(params)
    analytic = analytic_solution(params, group)
    cps = tuple(marginal_cp(params, analytic.decision, t) for t in (1, 2))
    rules = tuple(
        _rule_label(analytic.lrmc[t - 1], cps[t - 1], params.cl) for t in (1, 2)
    )
    return SrmcResult(
        intervals=intervals,
        resolved=resolved,
        epsilon=eps,
        rules=rules,
        degenerate=degenerate,
        lrmc=analytic.lrmc,
        marginal_cp=cps,
    )
