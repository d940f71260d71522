"""Dense LP solver with dual extraction and degeneracy diagnostics.

A deliberately small, transparent implementation: two-phase primal simplex
on a dense tableau with Bland's rule always on, so cycling is impossible
rather than merely unlikely.  Problem sizes in this package are at most a
dozen variables by ten rows; there is no sparsity machinery, no scaling,
no warm starts.

Conventions
-----------
* ``sense`` is ``"min"`` or ``"max"``.
* Each row carries a relation from ``{"<=", "=", ">="}``.
* Variables have individual lower bounds: ``0.0`` (default), any finite
  value, or ``-inf`` for a free variable.  No upper bounds (use a row).
* Dual signs: for a minimization, ``>=`` rows carry nonnegative duals,
  ``<=`` rows nonpositive ones, equality rows are unrestricted.  For a
  maximization the signs flip.  Strong duality then reads
  ``objective == b @ duals`` either way (plus the objective offset).
* Reduced costs are reported as ``c_j - duals @ A[:, j]`` in the problem's
  own orientation: nonnegative at optimality for a minimization,
  nonpositive for a maximization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tolerances import DEFAULT

LE, EQ, GE = "<=", "=", ">="
_RELATIONS = (LE, EQ, GE)

#: Hard iteration cap.  Problems in this package converge in < 50 pivots;
#: hitting the cap signals a solver bug, never a hard instance.
MAX_ITERATIONS = 10_000


class LpError(Exception):
    """Base class for solver errors."""


class LpInputError(LpError, ValueError):
    """Malformed problem data (dimension mismatch, bad labels, ...)."""


class IterationLimitError(LpError):
    """The pivot cap was hit.  With Bland's rule on, this means a bug."""


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """A dense LP instance.

    Immutable after construction; arrays are copied and marked read-only,
    so instances can be shared freely across threads.
    """

    sense: str
    c: np.ndarray
    A: np.ndarray
    relations: tuple
    b: np.ndarray
    lower_bounds: np.ndarray = None
    var_labels: tuple = None
    row_labels: tuple = None
    objective_offset: float = 0.0

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise LpInputError(f"sense must be 'min' or 'max', got {self.sense!r}")
        c = np.array(self.c, dtype=float)
        A = np.atleast_2d(np.array(self.A, dtype=float))
        b = np.array(self.b, dtype=float)
        rel = tuple(self.relations)
        if c.ndim != 1 or b.ndim != 1:
            raise LpInputError("c and b must be one-dimensional")
        m, n = A.shape
        if c.shape[0] != n:
            raise LpInputError(f"objective has {c.shape[0]} entries for {n} columns")
        if b.shape[0] != m or len(rel) != m:
            raise LpInputError(
                f"matrix has {m} rows but |b| = {b.shape[0]}, |relations| = {len(rel)}"
            )
        for r in rel:
            if r not in _RELATIONS:
                raise LpInputError(f"unknown relation {r!r}")
        if self.lower_bounds is None:
            lb = np.zeros(n)
        else:
            lb = np.array(self.lower_bounds, dtype=float)
            if lb.shape != (n,):
                raise LpInputError("lower_bounds length must match column count")
            if np.any(np.isposinf(lb)) or np.any(np.isnan(lb)):
                raise LpInputError("lower bounds must be finite or -inf")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise LpInputError("c, A, b must be finite")
        vl = None if self.var_labels is None else tuple(self.var_labels)
        rl = None if self.row_labels is None else tuple(self.row_labels)
        if vl is not None and (len(vl) != n or len(set(vl)) != n):
            raise LpInputError("variable labels must be unique and match column count")
        if rl is not None and (len(rl) != m or len(set(rl)) != m):
            raise LpInputError("row labels must be unique and match row count")
        for name, val in (("c", c), ("A", A), ("b", b), ("lower_bounds", lb)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)
        object.__setattr__(self, "relations", rel)
        object.__setattr__(self, "var_labels", vl)
        object.__setattr__(self, "row_labels", rl)

    @property
    def n_rows(self):
        return self.A.shape[0]

    @property
    def n_vars(self):
        return self.A.shape[1]

    def row_index(self, row_id) -> int:
        if isinstance(row_id, str):
            if self.row_labels is None:
                raise LpInputError("problem has no row labels")
            try:
                return self.row_labels.index(row_id)
            except ValueError:
                raise LpInputError(f"unknown row label {row_id!r}") from None
        i = int(row_id)
        if not 0 <= i < self.n_rows:
            raise LpInputError(f"row index {i} out of range")
        return i

    def var_label(self, j) -> str:
        return self.var_labels[j] if self.var_labels else f"x{j}"

    def row_label(self, i) -> str:
        return self.row_labels[i] if self.row_labels else f"row{i}"


@dataclass(frozen=True, eq=False)
class LpSolution:
    """Primal and dual optimum (or an infeasible/unbounded verdict)."""

    status: str                 # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray = None
    duals: np.ndarray = None
    reduced_costs: np.ndarray = None
    objective: float = None
    basis: tuple = ()
    iterations: int = 0

    @property
    def optimal(self):
        return self.status == "optimal"


@dataclass(frozen=True, eq=False)
class DegeneracyReport:
    """Which basic variables sit at zero, and which rows have non-unique duals."""

    primal_degenerate: bool
    zero_basic: tuple          # (label, value) pairs for basic variables at ~0
    dual_multiple: tuple       # per-row bool: dual value not unique over the optimal set

    def row_has_multiple_duals(self, i) -> bool:
        return self.dual_multiple[i]


# ---------------------------------------------------------------------------
# standard-form conversion
# ---------------------------------------------------------------------------


class _StandardForm:
    """min c.x  s.t.  A x = b, x >= 0, with bookkeeping back to the original."""

    def __init__(self, p: LinearProgram):
        self.problem = p
        minimize = p.sense == "min"
        c_orig = p.c if minimize else -p.c
        self.minimize = minimize

        # Shift finite lower bounds to zero; split free variables in two.
        lb = p.lower_bounds
        self.shift = np.where(np.isfinite(lb), lb, 0.0)
        b_work = p.b - p.A @ self.shift

        cols = []          # (original var index, sign)
        for j in range(p.n_vars):
            cols.append((j, +1.0))
            if math.isinf(lb[j]):
                cols.append((j, -1.0))
        self.cols = cols

        n_struct = len(cols)
        A_struct = np.empty((p.n_rows, n_struct))
        c_struct = np.empty(n_struct)
        for k, (j, s) in enumerate(cols):
            A_struct[:, k] = s * p.A[:, j]
            c_struct[k] = s * c_orig[j]

        # Make the right-hand side nonnegative before adding slacks, so the
        # sign of each slack tells us whether it can start in the basis.
        self.row_sign = np.where(b_work < 0, -1.0, 1.0)
        A_struct = A_struct * self.row_sign[:, None]
        b_work = b_work * self.row_sign

        slack_cols = []
        slack_sign = {}
        for i, rel in enumerate(p.relations):
            if rel == EQ:
                continue
            s = 1.0 if rel == LE else -1.0
            s *= self.row_sign[i]
            slack_sign[i] = s
            slack_cols.append((i, s))

        n_slack = len(slack_cols)
        A_slack = np.zeros((p.n_rows, n_slack))
        for k, (i, s) in enumerate(slack_cols):
            A_slack[i, k] = s
        self.slack_cols = slack_cols

        self.A = np.hstack([A_struct, A_slack])
        self.b = b_work
        self.c = np.concatenate([c_struct, np.zeros(n_slack)])
        self.n_struct = n_struct
        self.n_total = n_struct + n_slack

        # Initial basis: a +1 slack where available, else an artificial.
        self.init_basis = np.full(p.n_rows, -1, dtype=int)
        for k, (i, s) in enumerate(slack_cols):
            if s > 0:
                self.init_basis[i] = n_struct + k
        self.art_rows = [i for i in range(p.n_rows) if self.init_basis[i] < 0]

    def column_label(self, k) -> str:
        p = self.problem
        if k < self.n_struct:
            j, s = self.cols[k]
            base = p.var_label(j)
            return base if s > 0 else base + "~"
        i, _ = self.slack_cols[k - self.n_struct]
        return f"s[{p.row_label(i)}]"

    def x_original(self, x_std) -> np.ndarray:
        x = self.shift.copy()
        for k, (j, s) in enumerate(self.cols):
            x[j] += s * x_std[k]
        return x


def solve_lp(problem: LinearProgram, *, tol: float = None,
             max_iterations: int = MAX_ITERATIONS) -> LpSolution:
    """Solve an LP to optimality, returning primal values, duals and reduced costs.

    The duals are the multipliers of the optimal basis actually returned,
    which matters on degenerate instances: a different optimal basis may
    carry different (equally valid) duals.  Use :func:`dual_value_range`
    for the full set.
    """
    tol = DEFAULT.feas if tol is None else tol
    sf = _StandardForm(problem)
    m = problem.n_rows
    if m == 0:
        raise LpInputError("problem must have at least one row")

    n_art = len(sf.art_rows)
    n_cols = sf.n_total + n_art
    T = np.zeros((m, n_cols + 1))
    T[:, : sf.n_total] = sf.A
    T[:, -1] = sf.b
    basis = sf.init_basis.copy()
    for k, i in enumerate(sf.art_rows):
        col = sf.n_total + k
        T[i, col] = 1.0
        basis[i] = col

    # Reduced-cost rows for phase 1 (sum of artificials) and phase 2, kept
    # up to date together through every pivot.
    r2 = np.zeros(n_cols + 1)
    r2[: sf.n_total] = sf.c
    r1 = np.zeros(n_cols + 1)
    for i in sf.art_rows:
        r1 -= T[i]
    r1[sf.n_total:-1] = 0.0

    rc_tol = tol * (1.0 + float(np.abs(sf.c).max(initial=0.0)))
    piv_tol = 1e-10
    iterations = 0

    def pivot(pi, pj):
        T[pi] /= T[pi, pj]
        col = T[:, pj].copy()
        col[pi] = 0.0
        T[...] -= np.outer(col, T[pi])
        f1, f2 = r1[pj], r2[pj]
        if f1 != 0.0:
            r1[:] = r1 - f1 * T[pi]
        if f2 != 0.0:
            r2[:] = r2 - f2 * T[pi]
        basis[pi] = pj

    def run_phase(r_active):
        # Artificial columns never enter; they only leave (or stay parked
        # at zero on redundant rows).
        nonlocal iterations
        while True:
            r = r1 if r_active == 1 else r2
            enter = -1
            for j in range(sf.n_total):          # Bland: lowest eligible index
                if r[j] < -rc_tol:
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            col = T[:, enter]
            ratios = np.full(m, np.inf)
            pos = col > piv_tol
            ratios[pos] = T[pos, -1] / col[pos]
            theta = ratios.min()
            if not np.isfinite(theta):
                return "unbounded"
            cand = np.flatnonzero(ratios <= theta + 1e-12 * (1.0 + abs(theta)))
            leave = cand[np.argmin(basis[cand])]  # Bland again on ties
            iterations += 1
            if iterations > max_iterations:
                raise IterationLimitError(
                    f"simplex exceeded {max_iterations} pivots; this is a bug"
                )
            pivot(leave, enter)

    # ---- phase 1 ------------------------------------------------------
    if n_art:
        status = run_phase(1)
        if status == "unbounded":     # cannot happen: phase-1 objective >= 0
            raise LpError("phase-1 unbounded; numerical corruption")
        phase1_obj = -r1[-1]
        if phase1_obj > tol * (1.0 + float(np.abs(sf.b).max(initial=0.0))):
            return LpSolution(status="infeasible", iterations=iterations)
        # Pivot leftover artificials out where possible; a row that cannot
        # be pivoted is redundant and keeps its artificial basic at zero.
        for i in range(m):
            if basis[i] >= sf.n_total:
                for j in range(sf.n_total):
                    if abs(T[i, j]) > 1e-9:
                        pivot(i, j)
                        break

    # ---- phase 2 ------------------------------------------------------
    status = run_phase(2)
    if status == "unbounded":
        return LpSolution(status="unbounded", iterations=iterations)

    x_std = np.zeros(sf.n_total)
    for i in range(m):
        if basis[i] < sf.n_total:
            x_std[basis[i]] = T[i, -1]
    x = sf.x_original(x_std)

    # Duals of the returned basis: solve B' y = c_B against the pristine
    # standard-form columns, then undo row negation and sense flips.
    B = np.empty((m, m))
    c_B = np.empty(m)
    for i in range(m):
        j = basis[i]
        if j < sf.n_total:
            B[:, i] = sf.A[:, j]
            c_B[i] = sf.c[j]
        else:
            B[:, i] = 0.0
            B[_art_row(sf, j), i] = 1.0
            c_B[i] = 0.0
    y_std = np.linalg.solve(B.T, c_B)
    y = y_std * sf.row_sign
    if not sf.minimize:
        y = -y

    rc = problem.c - y @ problem.A
    objective = float(problem.c @ x) + problem.objective_offset
    labels = tuple(
        sf.column_label(basis[i]) if basis[i] < sf.n_total
        else f"a[{problem.row_label(_art_row(sf, basis[i]))}]"
        for i in range(m)
    )
    return LpSolution(
        status="optimal",
        x=x,
        duals=y,
        reduced_costs=rc,
        objective=objective,
        basis=labels,
        iterations=iterations,
    )


def _art_row(sf, col):
    return sf.art_rows[col - sf.n_total]


# ---------------------------------------------------------------------------
# explicit dual construction and dual value ranges
# ---------------------------------------------------------------------------


def _min_form(problem: LinearProgram) -> LinearProgram:
    """Equivalent minimization with lower bounds in {0, -inf}."""
    lb = problem.lower_bounds
    shift = np.where(np.isfinite(lb), lb, 0.0)
    c = problem.c if problem.sense == "min" else -problem.c
    offset = float(c @ shift)
    return LinearProgram(
        sense="min",
        c=c,
        A=problem.A,
        relations=problem.relations,
        b=problem.b - problem.A @ shift,
        lower_bounds=np.where(np.isfinite(lb), 0.0, -np.inf),
        var_labels=problem.var_labels,
        row_labels=problem.row_labels,
        objective_offset=offset,
    )


def explicit_dual(problem: LinearProgram):
    """Build the dual of a minimization LP as an explicit LinearProgram.

    Returns ``(dual_lp, signs)`` where ``signs[i]`` maps the dual LP's
    variable ``i`` back to the primal row's dual: ``y_i = signs[i] *
    dual_x_i`` (``<=`` rows are represented by their negated, nonnegative
    counterpart so the solver only ever sees lb in {0, -inf}).
    """
    if problem.sense != "min":
        raise LpInputError("explicit_dual expects a minimization problem")
    m, n = problem.n_rows, problem.n_vars
    signs = np.array([
        -1.0 if rel == LE else 1.0 for rel in problem.relations
    ])
    lb = np.array([
        -np.inf if rel == EQ else 0.0 for rel in problem.relations
    ])
    A_d = problem.A.T * signs[None, :]
    rel_d = tuple(
        EQ if math.isinf(problem.lower_bounds[j]) else LE for j in range(n)
    )
    dual = LinearProgram(
        sense="max",
        c=signs * problem.b,
        A=A_d,
        relations=rel_d,
        b=problem.c.copy(),
        lower_bounds=lb,
        var_labels=tuple(f"y[{problem.row_label(i)}]" for i in range(m)),
        row_labels=tuple(problem.var_label(j) for j in range(n)),
    )
    return dual, signs


def dual_value_range(problem: LinearProgram, row_id, *, tol: float = None,
                     solution: LpSolution = None):
    """Exact interval of values the row's dual takes over all optimal duals.

    Computed by re-optimizing over the dual feasible region pinned to the
    optimal dual objective, minimizing and then maximizing the chosen dual
    variable.  Degenerate primal optima show up here as intervals of
    positive width; a unique dual gives a zero-width interval.

    ``solution`` may carry a previously computed optimum of ``problem`` to
    skip the internal solve.
    """
    tol = DEFAULT.feas if tol is None else tol
    idx = problem.row_index(row_id)
    p_min = _min_form(problem)
    if solution is not None and solution.optimal:
        z_min = solution.objective - problem.objective_offset
        if problem.sense == "max":
            z_min = -z_min
        z_struct = z_min - p_min.objective_offset
    else:
        sol = solve_lp(p_min)
        if not sol.optimal:
            raise LpError(f"dual_value_range needs an optimal primal, got {sol.status}")
        z_struct = sol.objective - p_min.objective_offset

    dual, signs = explicit_dual(p_min)
    m = p_min.n_rows
    A_ext = np.vstack([dual.A, dual.c])
    rel_ext = dual.relations + (EQ,)
    b_ext = np.concatenate([dual.b, [z_struct]])
    lo_hi = []
    for sense in ("min", "max"):
        obj = np.zeros(m)
        obj[idx] = signs[idx]
        sub = LinearProgram(
            sense=sense,
            c=obj,
            A=A_ext,
            relations=rel_ext,
            b=b_ext,
            lower_bounds=dual.lower_bounds,
        )
        s = solve_lp(sub, tol=tol)
        if s.status == "unbounded":
            lo_hi.append(-math.inf if sense == "min" else math.inf)
        elif s.optimal:
            lo_hi.append(s.objective)
        else:
            raise LpError(
                "dual polytope at the optimal value is infeasible; "
                "numerical trouble in the primal solve"
            )
    lo, hi = lo_hi
    if problem.sense == "max":
        lo, hi = -hi, -lo
    return (float(lo), float(hi))


def basic_variable_values(problem: LinearProgram, solution: LpSolution):
    """(label, value) for every basis member of an optimal solution."""
    values = {}
    for j in range(problem.n_vars):
        lbl = problem.var_label(j)
        values[lbl] = solution.x[j] - problem.lower_bounds[j] if np.isfinite(
            problem.lower_bounds[j]) else solution.x[j]
        values[lbl + "~"] = -solution.x[j]
    resid = problem.A @ solution.x
    for i, rel in enumerate(problem.relations):
        if rel == LE:
            values[f"s[{problem.row_label(i)}]"] = problem.b[i] - resid[i]
        elif rel == GE:
            values[f"s[{problem.row_label(i)}]"] = resid[i] - problem.b[i]
        values[f"a[{problem.row_label(i)}]"] = 0.0
    return [(lbl, float(values[lbl])) for lbl in solution.basis]


def detect_degeneracy(problem: LinearProgram, solution: LpSolution, *,
                      tol_deg: float = None,
                      dual_ranges: bool = True) -> DegeneracyReport:
    """Flag basic variables at zero and rows whose dual is not unique.

    ``dual_ranges=False`` skips the per-row interval computation (two LP
    solves per row) and reports all rows as single-valued.
    """
    tol_deg = DEFAULT.deg if tol_deg is None else tol_deg
    if not solution.optimal:
        raise LpError("detect_degeneracy requires an optimal solution")
    if solution.x is None or solution.x.shape != (problem.n_vars,):
        raise LpInputError("solution does not match the problem's shape")
    zero_basic = tuple(
        (lbl, v) for lbl, v in basic_variable_values(problem, solution)
        if abs(v) <= tol_deg
    )
    if dual_ranges:
        multi = []
        for i in range(problem.n_rows):
            lo, hi = dual_value_range(problem, i)
            multi.append(hi - lo > 1e-7 * (1.0 + abs(lo) + abs(hi)))
        dual_multiple = tuple(multi)
    else:
        dual_multiple = tuple(False for _ in range(problem.n_rows))
    return DegeneracyReport(
        primal_degenerate=bool(zero_basic),
        zero_basic=zero_basic,
        dual_multiple=dual_multiple,
    )
