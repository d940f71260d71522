"""Command-line front end: scenario files in, reports and CSV out.

Verbs
-----
run <config>         full report for one scenario (text, json or csv)
sweep <config>       CSV over a 1- or 2-dimensional parameter grid
selftest             randomized verification sweep, nonzero exit on failure
dump-tables          the embedded group table as CSV

Config files are flat JSON objects naming the nine parameters::

    {"ci_r": 60, "cp_r": 1, "m_r": 3000, "ci_f": 82, "cp_f": 20,
     "m_f": 4000, "cl": 200, "d1": 2000, "d2": 8000,
     "sweep": [{"param": "d2", "from": 2000, "to": 14800, "steps": 129}],
     "output": {"format": "csv", "path": "out.csv"}}

Exit codes: 0 ok, 1 validation error, 2 verification failure.
Tolerances accept environment overrides (GENMARGIN_TOL_FEAS and friends).
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import tolerances
from .groups import analytic_solution, classify, table_csv
from .model import ModelError, SystemParams, solve_lrmc
from .pricing import cost_recovery, group_orientation, lrmc_profile_for_group, srmc_profile
from .sampling import random_params
from .srmc import compute_srmc, predict_srmc_from_lrmc
from .verify import cross_check

PARAM_FIELDS = ("ci_r", "cp_r", "m_r", "ci_f", "cp_f", "m_f", "cl", "d1", "d2")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VERIFICATION = 2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepBlock:
    param: str
    start: float
    stop: float
    steps: int


@dataclass(frozen=True)
class ScenarioConfig:
    params: SystemParams
    sweeps: tuple
    output_format: str
    output_path: str


def load_config(path: str) -> ScenarioConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON (line {exc.lineno}): {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")

    known = set(PARAM_FIELDS) | {"sweep", "output"}
    for key in raw:
        if key not in known:
            raise ConfigError(f"unknown config field {key!r}")
    missing = [f for f in PARAM_FIELDS if f not in raw]
    if missing:
        raise ConfigError(f"missing parameter fields: {', '.join(missing)}")
    values = {}
    for f in PARAM_FIELDS:
        try:
            values[f] = float(raw[f])
        except (TypeError, ValueError):
            raise ConfigError(f"field {f!r} must be a number, got {raw[f]!r}") from None
    try:
        params = SystemParams.from_values(**values)
    except ModelError as exc:
        raise ConfigError(f"invalid parameters: {exc}") from exc

    sweeps = []
    for blk in raw.get("sweep", []):
        if not isinstance(blk, dict):
            raise ConfigError("sweep entries must be objects")
        try:
            name = blk["param"]
            start = float(blk["from"])
            stop = float(blk["to"])
            steps = int(blk["steps"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"sweep block needs param/from/to/steps: {exc}") from None
        if name not in PARAM_FIELDS:
            raise ConfigError(f"sweep parameter {name!r} is not a model field")
        if steps < 2:
            raise ConfigError("sweep needs steps >= 2")
        if start == stop:
            raise ConfigError("sweep needs from != to")
        sweeps.append(SweepBlock(name, start, stop, steps))
    if len(sweeps) > 2:
        raise ConfigError("at most two sweep dimensions supported")

    out = raw.get("output", {})
    fmt = out.get("format", "text")
    if fmt not in ("text", "csv", "json"):
        raise ConfigError(f"output format must be text/csv/json, got {fmt!r}")
    return ScenarioConfig(params=params, sweeps=tuple(sweeps),
                          output_format=fmt, output_path=out.get("path", ""))


# ---------------------------------------------------------------------------
# single-scenario report
# ---------------------------------------------------------------------------


def scenario_report(params: SystemParams, tol=None) -> dict:
    tol = tolerances.from_env() if tol is None else tol
    group = classify(params, tol_bound=tol.bound)
    analytic = analytic_solution(params, group)
    lr = solve_lrmc(params)
    srmc = compute_srmc(params, lr.decision)
    check = cross_check(params, tol=tol)

    profile = lrmc_profile_for_group(group.gid)
    orient = group_orientation(group.gid)
    lrmc_recovery = cost_recovery(analytic.lrmc, analytic.decision, params,
                                  tol_money=tol.money)
    srmc_recovery = cost_recovery(srmc.resolved, analytic.decision, params,
                                  tol_money=tol.money)
    table_srmc = srmc_profile(profile, params, orient)

    d = analytic.decision
    return {
        "params": {f: getattr(params, f) for f in PARAM_FIELDS},
        "group": group.gid,
        "cluster": group.cluster,
        "peak_period": group.peak_period,
        "boundary": group.boundary,
        "profile": analytic.profile_id,
        "decision": {
            "i_r1": d.i_r1, "i_r2": d.i_r2, "i_f1": d.i_f1, "i_f2": d.i_f2,
            "p_r1": d.p_r1, "p_r2": d.p_r2, "p_f1": d.p_f1, "p_f2": d.p_f2,
            "l_1": d.l_1, "l_2": d.l_2,
        },
        "objective": lr.objective,
        "lrmc": list(analytic.lrmc),
        "srmc": {
            "intervals": [list(iv) for iv in srmc.intervals],
            "resolved": list(srmc.resolved),
            "epsilon": srmc.epsilon,
            "rules": list(srmc.rules),
            "profile_prices": list(table_srmc.prices),
            "profile_recovered": table_srmc.recovered,
        },
        "recovery": {
            "lrmc": _recovery_dict(lrmc_recovery),
            "srmc": _recovery_dict(srmc_recovery),
        },
        "allocation": [
            {"tech": a.tech, "invest_cost": a.invest_cost,
             "peak_share": a.peak_share, "offpeak_share": a.offpeak_share,
             "rule": a.rule}
            for a in lrmc_recovery.allocation
        ],
        "cross_check": {
            "passed": check.passed,
            "failures": [f"{c.name}: {c.detail}" for c in check.failures()],
            "max_slackness_residual": check.slackness.max_residual,
        },
    }


def _recovery_dict(rep):
    return {"revenue": rep.revenue, "total_cost": rep.total_cost,
            "profit": rep.profit, "recovered": rep.recovered}


def _format_text(rep: dict) -> str:
    d = rep["decision"]
    lines = [
        "scenario: " + ", ".join(f"{k}={v:g}" for k, v in rep["params"].items()),
        f"group {rep['group']} (cluster {rep['cluster']}, peak period "
        f"{rep['peak_period']}, profile {rep['profile']}"
        + (", on a boundary)" if rep["boundary"] else ")"),
        f"invested capacity  I_r=({d['i_r1']:g}, {d['i_r2']:g})  "
        f"I_f=({d['i_f1']:g}, {d['i_f2']:g})",
        f"generation         P_r=({d['p_r1']:g}, {d['p_r2']:g})  "
        f"P_f=({d['p_f1']:g}, {d['p_f2']:g})  shed=({d['l_1']:g}, {d['l_2']:g})",
        f"total cost         {rep['objective']:.6f}",
        f"long-run prices    ({rep['lrmc'][0]:g}, {rep['lrmc'][1]:g})",
        f"short-run prices   ({rep['srmc']['resolved'][0]:g}, "
        f"{rep['srmc']['resolved'][1]:g})   epsilon={rep['srmc']['epsilon']:g}",
        "short-run intervals " + "  ".join(
            f"period {t+1}: [{iv[0]:g}, {iv[1]:g}] ({rule})"
            for t, (iv, rule) in enumerate(zip(rep["srmc"]["intervals"],
                                               rep["srmc"]["rules"]))),
    ]
    for kind in ("lrmc", "srmc"):
        r = rep["recovery"][kind]
        verdict = "recovered" if r["recovered"] else "NOT recovered"
        lines.append(
            f"{kind} pricing      revenue {r['revenue']:.6f}  "
            f"cost {r['total_cost']:.6f}  profit {r['profit']:.6f}  ({verdict})")
    for a in rep["allocation"]:
        lines.append(
            f"shared {a['tech']} investment {a['invest_cost']:g}: "
            f"{a['peak_share']:g} to peak, {a['offpeak_share']:g} to off-peak "
            f"[{a['rule']}]")
    ok = rep["cross_check"]["passed"]
    lines.append("cross-check        " + ("pass" if ok else
                 "FAIL: " + "; ".join(rep["cross_check"]["failures"])))
    return "\n".join(lines) + "\n"


def _flatten(rep: dict, prefix=""):
    for k, v in rep.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            for i, item in enumerate(v):
                yield from _flatten(item, f"{key}.{i}.")
        elif isinstance(v, list):
            for i, item in enumerate(v):
                yield f"{key}.{i}", item
        else:
            yield key, v


def _format_csv_single(rep: dict) -> str:
    pairs = list(_flatten(rep))
    buf = io.StringIO()
    buf.write(",".join(k for k, _ in pairs) + "\n")
    buf.write(",".join(_csv_cell(v) for _, v in pairs) + "\n")
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)      # shortest round-trip decimal
    return str(v)


def run_scenario(config: ScenarioConfig) -> tuple:
    """(exit code, report text) for a single scenario."""
    rep = scenario_report(config.params)
    if config.output_format == "json":
        text = json.dumps(rep, indent=2) + "\n"
    elif config.output_format == "csv":
        text = _format_csv_single(rep)
    else:
        text = _format_text(rep)
    code = EXIT_OK if rep["cross_check"]["passed"] else EXIT_VERIFICATION
    return code, text


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

SWEEP_COLUMNS = ("group", "profile", "lambda_1", "lambda_2",
                 "srmc_1", "srmc_2", "profit_lrmc", "profit_srmc", "boundary")


def _grid(block: SweepBlock):
    return np.linspace(block.start, block.stop, block.steps)


def sweep_rows(config: ScenarioConfig):
    """Deterministic row order regardless of evaluation order."""
    tol = tolerances.from_env()
    blocks = config.sweeps
    grids = [_grid(b) for b in blocks]
    base = {f: getattr(config.params, f) for f in PARAM_FIELDS}
    if len(blocks) == 1:
        points = [(v,) for v in grids[0]]
    else:
        points = [(v1, v2) for v1 in grids[0] for v2 in grids[1]]
    for values in points:
        over = dict(base)
        for b, v in zip(blocks, values):
            over[b.param] = float(v)
        try:
            params = SystemParams.from_values(**over)
            group = classify(params, tol_bound=tol.bound)
            analytic = analytic_solution(params, group)
            lr = solve_lrmc(params)
            srmc = compute_srmc(params, lr.decision)
            p_l = cost_recovery(analytic.lrmc, analytic.decision, params).profit
            p_s = cost_recovery(srmc.resolved, analytic.decision, params).profit
            row = (group.gid, analytic.profile_id, analytic.lrmc[0],
                   analytic.lrmc[1], srmc.resolved[0], srmc.resolved[1],
                   p_l, p_s, group.boundary)
        except (ModelError, ValueError) as exc:
            row = ("error", str(exc).replace(",", ";"), "", "", "", "", "", "", "")
        yield values, row


def run_sweep(config: ScenarioConfig) -> tuple:
    if not config.sweeps:
        raise ConfigError("sweep mode needs at least one sweep block")
    buf = io.StringIO()
    names = [b.param for b in config.sweeps]
    buf.write(",".join(names + list(SWEEP_COLUMNS)) + "\n")
    for values, row in sweep_rows(config):
        cells = [_csv_cell(float(v)) for v in values]
        cells += [_csv_cell(v) for v in row]
        buf.write(",".join(cells) + "\n")
    return EXIT_OK, buf.getvalue()


# ---------------------------------------------------------------------------
# selftest
# ---------------------------------------------------------------------------


def run_selftest(seed: int, n: int, out=None) -> int:
    """n randomized scenarios through the cross-check and the short-run
    rule/perturbation agreement.  Deterministic for a fixed seed."""
    out = sys.stdout if out is None else out
    if n < 1:
        raise ConfigError("selftest needs n >= 1")
    rng = np.random.default_rng(seed)
    failures = 0
    groups_seen = set()
    for _ in range(n):
        params = random_params(rng)
        rep = cross_check(params)
        groups_seen.add(rep.gid)
        ok = rep.passed
        if ok:
            lr = solve_lrmc(params)
            srmc = compute_srmc(params, lr.decision)
            for t in (0, 1):
                cp = srmc.marginal_cp[t]
                want = params.cl if cp is None else predict_srmc_from_lrmc(
                    srmc.lrmc[t], cp, params.cl)
                if abs(want - srmc.resolved[t]) > 1e-6:
                    ok = False
        if not ok:
            failures += 1
    out.write(f"selftest: seed={seed} n={n}\n")
    out.write(f"pass {n - failures}/{n}, distinct groups {len(groups_seen)}\n")
    if n >= 10_000 and len(groups_seen) < 35:
        out.write(f"FAIL: only {len(groups_seen)} of 41 groups observed\n")
        return EXIT_VERIFICATION
    if failures:
        out.write(f"FAIL: {failures} scenario(s) disagreed\n")
        return EXIT_VERIFICATION
    out.write("all checks passed\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _emit(text: str, path: str):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="genmargin",
        description="marginal generation costs in a two-technology, "
                    "two-period expansion model",
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    p_run = sub.add_parser("run", help="report for one scenario")
    p_run.add_argument("config")
    p_sweep = sub.add_parser("sweep", help="CSV over a parameter grid")
    p_sweep.add_argument("config")
    p_self = sub.add_parser("selftest", help="randomized verification sweep")
    p_self.add_argument("--seed", type=int, default=0)
    p_self.add_argument("--n", type=int, default=1000)
    p_dump = sub.add_parser("dump-tables", help="embedded group table as CSV")
    p_dump.add_argument("--path", default="")
    args = parser.parse_args(argv)

    try:
        if args.verb == "run":
            config = load_config(args.config)
            code, text = run_scenario(config)
            _emit(text, config.output_path)
            return code
        if args.verb == "sweep":
            config = load_config(args.config)
            code, text = run_sweep(config)
            _emit(text, config.output_path)
            return code
        if args.verb == "selftest":
            return run_selftest(args.seed, args.n)
        if args.verb == "dump-tables":
            _emit(table_csv(), args.path)
            return EXIT_OK
    except (ConfigError, ValueError) as exc:
        # ModelError, ClassificationError and friends are ValueErrors that
        # name the violated assumption
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
