"""Numerical tolerances used across the package.

All model magnitudes are bounded by ~1e5 (capacities, demands) times ~1e2
(unit costs), so absolute tolerances at the 1e-9 level are safe everywhere
a relative one is not explicitly called for.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields


@dataclass(frozen=True)
class Tolerances:
    feas: float = 1e-9        # primal/dual feasibility residuals (absolute)
    gap: float = 1e-8         # primal-dual objective gap (relative)
    deg: float = 1e-9         # basic variable counted as "at zero"
    bound: float = 1e-9       # classification boundary margin (relative)
    money: float = 1e-6       # profit comparisons (absolute)
    slackness: float = 1e-7   # normalized complementary-slackness residual
    lam_match: float = 1e-6   # analytic-vs-LP marginal price agreement


_ENV_PREFIX = "GENMARGIN_TOL_"
_ENV_NAMES = {
    "feas": "FEAS",
    "gap": "GAP",
    "deg": "DEG",
    "bound": "BOUND",
    "money": "MONEY",
    "slackness": "CS",
    "lam_match": "LAMBDA",
}


def from_env(environ=None) -> Tolerances:
    """Build a Tolerances set, letting GENMARGIN_TOL_* variables override fields."""
    environ = os.environ if environ is None else environ
    overrides = {}
    for f in fields(Tolerances):
        raw = environ.get(_ENV_PREFIX + _ENV_NAMES[f.name])
        if raw is not None:
            overrides[f.name] = float(raw)
    return Tolerances(**overrides)


DEFAULT = Tolerances()
