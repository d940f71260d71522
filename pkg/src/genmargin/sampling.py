"""Random valid parameter sets for sweeps and self-tests.

Costs are drawn log-uniform, demands uniform over [0, 2(M_r + M_f)].
Draws are rejected until the standing cost orderings hold and the point
is comfortably interior: classification boundaries are resampled at a
margin safely above the capacity perturbation used by the short-run
resolution, so strict-equality assertions stay meaningful.
"""

from __future__ import annotations

import numpy as np

from .groups import classify
from .model import SystemParams

#: Relative interior margin required of sampled points.  Chosen about an
#: order of magnitude above the default short-run perturbation scale so a
#: perturbed solve can never jump a regime edge.
INTERIOR_MARGIN = 2e-5


def _loguniform(rng, lo, hi):
    return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))


def random_params(rng, *, margin: float = INTERIOR_MARGIN,
                  max_tries: int = 100_000) -> SystemParams:
    """One valid, interior parameter set."""
    for _ in range(max_tries):
        ci_r = _loguniform(rng, 5.0, 120.0)
        ci_f = _loguniform(rng, 5.0, 240.0)
        cp_r = _loguniform(rng, 0.2, 25.0)
        cp_f = _loguniform(rng, 0.2, 50.0)
        if not (ci_r < ci_f and cp_r < cp_f):
            continue
        t_sr = ci_r / 2 + cp_r
        t_sf = ci_f / 2 + cp_f
        t_r = ci_r + cp_r
        t_f = ci_f + cp_f
        # strict ladder: shared fossil below non-shared renewable, with room
        if t_r - t_sf <= margin * max(1.0, t_r):
            continue
        if min(t_sf - t_sr, t_f - t_r) <= margin * max(1.0, t_f):
            continue
        m_r = _loguniform(rng, 300.0, 8000.0)
        m_f = _loguniform(rng, 300.0, 8000.0)
        cl = _loguniform(rng, 0.4 * t_sr, 2.5 * t_f)
        d1 = float(rng.uniform(0.0, 2.0 * (m_r + m_f)))
        d2 = float(rng.uniform(0.0, 2.0 * (m_r + m_f)))
        params = SystemParams.from_values(ci_r, cp_r, m_r, ci_f, cp_f, m_f,
                                          cl, d1, d2)
        group = classify(params, tol_bound=margin)
        if group.boundary:
            continue
        return params
    raise RuntimeError("could not sample an interior parameter set")


def random_scenarios(seed: int, n: int, **kw):
    """Deterministic list of n interior parameter sets."""
    rng = np.random.default_rng(seed)
    return [random_params(rng, **kw) for _ in range(n)]
