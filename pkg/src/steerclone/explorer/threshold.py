"""Noise threshold for steering on the depolarizing family.

Finds the largest p for which the AB two-setting sum still exceeds log2 d,
by bisection on the closed form.
"""

import numpy as np

from ..cloning import make_family
from ..steering import q_profile, steering_sum

BISECT_TOL = 1e-8
MONOTONE_GRID = 201


class NotMonotoneError(ValueError):
    pass


def sum_ab_at(d, p):
    return steering_sum(make_family("depolarizing", d, p=p), "AB")


def run_threshold(cfg, tol=BISECT_TOL):
    d = cfg.d
    log_d = float(np.log2(d))

    def excess(p):
        return sum_ab_at(d, p) - log_d

    grid = np.linspace(0.0, 1.0, MONOTONE_GRID)
    vals = np.array([excess(p) for p in grid])
    if np.any(np.diff(vals) > 1e-12):
        i = int(np.argmax(np.diff(vals)))
        raise NotMonotoneError(
            f"sum_ab increases between p={grid[i]:.4g} and p={grid[i + 1]:.4g}; bisection bracket invalid"
        )
    lo, hi = 0.0, 1.0
    if not (excess(lo) > 0 > excess(hi)):
        raise NotMonotoneError(
            f"no sign change on [0, 1]: excess(0)={excess(lo)}, excess(1)={excess(hi)}"
        )
    iterations = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    p_star = lo
    table = make_family("depolarizing", d, p=p_star)
    return {
        "d": d,
        "family": "depolarizing",
        "p_star": p_star,
        "bracket": [lo, hi],
        "iterations": iterations,
        "q1": q_profile(table, 1).q,
        "q2": q_profile(table, 2).q,
        "sum_ab": steering_sum(table, "AB"),
        "bound": log_d,
    }
