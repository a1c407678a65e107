"""Run configurations and the verify / sweep / sample drivers."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from ..cloning import FAMILIES, make_family, noisy_profile
from ..qudit import MAX_CLOSED_FORM_D, MAX_FULL_STATE_D, check_dimension
from ..ss import ss_report
from ..steering import EQ_TOL, no_cloning_report

SCENARIOS = ("epr", "ss")
MODES = ("verify", "sweep", "sample", "optimize", "threshold")
OBJECTIVES = ("total", "exclusivity")


@dataclass
class RunConfig:
    d: int = 2
    scenario: str = "epr"
    mode: str = "verify"
    family: str = "delta"
    param: float = None
    q1: tuple = None
    q2: tuple = None
    grid: str = None
    lambda_file: str = None
    samples: int = 1000
    seed: int = 0
    concentration: float = 1.0
    objective: str = "total"
    restarts: int = 20
    max_evals: int = 2000
    tol: float = EQ_TOL
    fmt: str = "json"
    out: str = None
    workers: int = 1

    def validate(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        cap = MAX_CLOSED_FORM_D if self.mode == "threshold" else MAX_FULL_STATE_D
        check_dimension(self.d, cap)
        if self.scenario not in SCENARIOS:
            raise ValueError(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}, got {self.objective!r}")
        if self.samples < 1 or self.restarts < 1 or self.max_evals < 1 or self.workers < 1:
            raise ValueError("samples, restarts, max_evals and workers must be >= 1")
        if not self.tol > 0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")
        if self.fmt not in ("json", "csv"):
            raise ValueError(f"format must be json or csv, got {self.fmt!r}")
        if self.mode == "sweep":
            if self.family not in ("depolarizing", "product"):
                raise ValueError("sweep needs a one-parameter family (depolarizing or product)")
            parse_grid(self.grid)
        if self.mode == "threshold" and self.family != "depolarizing":
            raise ValueError("threshold search is defined for the depolarizing family")
        return self


def parse_grid(spec):
    """``start:stop:steps`` with ``steps`` points including both ends."""
    if spec is None:
        raise ValueError("sweep needs --grid start:stop:steps")
    try:
        start, stop, steps = spec.split(":")
        start, stop, steps = float(start), float(stop), int(steps)
    except ValueError:
        raise ValueError(f"grid must look like start:stop:steps, got {spec!r}") from None
    if steps < 1 or not (0 <= start <= 1 and 0 <= stop <= 1):
        raise ValueError(f"grid {spec!r} must have steps >= 1 and endpoints in [0, 1]")
    return np.linspace(start, stop, steps)


def family_table(cfg, param=None):
    p = cfg.param if param is None else param
    if cfg.family == "product":
        q1 = cfg.q1 if cfg.q1 is not None else noisy_profile(cfg.d, p if p is not None else 0.0)
        q2 = cfg.q2 if cfg.q2 is not None else noisy_profile(cfg.d, p if p is not None else 0.0)
        return make_family("product", cfg.d, q1=q1, q2=q2)
    return make_family(cfg.family, cfg.d, p=p, path=cfg.lambda_file)


def report_for(table, scenario="epr", tol=EQ_TOL, family="custom", param=float("nan")):
    fn = ss_report if scenario == "ss" else no_cloning_report
    return fn(table, tol=tol, family=family, param=param)


def ordered_map(fn, items, workers=1, chunksize=64):
    """``map`` whose output order matches the input, optionally across processes."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))


def run_verify(cfg):
    table = family_table(cfg)
    param = float("nan") if cfg.param is None else float(cfg.param)
    return report_for(table, cfg.scenario, cfg.tol, cfg.family, param)


def _sweep_point(cfg, p):
    return report_for(family_table(cfg, p), cfg.scenario, cfg.tol, cfg.family, float(p))


def run_sweep(cfg):
    grid = parse_grid(cfg.grid)
    return ordered_map(partial(_sweep_point, cfg), grid, cfg.workers, chunksize=1)


def _sample_point(cfg, index):
    from .sampling import sample_lambda

    table = sample_lambda(cfg.d, cfg.seed, index, cfg.concentration)
    return report_for(table, cfg.scenario, cfg.tol, "dirichlet", float(index))


def run_sample(cfg):
    """Evaluate ``cfg.samples`` Dirichlet tables; returns summary plus records."""
    records = ordered_map(partial(_sample_point, cfg), range(cfg.samples), cfg.workers)
    return {"summary": summarize(records, cfg), "records": records}


def summarize(records, cfg):
    totals = np.array([r.total for r in records])
    return {
        "d": cfg.d,
        "scenario": cfg.scenario,
        "samples": len(records),
        "seed": cfg.seed,
        "concentration": cfg.concentration,
        "bound": records[0].bound_total,
        "max_total": float(totals.max()),
        "min_gap": float(records[0].bound_total - totals.max()),
        "max_sum_ab": max(r.sum_ab for r in records),
        "max_sum_ac": max(r.sum_ac for r in records),
        "steerable_ab": sum(r.steerable_ab for r in records),
        "steerable_ac": sum(r.steerable_ac for r in records),
        "dual_steerable": sum(r.steerable_ab and r.steerable_ac for r in records),
        "violations": int(np.sum(totals > records[0].bound_total + cfg.tol)),
    }
