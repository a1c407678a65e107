"""Sampling, sweeps, adversarial search and threshold location, plus the CLI."""

from .io import emit_report, load_lambda, save_lambda
from .optimize import OptimizeResult, run_optimize
from .runs import RunConfig, run_sample, run_sweep, run_verify
from .sampling import sample_lambda
from .threshold import run_threshold
