"""``steerclone`` command line.

Exit codes: 0 success, 2 invalid configuration, 3 theorem violation, 4 I/O error.
"""

import argparse
import json
import logging
import sys

from ..steering import EQ_TOL, TheoremViolation
from .io import emit_report
from .runs import RunConfig, run_sample, run_sweep, run_verify

log = logging.getLogger("steerclone")

EXIT_OK, EXIT_CONFIG, EXIT_VIOLATION, EXIT_IO = 0, 2, 3, 4


def _probs(text):
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}") from None


def _seed(text):
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, default=2, help="qudit dimension")
    common.add_argument("--scenario", choices=("epr", "ss"), default="epr")
    common.add_argument(
        "--family",
        choices=("delta", "uniform", "depolarizing", "product", "custom"),
        default=None,
    )
    common.add_argument("--param", type=float, default=None, help="family parameter p")
    common.add_argument("--q1", type=_probs, default=None, help="product family row profile")
    common.add_argument("--q2", type=_probs, default=None, help="product family column profile")
    common.add_argument("--grid", default=None, help="start:stop:steps for sweeps")
    common.add_argument("--lambda-file", default=None, help="JSON lambda table (custom family)")
    common.add_argument("--samples", type=int, default=1000)
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--concentration", type=float, default=1.0, help="Dirichlet concentration")
    common.add_argument("--objective", choices=("total", "exclusivity"), default="total")
    common.add_argument("--restarts", type=int, default=20)
    common.add_argument("--max-evals", type=int, default=2000, help="evaluations per restart")
    common.add_argument("--workers", type=int, default=1, help="worker processes")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--tol", type=float, default=EQ_TOL, help="theorem and equality slack")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="steerclone",
        description="Explore how entropic steering survives a universal qudit cloner.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    sub.add_parser("verify", parents=[common], help="full report for one lambda table")
    sub.add_parser("sweep", parents=[common], help="reports along a family parameter grid")
    sub.add_parser("sample", parents=[common], help="Dirichlet-sampled lambda tables")
    sub.add_parser("optimize", parents=[common], help="adversarial search against the bound")
    sub.add_parser("threshold", parents=[common], help="depolarizing noise threshold")
    return parser


def config_from_args(args):
    family = args.family
    if family is None:
        family = {"verify": "custom" if args.lambda_file else "delta"}.get(args.mode, "depolarizing")
    return RunConfig(
        d=args.d,
        scenario=args.scenario,
        mode=args.mode,
        family=family,
        param=args.param,
        q1=args.q1,
        q2=args.q2,
        grid=args.grid,
        lambda_file=args.lambda_file,
        samples=args.samples,
        seed=args.seed,
        concentration=args.concentration,
        objective=args.objective,
        restarts=args.restarts,
        max_evals=args.max_evals,
        tol=args.tol,
        fmt=args.fmt,
        out=args.out,
        workers=args.workers,
    ).validate()


def execute(cfg):
    if cfg.mode == "verify":
        return run_verify(cfg)
    if cfg.mode == "sweep":
        return run_sweep(cfg)
    if cfg.mode == "sample":
        result = run_sample(cfg)
        if cfg.fmt == "json":
            return result
        return result["records"]
    if cfg.mode == "optimize":
        from .optimize import run_optimize

        return run_optimize(cfg)
    from .threshold import run_threshold

    return run_threshold(cfg)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(args)
        result = execute(cfg)
        emit_report(result, cfg.fmt, cfg.out)
    except TheoremViolation as exc:
        log.error("theorem violation: %s", exc)
        sys.stderr.write(json.dumps(exc.diagnostics, default=str) + "\n")
        return EXIT_VIOLATION
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO
    except (ValueError, IndexError) as exc:
        log.error("invalid configuration: %s", exc)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
