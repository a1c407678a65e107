"""Serialization: JSON/CSV reports and the lambda file format.

Reals are written with 12 significant digits, field order is fixed and
every file ends with a newline, so identical inputs give identical bytes.
"""

import csv
import io
import json
import math
import sys

import numpy as np

from ..cloning import LambdaTable
from ..steering import SteeringReport

CSV_COLUMNS = (
    "d", "scenario", "family", "param", "sum_ab", "sum_ac", "total", "bound",
    "i_ab_1", "i_ab_2", "i_ac_1", "i_ac_2", "holevo_ac_1", "holevo_ac_2",
    "steerable_ab", "steerable_ac",
)

LOAD_TOL = 1e-9


def fmt_real(x):
    return f"{float(x):.12g}"


def _clean(obj):
    """Round reals to 12 significant digits recursively; NaN becomes null."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        if math.isnan(obj):
            return None
        return float(fmt_real(obj))
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    return obj


def report_to_dict(r):
    return {
        "d": r.d,
        "scenario": r.scenario,
        "family": r.family,
        "param": r.param,
        "lambda": r.lam.lam,
        "q1": r.q1,
        "q2": r.q2,
        "i_ab": list(r.i_ab),
        "i_ac": list(r.i_ac),
        "holevo_ac": list(r.holevo_ac),
        "sum_ab": r.sum_ab,
        "sum_ac": r.sum_ac,
        "total": r.total,
        "bound": r.bound_total,
        "steerable_ab": r.steerable_ab,
        "steerable_ac": r.steerable_ac,
    }


def report_to_row(r):
    vals = {
        "d": r.d, "scenario": r.scenario, "family": r.family, "param": r.param,
        "sum_ab": r.sum_ab, "sum_ac": r.sum_ac, "total": r.total, "bound": r.bound_total,
        "i_ab_1": r.i_ab[0], "i_ab_2": r.i_ab[1], "i_ac_1": r.i_ac[0], "i_ac_2": r.i_ac[1],
        "holevo_ac_1": r.holevo_ac[0], "holevo_ac_2": r.holevo_ac[1],
        "steerable_ab": r.steerable_ab, "steerable_ac": r.steerable_ac,
    }
    return [_csv_cell(vals[c]) for c in CSV_COLUMNS]


def _csv_cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return "" if math.isnan(v) else fmt_real(v)
    return str(v)


def to_jsonable(obj):
    if isinstance(obj, SteeringReport):
        return report_to_dict(obj)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    return obj


def render_json(obj):
    return json.dumps(_clean(to_jsonable(obj)), indent=2, allow_nan=False) + "\n"


def render_csv(obj):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(obj, SteeringReport):
        obj = [obj]
    if isinstance(obj, dict) and "records" in obj:
        obj = obj["records"]
    if isinstance(obj, (list, tuple)):
        w.writerow(CSV_COLUMNS)
        for r in obj:
            w.writerow(report_to_row(r))
    else:
        # flat key/value table for optimizer and threshold results
        flat = _flatten(_clean(to_jsonable(obj)))
        w.writerow(list(flat))
        w.writerow([_csv_cell(v) if not isinstance(v, str) else v for v in flat.values()])
    return buf.getvalue()


def _flatten(d, prefix=""):
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            out[key] = json.dumps(v, separators=(",", ":"))
        elif v is None:
            out[key] = ""
        else:
            out[key] = v
    return out


def render(obj, fmt):
    if fmt == "json":
        return render_json(obj)
    if fmt == "csv":
        return render_csv(obj)
    raise ValueError(f"unknown output format {fmt!r}")


def emit_report(obj, fmt="json", path=None):
    text = render(obj, fmt)
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def load_lambda(path):
    """Read ``{"d": int, "lambda": [[...], ...]}``; tiny normalization drift is corrected."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return lambda_from_dict(data)


def lambda_from_dict(data):
    try:
        d = data["d"]
        lam = np.array(data["lambda"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"lambda file needs 'd' and 'lambda' fields: {exc}") from None
    if not isinstance(d, int) or lam.shape != (d, d):
        raise ValueError(f"'lambda' must be a {d} x {d} array, got shape {lam.shape}")
    if np.any(lam < 0):
        raise ValueError("lambda entries must be nonnegative")
    total = lam.sum()
    if abs(total - 1) > LOAD_TOL:
        raise ValueError(f"lambda entries sum to {total}, expected 1 within {LOAD_TOL}")
    return LambdaTable(lam / total)


def save_lambda(table, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_json({"d": table.d, "lambda": table.lam}))
