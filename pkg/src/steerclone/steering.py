"""Measurement statistics, mutual information and the no-cloning bound for the EPR setup."""

from dataclasses import dataclass, field

import numpy as np

from .cloning import A, B, C, LambdaTable, build_four_partite, four_partite_tensor
from .qudit import (
    MAX_FULL_STATE_D,
    NORM_TOL,
    DensityMatrix,
    basis_matrix,
    check_dimension,
    clip_probabilities,
    partial_trace,
    shannon_entropy,
    von_neumann_entropy,
)

SETTINGS = (1, 2)
PAIRS = {"AB": (A, B), "AC": (A, C)}
EQ_TOL = 1e-9


class TheoremViolation(RuntimeError):
    """A computed report broke the no-cloning bound or one of its intermediate links."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


def _check_setting(setting):
    if setting not in SETTINGS:
        raise ValueError(f"measurement setting must be 1 or 2, got {setting!r}")
    return setting


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """``table[a, b] = P(a, b)`` for one pair of measurement settings."""

    table: np.ndarray

    def __post_init__(self):
        t = clip_probabilities(np.asarray(self.table, dtype=float))
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise ValueError(f"joint distribution must be square, got {t.shape}")
        if abs(t.sum() - 1) > NORM_TOL:
            raise ValueError(f"joint distribution sums to {t.sum()}")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def d(self):
        return self.table.shape[0]

    def marginal_a(self):
        return self.table.sum(axis=1)

    def marginal_b(self):
        return self.table.sum(axis=0)


@dataclass(frozen=True, eq=False)
class QProfile:
    setting: int
    q: np.ndarray

    @property
    def d(self):
        return self.q.size

    def entropy(self):
        return shannon_entropy(self.q)


def born_table(rho4, fa, fb):
    """P(a, b) from a two-qudit density tensor ``rho4[x, y, x', y']`` and basis columns."""
    t = np.einsum("xa,yb,xyuv,ua,vb->ab", fa.conj(), fb.conj(), rho4, fa, fb)
    return t.real


def joint_distribution(rho, setting_a, setting_b):
    if len(rho.dims) != 2:
        raise ValueError(f"joint_distribution needs a two-qudit state, got dims {rho.dims}")
    da, db = rho.dims
    fa = basis_matrix(da, _check_setting(setting_a))
    fb = basis_matrix(db, _check_setting(setting_b))
    rho4 = rho.entries.reshape(da, db, da, db)
    return JointDistribution(born_table(rho4, fa, fb))


def conditional_entropy(jd):
    """H(B|A) = -sum_a P(a) sum_b P(b|a) log2 P(b|a)."""
    pa = jd.marginal_a()
    out = 0.0
    for a in np.flatnonzero(pa > 0):
        cond = jd.table[a] / pa[a]
        cond = cond[cond > 0]
        out -= pa[a] * np.sum(cond * np.log2(cond))
    return float(out)


def mutual_information(jd):
    """I(A:B) = H(B) - H(B|A) in bits; roundoff below zero is reported as zero."""
    return max(0.0, shannon_entropy(jd.marginal_b()) - conditional_entropy(jd))


def q_profile(table, setting):
    """Row sums of lambda (setting 1) or column sums read at column (d - t) mod d (setting 2)."""
    _check_setting(setting)
    lam = table.lam
    if setting == 1:
        q = lam.sum(axis=1)
    else:
        q = lam.sum(axis=0)[(-np.arange(table.d)) % table.d]
    return QProfile(setting, q)


def mutual_info_closed_form(table, setting):
    return float(np.log2(table.d)) - q_profile(table, setting).entropy()


def _pair_state(psi, pair):
    try:
        keep = PAIRS[pair]
    except KeyError:
        raise ValueError(f"party pair must be 'AB' or 'AC', got {pair!r}") from None
    return partial_trace(psi, keep)


def mutual_info_oracle(table, pair, setting):
    """Born-rule mutual information from the full four-qudit state, same basis on both parties."""
    check_dimension(table.d, MAX_FULL_STATE_D)
    rho = _pair_state(build_four_partite(table), pair)
    return mutual_information(joint_distribution(rho, setting, setting))


def oracle_pair_distributions(table, pair):
    """Joint distributions for both settings on one party pair, sharing a single state build."""
    check_dimension(table.d, MAX_FULL_STATE_D)
    rho = _pair_state(build_four_partite(table), pair)
    return [joint_distribution(rho, s, s) for s in SETTINGS]


def steering_sum(table, pair):
    if pair == "AB":
        return 2 * float(np.log2(table.d)) - sum(q_profile(table, s).entropy() for s in SETTINGS)
    return sum(mutual_information(jd) for jd in oracle_pair_distributions(table, pair))


def check_steering(total, d, tol=EQ_TOL):
    """Entropic steering test: the two-setting sum must exceed log2 d.

    The inequality is strict; values within ``tol`` of the bound count as
    equal and therefore as not steerable.
    """
    bound = float(np.log2(d))
    if total < -tol or total > 2 * bound + tol:
        raise ValueError(f"two-setting MI sum {total} outside [0, {2 * bound}]")
    return bool(total - bound > tol)


def conditional_cc_state(table, setting, a):
    """CC' state after Alice finds ``a`` in the given basis, with B traced out."""
    d = check_dimension(table.d, MAX_FULL_STATE_D)
    if not 0 <= a < d:
        raise IndexError(f"outcome a={a} out of range for d={d}")
    f = basis_matrix(d, _check_setting(setting))
    branch = np.einsum("x,xbcy->bcy", f[:, a].conj(), four_partite_tensor(table))
    branch = branch.reshape(d, d * d)
    rho = branch.T @ branch.conj()
    return DensityMatrix(rho / np.trace(rho).real, (d, d))


def holevo_bound_ac(table, setting):
    """S(rho_CC') - sum_a P(a) S(rho_CC'|a), in closed form H(lambda) - H(q_setting)."""
    return table.entropy() - q_profile(table, setting).entropy()


def holevo_quantity(states, probs):
    """Holevo chi of an ensemble of density matrices."""
    probs = np.asarray(probs, dtype=float)
    avg = sum(p * s.entries for p, s in zip(probs, states))
    avg = DensityMatrix(avg, states[0].dims)
    return von_neumann_entropy(avg) - float(
        sum(p * von_neumann_entropy(s) for p, s in zip(probs, states))
    )


def per_setting_ac_bound(table, setting):
    h1, h2 = (q_profile(table, s).entropy() for s in SETTINGS)
    return h1 + h2 - q_profile(table, setting).entropy()


@dataclass(frozen=True, eq=False)
class SteeringReport:
    scenario: str
    lam: LambdaTable
    i_ab: tuple
    i_ac: tuple
    q1: np.ndarray
    q2: np.ndarray
    holevo_ac: tuple
    sum_ab: float
    sum_ac: float
    total: float
    bound_total: float
    steerable_ab: bool
    steerable_ac: bool
    family: str = "custom"
    param: float = field(default=float("nan"))

    @property
    def d(self):
        return self.lam.d

    def ac_bounds(self):
        h1, h2 = shannon_entropy(self.q1), shannon_entropy(self.q2)
        return (h2, h1)


def assemble_report(scenario, table, i_ab, i_ac, holevo_ac, tol=EQ_TOL, family="custom", param=float("nan")):
    d = table.d
    sum_ab = float(sum(i_ab))
    sum_ac = float(sum(i_ac))
    report = SteeringReport(
        scenario=scenario,
        lam=table,
        i_ab=tuple(float(x) for x in i_ab),
        i_ac=tuple(float(x) for x in i_ac),
        q1=q_profile(table, 1).q,
        q2=q_profile(table, 2).q,
        holevo_ac=tuple(float(x) for x in holevo_ac),
        sum_ab=sum_ab,
        sum_ac=sum_ac,
        total=sum_ab + sum_ac,
        bound_total=2 * float(np.log2(d)),
        steerable_ab=check_steering(sum_ab, d, tol),
        steerable_ac=check_steering(sum_ac, d, tol),
        family=family,
        param=param,
    )
    verify_report(report, tol)
    return report


def verify_report(report, tol=EQ_TOL):
    """Raise TheoremViolation unless every link of the bound chain holds within ``tol``."""
    bounds = report.ac_bounds()
    problems = []
    log_d = report.bound_total / 2
    for name, vals in (("i_ab", report.i_ab), ("i_ac", report.i_ac)):
        for i, v in enumerate(vals, start=1):
            if not -tol <= v <= log_d + tol:
                problems.append(f"{name}[{i}]={v} outside [0, log2 d]")
    for i in range(2):
        if report.i_ac[i] > report.holevo_ac[i] + tol:
            problems.append(f"I_AC setting {i + 1} exceeds Holevo quantity")
        if report.holevo_ac[i] > bounds[i] + tol:
            problems.append(f"Holevo quantity setting {i + 1} exceeds per-setting bound")
    if report.sum_ab + sum(bounds) > report.bound_total + tol:
        problems.append("sum_ab + sum of per-setting AC bounds exceeds 2 log2 d")
    if report.sum_ac > sum(bounds) + tol:
        problems.append("sum_ac exceeds sum of per-setting AC bounds")
    if report.total > report.bound_total + tol:
        problems.append("total exceeds 2 log2 d")
    if report.steerable_ab and report.steerable_ac:
        problems.append("both copies flagged steerable")
    if problems:
        diagnostics = {
            "d": report.d,
            "scenario": report.scenario,
            "lambda": report.lam.tolist(),
            "i_ab": report.i_ab,
            "i_ac": report.i_ac,
            "holevo_ac": report.holevo_ac,
            "per_setting_ac_bound": bounds,
            "total": report.total,
        }
        raise TheoremViolation("; ".join(problems), diagnostics)


def no_cloning_report(table, tol=EQ_TOL, family="custom", param=float("nan")):
    """Full EPR-scenario report: closed-form AB side, Born-rule AC side."""
    i_ab = [mutual_info_closed_form(table, s) for s in SETTINGS]
    i_ac = [mutual_information(jd) for jd in oracle_pair_distributions(table, "AC")]
    holevo = [holevo_bound_ac(table, s) for s in SETTINGS]
    return assemble_report("epr", table, i_ab, i_ac, holevo, tol, family, param)
