"""Single-system analogue: Alice prepares |s>_i, the cloner acts on that qudit alone."""

from dataclasses import dataclass

import numpy as np

from .cloning import _cc_index
from .qudit import (
    MAX_FULL_STATE_D,
    StateVector,
    basis_matrix,
    bell_table,
    check_dimension,
    generalized_pauli,
    partial_trace,
)
from .steering import (
    EQ_TOL,
    SETTINGS,
    JointDistribution,
    TheoremViolation,
    _check_setting,
    assemble_report,
    holevo_quantity,
    mutual_info_closed_form,
    mutual_information,
)

B, C, CP = 0, 1, 2


@dataclass(frozen=True)
class Preparation:
    setting: int
    s: int

    def vector(self, d):
        _check_setting(self.setting)
        if not 0 <= self.s < d:
            raise IndexError(f"prepared index s={self.s} out of range for d={d}")
        return basis_matrix(d, self.setting)[:, self.s]


def _tripartite_tensor(table, prep):
    d = table.d
    ket = prep.vector(d)
    shifted = np.array(
        [[generalized_pauli(d, j, k) @ ket for k in range(d)] for j in range(d)]
    )
    cc = bell_table(d)[:, _cc_index(d)]
    return np.einsum("jk,jkb,jkcx->bcx", np.sqrt(table.lam), shifted, cc)


def build_tripartite_ss(table, prep):
    """|phi>_BCC' = sum_jk sqrt(lam_jk) U_jk|s>_B |phi_{j,-k}>_CC'."""
    d = check_dimension(table.d, MAX_FULL_STATE_D)
    return StateVector(_tripartite_tensor(table, prep).ravel(), (d, d, d))


def _conditional_states(table, setting):
    d = check_dimension(table.d, MAX_FULL_STATE_D)
    return [build_tripartite_ss(table, Preparation(setting, s)) for s in range(d)]


def _outcome_probs(rho, setting):
    f = basis_matrix(rho.dim, setting)
    return np.einsum("xb,xy,yb->b", f.conj(), rho.entries, f).real


def _joint_from_states(states, setting, party):
    d = len(states)
    keep = {"B": B, "C": C}.get(party)
    if keep is None:
        raise ValueError(f"party must be 'B' or 'C', got {party!r}")
    rows = [_outcome_probs(partial_trace(psi, [keep]), setting) for psi in states]
    return JointDistribution(np.array(rows) / d)


def ss_joint_distribution(table, setting, party):
    """P(s, b) for a uniformly chosen preparation s, measured in the preparation basis."""
    _check_setting(setting)
    return _joint_from_states(_conditional_states(table, setting), setting, party)


def ss_report(table, tol=EQ_TOL, family="custom", param=float("nan")):
    d = table.d
    i_ab, i_ac, holevo = [], [], []
    for setting in SETTINGS:
        states = _conditional_states(table, setting)
        i_ab.append(mutual_information(_joint_from_states(states, setting, "B")))
        i_ac.append(mutual_information(_joint_from_states(states, setting, "C")))
        cc = [partial_trace(psi, [C, CP]) for psi in states]
        holevo.append(holevo_quantity(cc, np.full(d, 1.0 / d)))
        closed = mutual_info_closed_form(table, setting)
        if abs(i_ab[-1] - closed) > tol:
            raise TheoremViolation(
                f"SS Bob-side MI {i_ab[-1]} differs from closed form {closed} (setting {setting})",
                {"lambda": table.tolist(), "setting": setting},
            )
    return assemble_report("ss", table, i_ab, i_ac, holevo, tol, family, param)
