"""Simulation of how entropic steering is shared between the two outputs of a universal qudit cloner."""

from .cloning import LambdaTable, build_four_partite, make_family, rho_ab, rho_cc
from .qudit import (
    DensityMatrix,
    StateVector,
    bell_state,
    fourier_basis_vector,
    generalized_pauli,
    partial_trace,
    shannon_entropy,
    tensor,
    von_neumann_entropy,
)
from .ss import Preparation, build_tripartite_ss, ss_joint_distribution, ss_report
from .steering import (
    JointDistribution,
    SteeringReport,
    TheoremViolation,
    check_steering,
    conditional_cc_state,
    holevo_bound_ac,
    joint_distribution,
    mutual_info_closed_form,
    mutual_info_oracle,
    mutual_information,
    no_cloning_report,
    per_setting_ac_bound,
    q_profile,
    steering_sum,
)

__version__ = "0.1.0"
