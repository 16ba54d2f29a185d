"""Closed-form weak measurements of spin-1/2 systems and a test of crypto-nonlocal hidden variables."""
from .spin_core import (
    BlochDirection,
    SpinState,
    apply_rotation_x,
    direction_from_ket,
    ket_from_direction,
    prob_up_z,
    rotate_x,
    rotation_x_matrix,
)
from .pointer import WmConfig, amplitude, f_ratio, f_ratio_flagged, outcome_density
from .weak_measurement import (
    WmOutcome,
    apply_f,
    apply_wm,
    delta_theta,
    nm_limit_classify,
    post_theta,
    sample_outcome,
    sample_outcomes,
)
from .entangled_cnl import (
    CnlReport,
    NormalizationError,
    SourceDistribution,
    SphereQuadrature,
    TwoQubitState,
    cnl_lhs,
    cnl_test,
    conditional_joint_probs,
    hv_secondary_prob,
    qm_marginal,
    singlet,
)

__version__ = "0.1.0"
