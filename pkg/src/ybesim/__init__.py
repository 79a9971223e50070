"""Numerical simulator for the two-dimensional Yang-Baxter equation in linear optics."""
from .experiment import (
    MonteCarloConfig,
    ProbeSet,
    fidelity_cybe,
    montecarlo_cybe,
    necessity_scan,
    output_states,
    prepare_state,
    sweep_theta2,
)
from .kernels import BACKEND
from .linalg import PolarizationState, dist_up_to_phase
from .optics import decompose_A, decompose_B, evaluate_sequence, sequence_side, u_H, u_Q
from .ybe import (
    AngleTriple,
    SecantPoleError,
    SpectralPoint,
    braid_residual,
    constraint_residual,
    lhs,
    lorentz_compose,
    op_A,
    op_B,
    rhs,
    theta2_star,
    theta_from_spectral,
)

__version__ = "0.1.0"

__all__ = [
    "AngleTriple", "BACKEND", "MonteCarloConfig", "PolarizationState", "ProbeSet",
    "SecantPoleError", "SpectralPoint", "braid_residual", "constraint_residual",
    "decompose_A", "decompose_B", "dist_up_to_phase", "evaluate_sequence",
    "fidelity_cybe", "lhs", "lorentz_compose", "montecarlo_cybe", "necessity_scan",
    "op_A", "op_B", "output_states", "prepare_state", "rhs", "sequence_side",
    "sweep_theta2", "theta2_star", "theta_from_spectral", "u_H", "u_Q",
]
