"""Linear, mass-conserving, energy-stable SAV schemes for the modified phase field crystal equation."""
from ._accel import JIT_ENABLED
from .errors import (
    ConfigError,
    ContractViolation,
    DegenerateEnergy,
    MeanZeroViolation,
    MPFCError,
    SnapshotError,
    SolvabilityViolation,
)
from .grid import BoundaryKind, GridSpec, grad_norm, inner_m, laplacian, mass, norm_m
from .model import ModelParams, b_field, e1h, f_prime, original_energy, pseudo_energy, pseudo_energy_tilde
from .opsolver import ASymbol, SpectralPlan, apply_inverse_A, hminus1_inner, hminus1_norm, inv_neg_laplacian, make_plan
from .stepper import (
    SavState,
    TimeSpec,
    bootstrap_first_step,
    init_state,
    make_workspace,
    residual_check,
    step_cn,
    step_first_order,
)

__version__ = "0.1.0"
