"""MPFC free energy pieces and the discrete pseudo energy.

The bulk potential is F(z) = z^4 / 4. The SAV variable tracks
r = sqrt(E1h(z) + c0), where ``c0`` is an optional nonnegative shift (zero by
default, i.e. no regularization).
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateEnergy
from .grid import grad_norm, laplacian, norm_m, dx_edge, dy_edge, inner_x, inner_y
from .opsolver import hminus1_norm

E1H_FLOOR = 1e-14


@dataclass(frozen=True)
class ModelParams:
    epsilon: float
    beta: float
    m: float
    c0: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not self.beta >= 0.0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")
        if not self.m > 0.0:
            raise ValueError(f"mobility m must be > 0, got {self.m}")
        if not self.c0 >= 0.0:
            raise ValueError(f"c0 must be >= 0, got {self.c0}")
        for name in ("epsilon", "beta", "m", "c0"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @property
    def alpha(self):
        return 1.0 - self.epsilon


def f_potential(z):
    return 0.25 * np.asarray(z) ** 4


def f_prime(z):
    return np.asarray(z) ** 3


def e1h(grid, z):
    """Midpoint quadrature of F(z) over the grid."""
    z = grid.check_field(z)
    return 0.25 * float(np.sum(z**4)) * grid.cell_area


def sav_energy(grid, z, c0=0.0):
    """E1h(z) + c0, the quantity under the SAV square root."""
    return e1h(grid, z) + c0


def b_field(grid, z_tilde, c0=0.0):
    """F'(z) / sqrt(E1h(z) + c0).

    Evaluated as ``s u^3 / sqrt(E1h(u) + c0 / s^4)`` with ``u = z / s`` and
    ``s = max|z|``: the quotient is homogeneous of degree one, so it stays
    well conditioned when the field passes close to zero. Only an identically
    zero field (with ``c0 = 0``) is rejected.
    """
    z = grid.check_field(z_tilde, "z_tilde")
    s = float(np.max(np.abs(z)))
    if not np.isfinite(s):
        raise ValueError("z_tilde contains non-finite values")
    if s == 0.0:
        if c0 < E1H_FLOOR:
            raise DegenerateEnergy(
                f"E1h + c0 = {c0:.3e} is below the floor {E1H_FLOOR:.0e}; "
                "the SAV quotient is undefined for an identically zero field"
            )
        return np.zeros(grid.shape)
    u = z / s
    with np.errstate(over="ignore"):
        shifted = e1h(grid, u) + c0 / s**4
    return (s * u**3) / np.sqrt(shifted)


def quadratic_energy(grid, z, alpha):
    """1/2 ||L z||_m^2 - ||grad z||^2 + alpha/2 ||z||_m^2."""
    lap = laplacian(grid, z)
    return 0.5 * norm_m(grid, lap) ** 2 - grad_norm(grid, z) ** 2 + 0.5 * alpha * norm_m(grid, z) ** 2


def original_energy(grid, z, params):
    return quadratic_energy(grid, z, params.alpha) + e1h(grid, z)


def pseudo_energy(plan, z, r, psi, params):
    grid = plan.grid
    return (
        quadratic_energy(grid, z, params.alpha)
        + r * r
        + hminus1_norm(plan, psi) ** 2 / (2.0 * params.m)
    )


def gradient_increment_sq(grid, z, z_prev):
    """||grad z - grad z_prev||^2."""
    d = np.asarray(z) - np.asarray(z_prev)
    gx = dx_edge(grid, d)
    gy = dy_edge(grid, d)
    return inner_x(grid, gx, gx) + inner_y(grid, gy, gy)


def pseudo_energy_tilde(plan, z, z_prev, r, psi, params):
    """Pseudo energy plus half the squared gradient increment."""
    return pseudo_energy(plan, z, r, psi, params) + 0.5 * gradient_increment_sq(plan.grid, z, z_prev)
