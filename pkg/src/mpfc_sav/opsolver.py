"""Fast constant-coefficient solves by diagonalizing the discrete Laplacian.

With mirror ghost cells the cell-centered cosine modes
``cos(k pi (i + 1/2) / nx)`` are exact eigenvectors of the five-point
Laplacian, so the orthonormal DCT-II diagonalizes it; with periodic ghosts the
real FFT does. Any polynomial in the Laplacian is then inverted by one forward
transform, a pointwise division and one inverse transform.
"""
from dataclasses import dataclass

import numpy as np
from scipy import fft

from .grid import inner_m, mass, norm_m
from .errors import MeanZeroViolation

MEAN_ZERO_RTOL = 1e-10


def laplacian_eigenvalues_1d(n, h, periodic):
    """Eigenvalues of the 1D three-point Laplacian, in transform order."""
    k = np.arange(n)
    if periodic:
        return -(4.0 / h**2) * np.sin(np.pi * k / n) ** 2
    return -(4.0 / h**2) * np.sin(np.pi * k / (2 * n)) ** 2


@dataclass(frozen=True)
class ASymbol:
    """Coefficients of ``c0 I - c_lap3 L^3 - c_lap1 L`` for a Laplacian ``L``."""

    c0: float
    c_lap3: float
    c_lap1: float

    def __post_init__(self):
        if not self.c0 > 0 or self.c_lap3 < 0 or self.c_lap1 < 0:
            raise ValueError(f"operator symbol is not positive: {self}")

    @classmethod
    def crank_nicolson(cls, params, dt):
        return cls(
            c0=2.0 / dt**2 + params.beta / dt,
            c_lap3=0.5 * params.m,
            c_lap1=0.5 * params.m * params.alpha,
        )

    @classmethod
    def first_order(cls, params, dt):
        return cls(
            c0=(1.0 + params.beta * dt) / dt**2,
            c_lap3=params.m,
            c_lap1=params.m * params.alpha,
        )

    def __call__(self, lam):
        return self.c0 - self.c_lap3 * lam**3 - self.c_lap1 * lam


class SpectralPlan:
    """Tensor-product eigenbasis of the Laplacian on one grid.

    ``eigs`` is laid out like the transform coefficients, so for ``L`` the
    Laplacian ``inverse(g(eigs) * forward(f)) == g(L) f``.
    """

    def __init__(self, grid):
        self.grid = grid
        periodic = grid.periodic
        self.eig_x = laplacian_eigenvalues_1d(grid.nx, grid.hx, periodic)
        eig_y = laplacian_eigenvalues_1d(grid.ny, grid.hy, periodic)
        if periodic:
            eig_y = eig_y[: grid.ny // 2 + 1]
        self.eig_y = eig_y
        eigs = self.eig_x[:, None] + self.eig_y[None, :]
        eigs[0, 0] = 0.0
        eigs.flags.writeable = False
        self.eigs = eigs
        # 1 / (-lambda) with the constant mode dropped
        inv = np.zeros_like(eigs)
        nz = eigs != 0.0
        inv[nz] = -1.0 / eigs[nz]
        inv.flags.writeable = False
        self._inv_neg_eigs = inv

    def forward(self, f):
        if self.grid.periodic:
            return fft.rfftn(f, axes=(0, 1))
        return fft.dctn(f, type=2, norm="ortho")

    def inverse(self, coef):
        if self.grid.periodic:
            return fft.irfftn(coef, s=self.grid.shape, axes=(0, 1))
        return fft.idctn(coef, type=2, norm="ortho")

    def apply_function(self, f, values):
        """Apply the operator whose eigenvalues are ``values`` to ``f``."""
        return self.inverse(values * self.forward(f))


def make_plan(grid):
    return SpectralPlan(grid)


def _finite(f, name):
    if not np.all(np.isfinite(f)):
        raise ValueError(f"{name} contains non-finite values")


def apply_inverse_A(plan, symbol, rhs):
    """Solve ``(c0 I - c_lap3 L^3 - c_lap1 L) z = rhs``."""
    rhs = plan.grid.check_field(rhs, "rhs")
    _finite(rhs, "rhs")
    return plan.apply_function(rhs, 1.0 / symbol(plan.eigs))


def check_mean_zero(grid, f, rtol=MEAN_ZERO_RTOL):
    # |(f,1)_m| <= ||f||_m ||1||_m, so the test is scale- and domain-invariant
    m = mass(grid, f)
    tol = rtol * norm_m(grid, f) * np.sqrt(grid.area)
    if abs(m) > tol:
        raise MeanZeroViolation(m, tol)


def inv_neg_laplacian(plan, f):
    """Mean-zero solution of ``-L eta = f`` for mean-zero ``f``."""
    grid = plan.grid
    f = grid.check_field(f)
    _finite(f, "f")
    check_mean_zero(grid, f)
    return plan.apply_function(f, plan._inv_neg_eigs)


def hminus1_inner(plan, f, g):
    check_mean_zero(plan.grid, plan.grid.check_field(f))
    return inner_m(plan.grid, f, inv_neg_laplacian(plan, g))


def hminus1_norm(plan, f):
    return np.sqrt(max(hminus1_inner(plan, f, f), 0.0))
