"""Block-centered grid, difference operators and discrete inner products.

Fields are plain float64 arrays of shape ``(nx, ny)`` indexed ``[i, j]`` with
``i`` along x; cell ``(i, j)`` (0-based) has center
``((i + 1/2) hx, (j + 1/2) hy)``. Edge fields hold differences across cell
faces. Under Neumann conditions only the ``nx - 1`` interior x-faces are
stored (boundary fluxes vanish by construction); under periodic conditions
all ``nx`` faces are stored, face ``i`` sitting between cells ``i`` and
``i + 1 (mod nx)``.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .errors import ContractViolation


class BoundaryKind(str, Enum):
    NEUMANN = "neumann"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class GridSpec:
    """Uniform rectangular cell-centered grid on ``(0, lx) x (0, ly)``."""

    nx: int
    ny: int
    lx: float = 1.0
    ly: float = 1.0
    bc: BoundaryKind = BoundaryKind.NEUMANN

    def __post_init__(self):
        if int(self.nx) != self.nx or int(self.ny) != self.ny:
            raise ValueError("nx and ny must be integers")
        if self.nx < 2 or self.ny < 2:
            raise ValueError(f"grid needs at least 2 cells per direction, got {self.nx}x{self.ny}")
        if not (np.isfinite(self.lx) and np.isfinite(self.ly)) or self.lx <= 0 or self.ly <= 0:
            raise ValueError(f"domain lengths must be positive, got lx={self.lx}, ly={self.ly}")
        object.__setattr__(self, "nx", int(self.nx))
        object.__setattr__(self, "ny", int(self.ny))
        object.__setattr__(self, "lx", float(self.lx))
        object.__setattr__(self, "ly", float(self.ly))
        object.__setattr__(self, "bc", BoundaryKind(self.bc))

    @property
    def hx(self):
        return self.lx / self.nx

    @property
    def hy(self):
        return self.ly / self.ny

    @property
    def shape(self):
        return (self.nx, self.ny)

    @property
    def cell_area(self):
        return self.hx * self.hy

    @property
    def area(self):
        return self.lx * self.ly

    @property
    def periodic(self):
        return self.bc is BoundaryKind.PERIODIC

    def x_centers(self):
        return (np.arange(self.nx) + 0.5) * self.hx

    def y_centers(self):
        return (np.arange(self.ny) + 0.5) * self.hy

    def mesh(self):
        """Cell-center coordinates as two ``(nx, ny)`` arrays."""
        return np.meshgrid(self.x_centers(), self.y_centers(), indexing="ij")

    def refined(self, factor=2):
        return GridSpec(self.nx * factor, self.ny * factor, self.lx, self.ly, self.bc)

    def with_cells(self, nx, ny=None):
        return GridSpec(nx, nx if ny is None else ny, self.lx, self.ly, self.bc)

    def zeros(self):
        return np.zeros(self.shape)

    def constant(self, value):
        return np.full(self.shape, float(value))

    def check_field(self, f, name="field"):
        f = np.asarray(f, dtype=float)
        if f.shape != self.shape:
            raise ContractViolation(f"{name} has shape {f.shape}, grid expects {self.shape}")
        return f

    def x_edge_shape(self):
        return (self.nx if self.periodic else self.nx - 1, self.ny)

    def y_edge_shape(self):
        return (self.nx, self.ny if self.periodic else self.ny - 1)


def dx_edge(grid, f):
    f = grid.check_field(f)
    if grid.periodic:
        return (np.roll(f, -1, axis=0) - f) / grid.hx
    return (f[1:, :] - f[:-1, :]) / grid.hx


def dy_edge(grid, f):
    f = grid.check_field(f)
    if grid.periodic:
        return (np.roll(f, -1, axis=1) - f) / grid.hy
    return (f[:, 1:] - f[:, :-1]) / grid.hy


def _check_edge(w, shape, name):
    w = np.asarray(w, dtype=float)
    if w.shape != shape:
        raise ContractViolation(f"{name} has shape {w.shape}, expected {shape}")
    return w


def div_x(grid, w):
    w = _check_edge(w, grid.x_edge_shape(), "x-edge field")
    if grid.periodic:
        return (w - np.roll(w, 1, axis=0)) / grid.hx
    # boundary faces carry zero flux
    padded = np.zeros((grid.nx + 1, grid.ny))
    padded[1:-1] = w
    return (padded[1:] - padded[:-1]) / grid.hx


def div_y(grid, w):
    w = _check_edge(w, grid.y_edge_shape(), "y-edge field")
    if grid.periodic:
        return (w - np.roll(w, 1, axis=1)) / grid.hy
    padded = np.zeros((grid.nx, grid.ny + 1))
    padded[:, 1:-1] = w
    return (padded[:, 1:] - padded[:, :-1]) / grid.hy


def laplacian(grid, f):
    """Five-point block-centered Laplacian with mirror (Neumann) or wrapped ghosts.

    Applying it repeatedly gives the discrete bi- and tri-Laplacian; the mirror
    ghost is re-imposed at every application.
    """
    f = np.ascontiguousarray(grid.check_field(f))
    inv_hx2 = 1.0 / grid.hx**2
    inv_hy2 = 1.0 / grid.hy**2
    if grid.periodic:
        return _kernels.laplacian_periodic(f, inv_hx2, inv_hy2)
    return _kernels.laplacian_neumann(f, inv_hx2, inv_hy2)


def laplacian_power(grid, f, power):
    for _ in range(power):
        f = laplacian(grid, f)
    return f


def inner_m(grid, f, g):
    f = grid.check_field(f)
    g = grid.check_field(g)
    return float(np.vdot(f, g)) * grid.cell_area


def inner_x(grid, u, v):
    shape = grid.x_edge_shape()
    u = _check_edge(u, shape, "x-edge field")
    v = _check_edge(v, shape, "x-edge field")
    return float(np.vdot(u, v)) * grid.cell_area


def inner_y(grid, u, v):
    shape = grid.y_edge_shape()
    u = _check_edge(u, shape, "y-edge field")
    v = _check_edge(v, shape, "y-edge field")
    return float(np.vdot(u, v)) * grid.cell_area


def mass(grid, f):
    """Discrete integral (f, 1)_m."""
    return float(np.sum(grid.check_field(f))) * grid.cell_area


def norm_m(grid, f):
    return np.sqrt(inner_m(grid, f, f))


def grad_norm(grid, f):
    """sqrt((d_x f, d_x f)_x + (d_y f, d_y f)_y)."""
    gx = dx_edge(grid, f)
    gy = dy_edge(grid, f)
    return np.sqrt(inner_x(grid, gx, gx) + inner_y(grid, gy, gy))
