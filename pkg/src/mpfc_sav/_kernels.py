"""Five-point Laplacian kernels on cell-centered grids.

Each kernel has a numba version and a numpy version computing the same
expression in the same order. ``laplacian_neumann`` / ``laplacian_periodic``
point at the numba versions unless JIT is disabled (see ``_accel``).
"""
import numpy as np

from ._accel import JIT_ENABLED, njit


def _laplacian_neumann_numpy(f, inv_hx2, inv_hy2):
    # mirror ghost cells: g_0 = g_1, g_{n+1} = g_n
    p = np.pad(f, 1, mode="edge")
    c = p[1:-1, 1:-1]
    return (p[2:, 1:-1] - 2.0 * c + p[:-2, 1:-1]) * inv_hx2 + (
        p[1:-1, 2:] - 2.0 * c + p[1:-1, :-2]
    ) * inv_hy2


def _laplacian_periodic_numpy(f, inv_hx2, inv_hy2):
    p = np.pad(f, 1, mode="wrap")
    c = p[1:-1, 1:-1]
    return (p[2:, 1:-1] - 2.0 * c + p[:-2, 1:-1]) * inv_hx2 + (
        p[1:-1, 2:] - 2.0 * c + p[1:-1, :-2]
    ) * inv_hy2


@njit
def _laplacian_neumann_numba(f, inv_hx2, inv_hy2):
    nx, ny = f.shape
    out = np.empty_like(f)
    for i in range(nx):
        im = i - 1 if i > 0 else 0
        ip = i + 1 if i < nx - 1 else nx - 1
        for j in range(ny):
            jm = j - 1 if j > 0 else 0
            jp = j + 1 if j < ny - 1 else ny - 1
            c = f[i, j]
            out[i, j] = (f[ip, j] - 2.0 * c + f[im, j]) * inv_hx2 + (
                f[i, jp] - 2.0 * c + f[i, jm]
            ) * inv_hy2
    return out


@njit
def _laplacian_periodic_numba(f, inv_hx2, inv_hy2):
    nx, ny = f.shape
    out = np.empty_like(f)
    for i in range(nx):
        im = i - 1 if i > 0 else nx - 1
        ip = i + 1 if i < nx - 1 else 0
        for j in range(ny):
            jm = j - 1 if j > 0 else ny - 1
            jp = j + 1 if j < ny - 1 else 0
            c = f[i, j]
            out[i, j] = (f[ip, j] - 2.0 * c + f[im, j]) * inv_hx2 + (
                f[i, jp] - 2.0 * c + f[i, jm]
            ) * inv_hy2
    return out


NUMPY_KERNELS = {
    "neumann": _laplacian_neumann_numpy,
    "periodic": _laplacian_periodic_numpy,
}
NUMBA_KERNELS = {
    "neumann": _laplacian_neumann_numba,
    "periodic": _laplacian_periodic_numba,
}

if JIT_ENABLED:
    laplacian_neumann = _laplacian_neumann_numba
    laplacian_periodic = _laplacian_periodic_numba
else:
    laplacian_neumann = _laplacian_neumann_numpy
    laplacian_periodic = _laplacian_periodic_numpy
