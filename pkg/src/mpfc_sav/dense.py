"""Dense reference assemblies used as independent oracles on small grids.

Everything here is built from explicit 1D difference matrices and Kronecker
products and solved with LAPACK; nothing goes through the spectral path or the
stencil kernels. Fields are flattened in C order of the ``(nx, ny)`` array.
"""
import numpy as np


def second_difference_1d(n, h, periodic):
    t = np.zeros((n, n))
    for i in range(n):
        t[i, i] = -2.0
        if i > 0:
            t[i, i - 1] = 1.0
        elif periodic:
            t[i, n - 1] += 1.0
        else:
            t[i, i] += 1.0  # mirror ghost g_0 = g_1
        if i < n - 1:
            t[i, i + 1] = 1.0
        elif periodic:
            t[i, 0] += 1.0
        else:
            t[i, i] += 1.0
    return t / h**2


def laplacian_matrix(grid):
    tx = second_difference_1d(grid.nx, grid.hx, grid.periodic)
    ty = second_difference_1d(grid.ny, grid.hy, grid.periodic)
    return np.kron(tx, np.eye(grid.ny)) + np.kron(np.eye(grid.nx), ty)


def a_matrix(grid, symbol, dtype=float):
    lap = laplacian_matrix(grid).astype(dtype)
    n = lap.shape[0]
    return (
        dtype(symbol.c0) * np.eye(n, dtype=dtype)
        - dtype(symbol.c_lap3) * (lap @ lap @ lap)
        - dtype(symbol.c_lap1) * lap
    )


def refined_solve(matrix, rhs, matrix_ext=None, iterations=4):
    """LU solve followed by iterative refinement with extended-precision residuals.

    The sixth-order operator is badly conditioned for large dt on fine grids;
    refinement recovers full double accuracy as long as cond * eps < 1.
    """
    if matrix_ext is None:
        matrix_ext = matrix.astype(np.longdouble)
    rhs_ext = np.asarray(rhs, dtype=np.longdouble)
    x = np.linalg.solve(matrix, rhs)
    for _ in range(iterations):
        resid = rhs_ext - matrix_ext @ x.astype(np.longdouble)
        x = x + np.linalg.solve(matrix, resid.astype(float))
    return x


def solve_a(grid, symbol, rhs):
    a_ext = a_matrix(grid, symbol, np.longdouble)
    x = refined_solve(a_ext.astype(float), np.ravel(rhs), a_ext)
    return x.reshape(grid.shape)


def solve_neg_laplacian(grid, f):
    """Bordered system [-L 1; 1^T 0] [eta; mu] = [f; 0] for the mean-zero solution."""
    lap = laplacian_matrix(grid)
    n = lap.shape[0]
    k = np.zeros((n + 1, n + 1))
    k[:n, :n] = -lap
    k[:n, n] = 1.0
    k[n, :n] = 1.0
    rhs = np.zeros(n + 1)
    rhs[:n] = np.ravel(f)
    return np.linalg.solve(k, rhs)[:n].reshape(grid.shape)


def _b_vector(grid, z, c0):
    z = np.ravel(z)
    e1 = np.sum(0.25 * z**4) * grid.hx * grid.hy
    return z**3 / np.sqrt(e1 + c0)


def monolithic_cn_step(grid, params, dt, z, psi, r, z_tilde):
    """Solve the coupled Crank-Nicolson system for (Z', Psi', W^{n+1/2}, R').

    Unknown ordering: [Z' (n), Psi' (n), W (n), R' (1)].
    """
    lap = laplacian_matrix(grid)
    n = lap.shape[0]
    eye = np.eye(n)
    w_area = grid.hx * grid.hy
    m, beta, alpha = params.m, params.beta, params.alpha
    z, psi, zt = np.ravel(z), np.ravel(psi), np.ravel(z_tilde)
    b = _b_vector(grid, zt, params.c0)
    lap2 = lap @ lap

    k = np.zeros((3 * n + 1, 3 * n + 1))
    rhs = np.zeros(3 * n + 1)
    iz, ip, iw, ir = slice(0, n), slice(n, 2 * n), slice(2 * n, 3 * n), 3 * n
    # Psi' - Psi + beta dt (Psi' + Psi)/2 = M dt L W
    k[ip, ip] = (1.0 + 0.5 * beta * dt) * eye
    k[ip, iw] = -m * dt * lap
    rhs[ip] = (1.0 - 0.5 * beta * dt) * psi
    # dt (Psi' + Psi)/2 = Z' - Z
    k[iz, ip] = 0.5 * dt * eye
    k[iz, iz] = -eye
    rhs[iz] = -z - 0.5 * dt * psi
    # W = L^2 (Z'+Z)/2 + 2 L Zt + alpha (Z'+Z)/2 + (R'+R)/2 b
    k[iw, iw] = eye
    k[iw, iz] = -0.5 * (lap2 + alpha * eye)
    k[iw, ir] = -0.5 * b
    rhs[iw] = 0.5 * (lap2 + alpha * eye) @ z + 2.0 * lap @ zt + 0.5 * r * b
    # R' - R = 1/2 (b, Z' - Z)_m
    k[ir, ir] = 1.0
    k[ir, iz] = -0.5 * w_area * b
    rhs[ir] = r - 0.5 * w_area * b @ z

    sol = refined_solve(k, rhs)
    shape = grid.shape
    return sol[iz].reshape(shape), sol[ip].reshape(shape), sol[iw].reshape(shape), float(sol[ir])


def monolithic_first_order_step(grid, params, dt, z, psi, r):
    """Solve the coupled backward-Euler system for (Z', Psi', W', R')."""
    lap = laplacian_matrix(grid)
    n = lap.shape[0]
    eye = np.eye(n)
    w_area = grid.hx * grid.hy
    m, beta, alpha = params.m, params.beta, params.alpha
    z, psi = np.ravel(z), np.ravel(psi)
    b = _b_vector(grid, z, params.c0)
    lap2 = lap @ lap

    k = np.zeros((3 * n + 1, 3 * n + 1))
    rhs = np.zeros(3 * n + 1)
    iz, ip, iw, ir = slice(0, n), slice(n, 2 * n), slice(2 * n, 3 * n), 3 * n
    # Psi' - Psi + beta dt Psi' = M dt L W'
    k[ip, ip] = (1.0 + beta * dt) * eye
    k[ip, iw] = -m * dt * lap
    rhs[ip] = psi
    # dt Psi' = Z' - Z
    k[iz, ip] = dt * eye
    k[iz, iz] = -eye
    rhs[iz] = -z
    # W' = L^2 Z' + 2 L Z + alpha Z' + R' b
    k[iw, iw] = eye
    k[iw, iz] = -(lap2 + alpha * eye)
    k[iw, ir] = -b
    rhs[iw] = 2.0 * lap @ z
    # R' - R = 1/2 (b, Z' - Z)_m
    k[ir, ir] = 1.0
    k[ir, iz] = -0.5 * w_area * b
    rhs[ir] = r - 0.5 * w_area * b @ z

    sol = refined_solve(k, rhs)
    shape = grid.shape
    return sol[iz].reshape(shape), sol[ip].reshape(shape), sol[iw].reshape(shape), float(sol[ir])

