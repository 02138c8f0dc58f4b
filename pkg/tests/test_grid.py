import numpy as np
import pytest

from mpfc_sav import _kernels
from mpfc_sav._accel import HAVE_NUMBA
from mpfc_sav.errors import ContractViolation
from mpfc_sav.grid import (
    BoundaryKind,
    GridSpec,
    div_x,
    div_y,
    dx_edge,
    dy_edge,
    grad_norm,
    inner_m,
    inner_x,
    inner_y,
    laplacian,
    norm_m,
)

N = BoundaryKind.NEUMANN
P = BoundaryKind.PERIODIC


def test_gridspec_derives_spacing():
    g = GridSpec(20, 40, 1.0, 2.0)
    assert g.hx * g.nx == g.lx
    assert g.hy * g.ny == g.ly
    assert g.shape == (20, 40)
    np.testing.assert_allclose(g.x_centers()[[0, -1]], [0.025, 0.975])


@pytest.mark.parametrize("nx,ny,lx", [(1, 4, 1.0), (4, 1, 1.0), (4, 4, 0.0), (4, 4, -1.0)])
def test_gridspec_rejects_invalid(nx, ny, lx):
    with pytest.raises(ValueError):
        GridSpec(nx, ny, lx, 1.0)


def test_dx_edge_of_constant_is_zero(bc):
    g = GridSpec(5, 4, 1.0, 1.0, bc)
    f = g.constant(3.7)
    assert np.all(dx_edge(g, f) == 0)
    assert np.all(dy_edge(g, f) == 0)


def test_dx_edge_two_cells():
    g = GridSpec(2, 2, 1.0, 1.0, N)
    f = np.array([[1.0, 1.0], [3.0, 3.0]])
    d = dx_edge(g, f)
    assert d.shape == (1, 2)
    np.testing.assert_array_equal(d, [[4.0, 4.0]])


def test_dx_edge_cosine_mode_by_hand():
    g = GridSpec(4, 2, 1.0, 1.0, N)
    x = g.x_centers()
    row = np.cos(np.pi * x)
    f = np.repeat(row[:, None], 2, axis=1)
    expected = [(row[i + 1] - row[i]) / 0.25 for i in range(3)]
    np.testing.assert_allclose(dx_edge(g, f)[:, 0], expected, rtol=1e-15)


def test_dx_edge_periodic_wraps():
    g = GridSpec(3, 2, 3.0, 1.0, P)
    f = np.array([[1.0, 0.0], [2.0, 0.0], [4.0, 0.0]])
    np.testing.assert_array_equal(dx_edge(g, f)[:, 0], [1.0, 2.0, -3.0])


def test_div_of_zero_and_of_constant_gradient(bc):
    g = GridSpec(6, 5, 1.0, 1.0, bc)
    assert np.all(div_x(g, np.zeros(g.x_edge_shape())) == 0)
    assert np.all(div_y(g, np.zeros(g.y_edge_shape())) == 0)
    c = g.constant(-2.0)
    assert np.all(div_x(g, dx_edge(g, c)) == 0)


def test_summation_by_parts_4x4(rng, bc):
    g = GridSpec(4, 4, 1.0, 1.0, bc)
    for _ in range(100):
        q = rng.standard_normal(g.shape)
        w1 = rng.standard_normal(g.x_edge_shape())
        w2 = rng.standard_normal(g.y_edge_shape())
        a, b = inner_m(g, q, div_x(g, w1)), -inner_x(g, dx_edge(g, q), w1)
        assert abs(a - b) <= 1e-13 * max(abs(a), abs(b), 1.0)
        a, b = inner_m(g, q, div_y(g, w2)), -inner_y(g, dy_edge(g, q), w2)
        assert abs(a - b) <= 1e-13 * max(abs(a), abs(b), 1.0)


def test_laplacian_is_div_grad(rng, bc):
    g = GridSpec(7, 6, 1.3, 0.8, bc)
    f = rng.standard_normal(g.shape)
    composed = div_x(g, dx_edge(g, f)) + div_y(g, dy_edge(g, f))
    np.testing.assert_allclose(laplacian(g, f), composed, rtol=1e-12, atol=1e-12 * np.abs(composed).max())


def test_laplacian_of_constant(bc):
    g = GridSpec(5, 7, 2.0, 1.0, bc)
    assert np.all(laplacian(g, g.constant(0.3)) == 0)


def test_neumann_cosine_eigenvector():
    g = GridSpec(4, 3, 1.0, 1.0, N)
    x, _ = g.mesh()
    f = np.cos(np.pi * x / g.lx)
    lam = -(4 / g.hx**2) * np.sin(np.pi / (2 * g.nx)) ** 2
    np.testing.assert_allclose(laplacian(g, f), lam * f, atol=1e-12)


def test_periodic_cosine_eigenvector():
    g = GridSpec(4, 3, 1.0, 1.0, P)
    x, _ = g.mesh()
    f = np.cos(2 * np.pi * x / g.lx)
    lam = -(4 / g.hx**2) * np.sin(np.pi / g.nx) ** 2
    np.testing.assert_allclose(laplacian(g, f), lam * f, atol=1e-12)


def test_laplacian_self_adjoint_and_negative(rng, bc):
    g = GridSpec(9, 6, 1.0, 2.0, bc)
    for _ in range(100):
        f = rng.standard_normal(g.shape)
        h = rng.standard_normal(g.shape)
        a, b = inner_m(g, f, laplacian(g, h)), inner_m(g, laplacian(g, f), h)
        scale = norm_m(g, f) * norm_m(g, laplacian(g, h))
        assert abs(a - b) <= 1e-13 * scale
        assert inner_m(g, f, laplacian(g, f)) < 0
        assert abs(inner_m(g, laplacian(g, f), g.constant(1.0))) <= 1e-13 * norm_m(g, laplacian(g, f))


def test_inner_m_examples():
    g = GridSpec(2, 2)
    assert inner_m(g, g.constant(1.0), g.constant(1.0)) == pytest.approx(1.0, abs=1e-15)
    assert inner_m(g, g.constant(1.0), g.zeros()) == 0.0
    f = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert inner_m(g, f, f) == pytest.approx(7.5, abs=1e-15)


def test_inner_shape_mismatch():
    g = GridSpec(3, 3)
    with pytest.raises(ContractViolation):
        inner_m(g, np.zeros((3, 3)), np.zeros((3, 4)))
    with pytest.raises(ContractViolation):
        inner_x(g, np.zeros((3, 3)), np.zeros((3, 3)))  # Neumann stores nx - 1 x-edges


def test_norms_of_constants():
    g = GridSpec(6, 6)
    assert norm_m(g, g.zeros()) == 0 and grad_norm(g, g.zeros()) == 0
    assert norm_m(g, g.constant(-3.0)) == pytest.approx(3.0, rel=1e-15)
    assert grad_norm(g, g.constant(-3.0)) == 0


def test_grad_norm_of_cosine_mode():
    g = GridSpec(8, 2, 1.0, 1.0, N)
    x, _ = g.mesh()
    f = np.cos(np.pi * x)
    lam = -(4 / g.hx**2) * np.sin(np.pi / 16) ** 2
    assert grad_norm(g, f) ** 2 == pytest.approx(-lam * norm_m(g, f) ** 2, rel=1e-13)
    assert grad_norm(g, f) ** 2 == pytest.approx(-inner_m(g, f, laplacian(g, f)), rel=1e-13)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("bc_name", ["neumann", "periodic"])
@pytest.mark.parametrize("shape", [(2, 2), (5, 3), (64, 48)])
def test_numba_and_numpy_kernels_agree(rng, bc_name, shape):
    f = rng.standard_normal(shape)
    a = _kernels.NUMPY_KERNELS[bc_name](f, 3.0, 7.0)
    b = _kernels.NUMBA_KERNELS[bc_name](f, 3.0, 7.0)
    np.testing.assert_allclose(a, b, rtol=1e-14, atol=1e-14 * np.abs(a).max())


def test_numpy_fallback_selected_by_env_flag():
    import os
    import subprocess
    import sys

    code = "from mpfc_sav import _kernels; print(_kernels.laplacian_neumann is _kernels._laplacian_neumann_numpy)"
    out = subprocess.run(
        [sys.executable, "-c", code], env=dict(os.environ, MPFC_SAV_NUMBA="0"), capture_output=True, text=True
    )
    assert out.stdout.strip() == "True"
