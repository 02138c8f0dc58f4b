import numpy as np
import pytest

from mpfc_sav.config import SimulationConfig
from mpfc_sav.errors import ContractViolation
from mpfc_sav.experiments import (
    cauchy_errors,
    convergence_rows,
    energy_config,
    initial_field,
    lemma41_check,
    phi0_neumann,
    phi0_periodic,
    restrict_fine_to_coarse,
    run_convergence_study,
    run_energy_experiment,
    run_simulation,
)
from mpfc_sav.grid import BoundaryKind, GridSpec, mass
from mpfc_sav.model import ModelParams
from mpfc_sav.stepper import TimeSpec, init_state, iterate, make_workspace

# frozen from tests/oracles/quadrature.py
CRYSTAL128_MEAN = 0.07250000000000001
CRYSTAL128_AT_12_1 = 0.06673359258780906


def test_restriction_examples():
    fine = GridSpec(4, 4)
    coarse = GridSpec(2, 2)
    out = restrict_fine_to_coarse(fine, fine.constant(3.5), coarse)
    assert out.shape == (2, 2) and np.all(out == 3.5)
    block = np.zeros((4, 4))
    block[:2, :2] = [[1, 2], [3, 4]]
    assert restrict_fine_to_coarse(fine, block, coarse)[0, 0] == 2.5


def test_restriction_preserves_mass(rng):
    fine = GridSpec(12, 8, 2.0, 1.0, BoundaryKind.PERIODIC)
    coarse = GridSpec(6, 4, 2.0, 1.0, BoundaryKind.PERIODIC)
    u = rng.standard_normal(fine.shape)
    assert mass(coarse, restrict_fine_to_coarse(fine, u, coarse)) == pytest.approx(mass(fine, u), rel=1e-13)


def test_restriction_rejects_mismatched_grids():
    with pytest.raises(ContractViolation):
        restrict_fine_to_coarse(GridSpec(6, 6), np.zeros((6, 6)), GridSpec(4, 4))
    with pytest.raises(ContractViolation):
        restrict_fine_to_coarse(GridSpec(4, 4, 2.0, 1.0), np.zeros((4, 4)), GridSpec(2, 2))


def test_phi0_neumann_values():
    g = GridSpec(4, 4)
    z = phi0_neumann(g)
    x, y = g.mesh()
    assert x[0, 0] == 0.125
    np.testing.assert_allclose(z, np.cos(2 * np.pi * x) * np.cos(2 * np.pi * y), rtol=0, atol=1e-16)
    g2 = GridSpec(2, 2)  # centers at 0.25 / 0.75
    np.testing.assert_allclose(phi0_neumann(g2), 0.0, atol=1e-16)


def test_phi0_periodic_frozen():
    g = GridSpec(128, 128, 128.0, 128.0, BoundaryKind.PERIODIC)
    z = phi0_periodic(g)
    assert z.mean() == pytest.approx(CRYSTAL128_MEAN, rel=1e-12)
    # first cell center of this grid sits at (12, 1)
    probe = GridSpec(2, 2, 48.0, 4.0, BoundaryKind.PERIODIC)
    assert phi0_periodic(probe)[0, 0] == pytest.approx(CRYSTAL128_AT_12_1, rel=1e-12)


def test_initial_field_kinds():
    g = GridSpec(8, 8)
    assert np.all(initial_field(g, "constant", value=0.3) == 0.3)
    a = initial_field(g, "random", value=0.1, seed=3, amplitude=0.05)
    b = initial_field(g, "random", value=0.1, seed=3, amplitude=0.05)
    assert np.array_equal(a, b)
    assert np.max(np.abs(a - 0.1)) <= 0.05
    with pytest.raises(ValueError):
        initial_field(g, "nope")


@pytest.mark.parametrize("bc", list(BoundaryKind))
def test_backward_diffusion_bound(bc):
    g = GridSpec(32, 32, 1.0, 1.0, bc)
    report = lemma41_check(g, trials=1000, epsilon=0.25, seed=1)
    assert report.trials == 1000
    assert report.violations == 0
    assert report.max_excess <= 0


def test_cauchy_errors_of_identical_runs_vanish():
    g = GridSpec(8, 8)
    p = ModelParams(0.25, 0.9, 0.001)
    ws = make_workspace(g)
    states = list(iterate(init_state(phi0_neumann(g), p, g), ws, p, 0.01, 4))
    fg = g.refined(2)
    fws = make_workspace(fg)
    fine = list(iterate(init_state(phi0_neumann(fg), p, fg), fws, p, 0.005, 8))
    ep, eg, er = cauchy_errors(g, states, fg, fine)
    assert ep > 0 and eg > 0 and er >= 0
    # pairing a trajectory with itself at the same resolution through restriction of a refined copy
    doubled = [type(s)(np.kron(s.z, np.ones((2, 2))), s.psi, s.r) for s in states for _ in (0, 1)]
    assert cauchy_errors(g, states, fg, doubled) == (0.0, 0.0, 0.0)


def test_convergence_rows_rates():
    rows = convergence_rows((10, 20, 40), [(4.0, 8.0, 1.0), (1.0, 2.0, 0.5), (0.25, 0.5, 0.0)])
    assert rows[0].rate_phi is None and rows[0].rate_gradlap is None and rows[0].rate_r is None
    assert rows[1].rate_phi == 2.0 and rows[1].rate_gradlap == 2.0 and rows[1].rate_r == 1.0
    assert rows[2].rate_phi == 2.0 and rows[2].rate_r is None


def test_small_convergence_study_runs():
    cfg = SimulationConfig()
    rows = run_convergence_study(cfg, resolutions=(8, 16))
    assert [r.n for r in rows] == [8, 16]
    assert rows[1].err_phi < rows[0].err_phi
    assert all(np.isfinite([r.err_phi, r.err_gradlap, r.err_r]).all() for r in rows)
    parallel = run_convergence_study(cfg, resolutions=(8, 16), max_workers=2)
    assert [(r.err_phi, r.err_r) for r in parallel] == [(r.err_phi, r.err_r) for r in rows]


def test_small_energy_run():
    cfg = energy_config()
    cfg = SimulationConfig(
        grid=GridSpec(32, 32, 32.0, 32.0, BoundaryKind.PERIODIC),
        params=cfg.params,
        time=TimeSpec(0.05, 1.0),
        init=cfg.init,
    )
    series = run_energy_experiment(cfg)
    assert len(series) == 21 and len(series.dissipation) == 20
    pseudo = np.asarray(series.energy_pseudo_tilde)
    diss = np.asarray(series.dissipation)
    assert np.all(np.diff(pseudo) <= -diss + 1e-10 * np.abs(pseudo[:-1]))
    assert diss.sum() <= pseudo[0] - pseudo[-1] + 1e-8 * abs(pseudo[0])
    m = np.asarray(series.mass)
    assert np.max(np.abs(m - m[0])) <= 1e-12 * abs(m[0])
    with pytest.raises(ValueError):
        run_energy_experiment(SimulationConfig())


def test_record_stride_keeps_final_state():
    cfg = SimulationConfig(grid=GridSpec(8, 8), time=TimeSpec(0.01, 0.07))
    series = run_simulation(cfg, record_stride=3)
    assert [round(t, 12) for t in series.t] == [0.0, 0.03, 0.06, 0.07]
    seen = []
    run_simulation(cfg, on_state=lambda s: seen.append(s.n))
    assert seen == list(range(8))
