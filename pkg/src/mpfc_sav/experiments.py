"""Reproduction runs: Cauchy-error convergence study and energy evolution.

Also holds the two initial conditions, the fine-to-coarse restriction used to
compare resolutions, and a randomized check of the backward-diffusion bound
||L u||^2 <= 1/(3 eps^2) ||u||^2 + (2 eps / 3) ||grad L u||^2.
"""
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import islice

import numpy as np

from .errors import ContractViolation
from .grid import BoundaryKind, GridSpec, grad_norm, laplacian, mass, norm_m
from .model import ModelParams, original_energy, pseudo_energy_tilde
from .opsolver import SpectralPlan, hminus1_norm
from .stepper import (
    TimeSpec,
    bootstrap_predecessor,
    init_state,
    iterate,
    make_workspace,
)


def phi0_neumann(grid):
    """cos(2 pi x) cos(2 pi y) at cell centers."""
    x, y = grid.mesh()
    return np.cos(2 * np.pi * x) * np.cos(2 * np.pi * y)


def phi0_periodic(grid):
    """Perturbed-constant crystal seed on the 128-periodic box."""
    x, y = grid.mesh()
    return (
        0.07
        - 0.02 * np.cos(2 * np.pi * (x - 12) / 32) * np.sin(2 * np.pi * (y - 1) / 32)
        + 0.02 * np.cos(np.pi * (x + 10) / 32) ** 2 * np.cos(np.pi * (y + 3) / 32) ** 2
        - 0.01 * np.sin(4 * np.pi * x / 32) ** 2 * np.sin(4 * np.pi * (y - 6) / 32) ** 2
    )


INITIAL_CONDITIONS = {
    "cosine": phi0_neumann,
    "crystal": phi0_periodic,
}


def initial_field(grid, kind="cosine", value=0.0, seed=0, amplitude=0.1):
    if kind in INITIAL_CONDITIONS:
        return INITIAL_CONDITIONS[kind](grid)
    if kind == "constant":
        return grid.constant(value)
    if kind == "random":
        rng = np.random.default_rng(seed)
        return value + rng.uniform(-amplitude, amplitude, size=grid.shape)
    raise ValueError(f"unknown initial condition {kind!r}")


def restrict_fine_to_coarse(fine_grid, fine, coarse_grid):
    """Average each 2x2 block of fine cells onto the covering coarse cell."""
    if (
        fine_grid.nx != 2 * coarse_grid.nx
        or fine_grid.ny != 2 * coarse_grid.ny
        or fine_grid.lx != coarse_grid.lx
        or fine_grid.ly != coarse_grid.ly
        or fine_grid.bc != coarse_grid.bc
    ):
        raise ContractViolation(f"{fine_grid} is not a 2x refinement of {coarse_grid}")
    fine = fine_grid.check_field(fine)
    return fine.reshape(coarse_grid.nx, 2, coarse_grid.ny, 2).mean(axis=(1, 3))


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    err_phi: float
    err_gradlap: float
    err_r: float
    rate_phi: float | None = None
    rate_gradlap: float | None = None
    rate_r: float | None = None


def cauchy_errors(coarse_grid, coarse_states, fine_grid, fine_states):
    """Max over coarse time levels of the coarse-vs-restricted-fine differences.

    ``fine_states`` must advance at half the coarse step; every second fine
    state is paired with the next coarse state.
    """
    err_phi = err_gradlap = err_r = 0.0
    for coarse, fine in zip(coarse_states, islice(fine_states, 0, None, 2)):
        e = coarse.z - restrict_fine_to_coarse(fine_grid, fine.z, coarse_grid)
        err_phi = max(err_phi, float(norm_m(coarse_grid, e)))
        err_gradlap = max(err_gradlap, float(grad_norm(coarse_grid, laplacian(coarse_grid, e))))
        err_r = max(err_r, abs(coarse.r - fine.r))
    return err_phi, err_gradlap, err_r


def _trajectory(grid, params, t_final, n_steps, init, scheme):
    phi0 = initial_field(grid, **init)
    ws = make_workspace(grid)
    return iterate(init_state(phi0, params, grid), ws, params, t_final / n_steps, n_steps, scheme)


def _pair_errors(args):
    coarse_grid, params, t_final, init, scheme = args
    n = coarse_grid.nx
    fine_grid = coarse_grid.refined(2)
    coarse = _trajectory(coarse_grid, params, t_final, n, init, scheme)
    fine = _trajectory(fine_grid, params, t_final, 2 * n, init, scheme)
    return cauchy_errors(coarse_grid, coarse, fine_grid, fine)


def _rate(prev, cur):
    if prev is None or prev <= 0 or cur <= 0:
        return None
    return math.log2(prev / cur)


def convergence_rows(resolutions, errors):
    rows = []
    prev = None
    for n, (ep, eg, er) in zip(resolutions, errors):
        if prev is None:
            rows.append(ConvergenceRow(n, ep, eg, er))
        else:
            rows.append(
                ConvergenceRow(
                    n, ep, eg, er, _rate(prev[0], ep), _rate(prev[1], eg), _rate(prev[2], er)
                )
            )
        prev = (ep, eg, er)
    return rows


def run_convergence_study(config, resolutions=(20, 40, 80, 160), scheme=None, max_workers=None):
    """Cauchy-error table: each N is compared with 2N, dt = T / N on each grid."""
    scheme = scheme or config.scheme
    jobs = [
        (config.grid.with_cells(n), config.params, config.time.t_final, config.init_kwargs(), scheme)
        for n in resolutions
    ]
    if max_workers and max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            errors = list(pool.map(_pair_errors, jobs))
    else:
        errors = [_pair_errors(job) for job in jobs]
    return convergence_rows(list(resolutions), errors)


@dataclass
class EnergySeries:
    """Energy diagnostics per recorded time level.

    ``dissipation[k]`` is (beta/M) dt ||Psi^{k+1/2}||_{-1}^2 for every step k,
    regardless of the recording stride.
    """

    t: list = field(default_factory=list)
    energy_original: list = field(default_factory=list)
    energy_pseudo_tilde: list = field(default_factory=list)
    mass: list = field(default_factory=list)
    r: list = field(default_factory=list)
    psi_hminus1: list = field(default_factory=list)
    dissipation: list = field(default_factory=list)

    def __len__(self):
        return len(self.t)

    def append(self, t, energy_original, energy_pseudo_tilde, mass, r, psi_hminus1):
        self.t.append(t)
        self.energy_original.append(energy_original)
        self.energy_pseudo_tilde.append(energy_pseudo_tilde)
        self.mass.append(mass)
        self.r.append(r)
        self.psi_hminus1.append(psi_hminus1)

    def rows(self):
        return zip(
            self.t, self.energy_original, self.energy_pseudo_tilde, self.mass, self.r, self.psi_hminus1
        )


def run_simulation(config, on_state=None, record_stride=1, scheme=None):
    """Advance ``config`` to its final time, recording an EnergySeries.

    ``on_state(state)`` is called for every state, including the initial one.
    """
    scheme = scheme or config.scheme
    grid, params, dt = config.grid, config.params, config.time.dt
    ws = make_workspace(grid)
    plan = ws.plan
    state0 = init_state(initial_field(grid, **config.init_kwargs()), params, grid)
    if scheme == "cn":
        z_prev0 = bootstrap_predecessor(state0, ws, params, dt)
    else:
        z_prev0 = state0.z

    series = EnergySeries()
    prev = None
    for state in iterate(state0, ws, params, dt, config.time.n_steps, scheme):
        z_prev = z_prev0 if state.z_prev is None else state.z_prev
        if prev is not None:
            psi_mid = 0.5 * (state.psi + prev.psi) if scheme == "cn" else state.psi
            series.dissipation.append(
                params.beta / params.m * dt * hminus1_norm(plan, psi_mid) ** 2
            )
        if state.n % record_stride == 0 or state.n == config.time.n_steps:
            series.append(
                state.t,
                original_energy(grid, state.z, params),
                pseudo_energy_tilde(plan, state.z, z_prev, state.r, state.psi, params),
                mass(grid, state.z),
                state.r,
                hminus1_norm(plan, state.psi),
            )
        if on_state is not None:
            on_state(state)
        prev = state
    return series


def run_energy_experiment(config, record_stride=1):
    if config.grid.bc is not BoundaryKind.PERIODIC:
        raise ValueError("the energy experiment uses periodic boundary conditions")
    return run_simulation(config, record_stride=record_stride, scheme="cn")


@dataclass(frozen=True)
class BackwardDiffusionReport:
    trials: int
    violations: int
    max_excess: float  # max over trials of (lhs - rhs) / rhs


def random_smooth_field(plan, rng, decay=None):
    """Random combination of Laplacian eigenmodes (satisfies the boundary conditions)."""
    coef_shape = plan.eigs.shape
    coef = rng.standard_normal(coef_shape)
    if plan.grid.periodic:
        coef = coef + 1j * rng.standard_normal(coef_shape)
    if decay is not None:
        coef = coef / (1.0 - plan.eigs) ** decay
    return plan.inverse(coef)


def lemma41_check(grid, trials=1000, epsilon=0.25, seed=0):
    """Randomized check of the backward-diffusion control inequality."""
    plan = SpectralPlan(grid)
    rng = np.random.default_rng(seed)
    violations = 0
    worst = -np.inf
    c_l2 = 1.0 / (3.0 * epsilon**2)
    c_h3 = 2.0 * epsilon / 3.0
    for k in range(trials):
        decay = None if k % 2 == 0 else rng.uniform(0.0, 3.0)
        u = random_smooth_field(plan, rng, decay) * rng.uniform(0.1, 10.0)
        if k % 10 == 9:
            u = u + rng.normal()  # constant offset
        lu = laplacian(grid, u)
        lhs = norm_m(grid, lu) ** 2
        rhs = c_l2 * norm_m(grid, u) ** 2 + c_h3 * grad_norm(grid, lu) ** 2
        excess = (lhs - rhs) / rhs if rhs > 0 else lhs
        worst = max(worst, excess)
        if excess > 1e-10:
            violations += 1
    return BackwardDiffusionReport(trials, violations, float(worst))


def convergence_config():
    """Defaults of the accuracy study (unit square, Neumann)."""
    from .config import SimulationConfig

    return SimulationConfig()


def energy_config(n=128):
    from .config import SimulationConfig, InitConfig

    return SimulationConfig(
        grid=GridSpec(n, n, 128.0, 128.0, BoundaryKind.PERIODIC),
        params=ModelParams(epsilon=0.025, beta=0.1, m=1.0),
        time=TimeSpec(dt=0.05, t_final=10.0),
        init=InitConfig(kind="crystal"),
    )
