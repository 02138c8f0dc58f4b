"""Linear SAV time steppers for the MPFC system.

Both schemes reduce each step to

    A z - c (b, z)_m L b = f

with a constant-coefficient sixth-order operator ``A`` and the SAV vector
``b``. Two solves with ``A`` and one scalar division give ``z``:

    s = (b, A^-1 f)_m / (1 - c (A^-1 L b, b)_m)
    z = A^-1 f + c s A^-1 L b

For Crank-Nicolson ``c = M/4``, for backward Euler ``c = M/2``. The right-hand
side is assembled in the Laplacian eigenbasis, so every Laplacian image in it
has an exactly vanishing constant mode and mass is conserved to round-off.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import SolvabilityViolation
from .grid import inner_m, laplacian, mass
from .model import b_field, sav_energy
from .opsolver import ASymbol, SpectralPlan, inv_neg_laplacian


@dataclass(frozen=True)
class TimeSpec:
    dt: float
    t_final: float

    def __post_init__(self):
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not (np.isfinite(self.t_final) and self.t_final > 0):
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        n = round(self.t_final / self.dt)
        if n < 1 or abs(n * self.dt - self.t_final) > 1e-12 * self.t_final:
            raise ValueError(f"t_final={self.t_final} is not an integer multiple of dt={self.dt}")

    @property
    def n_steps(self):
        return int(round(self.t_final / self.dt))


@dataclass
class SavState:
    """Discrete state at time level n: Z^n, Psi^n, R^n and Z^{n-1}."""

    z: np.ndarray
    psi: np.ndarray
    r: float
    n: int = 0
    t: float = 0.0
    z_prev: np.ndarray | None = None


@dataclass
class StepperWorkspace:
    """Spectral plan plus cached inverse symbols, keyed by (scheme, params, dt)."""

    plan: SpectralPlan
    _inv_symbols: dict = field(default_factory=dict, repr=False)
    last_denominator: float = float("nan")

    @property
    def grid(self):
        return self.plan.grid

    def inverse_symbol(self, symbol):
        inv = self._inv_symbols.get(symbol)
        if inv is None:
            inv = 1.0 / symbol(self.plan.eigs)
            self._inv_symbols[symbol] = inv
        return inv


def make_workspace(grid):
    return StepperWorkspace(SpectralPlan(grid))


def init_state(phi0, params, grid):
    """Z^0 = phi0, Psi^0 = 0, R^0 = sqrt(E1h(phi0) + c0)."""
    z = np.array(grid.check_field(phi0, "phi0"), dtype=float)
    if not np.all(np.isfinite(z)):
        raise ValueError("phi0 contains non-finite values")
    # raises DegenerateEnergy below the floor
    b_field(grid, z, params.c0)
    return SavState(z=z, psi=np.zeros(grid.shape), r=float(np.sqrt(sav_energy(grid, z, params.c0))))


def _rank_one_solve(ws, symbol, f_hat, b, lb_hat, coef):
    plan = ws.plan
    inv = ws.inverse_symbol(symbol)
    u = plan.inverse(inv * f_hat)  # A^-1 f
    v = plan.inverse(inv * lb_hat)  # A^-1 L b
    denom = 1.0 - coef * inner_m(plan.grid, v, b)
    ws.last_denominator = denom
    if not denom > 0.0:
        raise SolvabilityViolation(f"rank-one denominator {denom!r} is not positive")
    s = inner_m(plan.grid, b, u) / denom
    return u + (coef * s) * v


def _cn_solve(state, ws, params, dt, z_tilde):
    plan = ws.plan
    grid = plan.grid
    lam = plan.eigs
    m = params.m
    symbol = ASymbol.crank_nicolson(params, dt)
    z = state.z
    b = b_field(grid, z_tilde, params.c0)

    z_hat = plan.forward(z)
    b_hat = plan.forward(b)
    lb_hat = lam * b_hat
    f_hat = (
        (2.0 / dt) * plan.forward(state.psi)
        + (symbol.c0 + 0.5 * m * lam**3 + 0.5 * m * params.alpha * lam) * z_hat
        + (2.0 * m) * lam**2 * plan.forward(z_tilde)
        + (m * (state.r - 0.25 * inner_m(grid, b, z))) * lb_hat
    )
    z_new = _rank_one_solve(ws, symbol, f_hat, b, lb_hat, 0.25 * m)
    psi_new = (2.0 / dt) * (z_new - z) - state.psi
    r_new = state.r + 0.5 * inner_m(grid, b, z_new - z)
    return SavState(z=z_new, psi=psi_new, r=r_new, n=state.n + 1, t=(state.n + 1) * dt, z_prev=z)


def extrapolate(state):
    """Z~^{n+1/2} = (3 Z^n - Z^{n-1}) / 2."""
    return 1.5 * state.z - 0.5 * state.z_prev


def step_cn(state, ws, params, dt):
    """One Crank-Nicolson SAV step; needs Z^{n-1} (use bootstrap_first_step at n = 0)."""
    if state.z_prev is None:
        raise ValueError("step_cn needs z_prev; start the run with bootstrap_first_step")
    return _cn_solve(state, ws, params, dt, extrapolate(state))


def step_first_order(state, ws, params, dt):
    """One backward-Euler SAV step."""
    plan = ws.plan
    grid = plan.grid
    lam = plan.eigs
    m = params.m
    symbol = ASymbol.first_order(params, dt)
    z = state.z
    b = b_field(grid, z, params.c0)

    z_hat = plan.forward(z)
    b_hat = plan.forward(b)
    lb_hat = lam * b_hat
    f_hat = (
        plan.forward(state.psi) / dt
        + (symbol.c0 + 2.0 * m * lam**2) * z_hat
        + (m * (state.r - 0.5 * inner_m(grid, b, z))) * lb_hat
    )
    z_new = _rank_one_solve(ws, symbol, f_hat, b, lb_hat, 0.5 * m)
    psi_new = (z_new - z) / dt
    r_new = state.r + 0.5 * inner_m(grid, b, z_new - z)
    return SavState(z=z_new, psi=psi_new, r=r_new, n=state.n + 1, t=(state.n + 1) * dt, z_prev=z)


def bootstrap_extrapolant(state0, ws, params, dt):
    """Z~^{1/2} = (Z^0 + Z^1_fo) / 2 with Z^1_fo from one first-order step."""
    provisional = step_first_order(state0, ws, params, dt)
    return 0.5 * (state0.z + provisional.z)


def bootstrap_predecessor(state0, ws, params, dt):
    """Virtual Z^{-1} for which (3 Z^0 - Z^{-1}) / 2 equals the bootstrap extrapolant.

    Using it as z_prev at n = 0 makes the first CN step an ordinary CN step, so
    the tilde pseudo energy at t = 0 is defined with it.
    """
    return 3.0 * state0.z - 2.0 * bootstrap_extrapolant(state0, ws, params, dt)


def bootstrap_first_step(state0, ws, params, dt):
    """First CN step, with the extrapolant taken from a provisional first-order step."""
    z_tilde = bootstrap_extrapolant(state0, ws, params, dt)
    return _cn_solve(state0, ws, params, dt, z_tilde)


def advance(state, ws, params, dt, scheme="cn"):
    if scheme == "cn":
        if state.z_prev is None:
            return bootstrap_first_step(state, ws, params, dt)
        return step_cn(state, ws, params, dt)
    if scheme == "first_order":
        return step_first_order(state, ws, params, dt)
    raise ValueError(f"unknown scheme {scheme!r}")


def iterate(state, ws, params, dt, n_steps, scheme="cn"):
    """Yield the initial state and then each of the next ``n_steps`` states."""
    yield state
    for _ in range(n_steps):
        state = advance(state, ws, params, dt, scheme)
        yield state


@dataclass(frozen=True)
class ResidualReport:
    """Relative max-norm residuals of the four discrete equations of one step.

    ``psi_eq``: velocity equation with W reconstructed from the chemical
    potential definition; ``velocity_eq``: dt Psi = Z^{n+1} - Z^n;
    ``mu_eq``: that W against the W implied by the velocity equation (mean
    removed); ``r_eq``: SAV update.
    """

    psi_eq: float
    velocity_eq: float
    mu_eq: float
    r_eq: float

    @property
    def max(self):
        return max(self.psi_eq, self.velocity_eq, self.mu_eq, self.r_eq)


def _relative(residual, *terms):
    res = float(np.max(np.abs(residual)))
    scale = max(float(np.max(np.abs(t))) for t in terms)
    return res / scale if scale > 0 else res


def residual_check(prev, nxt, ws, params, dt, scheme="cn", z_tilde=None):
    """Back-substitute a computed step into its defining equations."""
    grid = ws.grid
    m, beta, alpha = params.m, params.beta, params.alpha
    lap = lambda f: laplacian(grid, f)  # noqa: E731
    if scheme == "cn":
        if z_tilde is None:
            if prev.z_prev is None:
                raise ValueError("pass z_tilde for the bootstrap step")
            z_tilde = extrapolate(prev)
        z_w, psi_w, r_w = 0.5 * (nxt.z + prev.z), 0.5 * (nxt.psi + prev.psi), 0.5 * (nxt.r + prev.r)
        b = b_field(grid, z_tilde, params.c0)
        nonlinear_lin = z_tilde
    elif scheme == "first_order":
        z_w, psi_w, r_w = nxt.z, nxt.psi, nxt.r
        b = b_field(grid, prev.z, params.c0)
        nonlinear_lin = prev.z
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    w_terms = (lap(lap(z_w)), 2.0 * lap(nonlinear_lin), alpha * z_w, r_w * b)
    w = sum(w_terms)
    lw = lap(w)
    dpsi = nxt.psi - prev.psi
    psi_res = dpsi + beta * dt * psi_w - m * dt * lw
    psi_rel = _relative(psi_res, dpsi, beta * dt * psi_w, m * dt * lw)

    dz = nxt.z - prev.z
    vel_rel = _relative(dt * psi_w - dz, dt * psi_w, dz)

    g = (dpsi + beta * dt * psi_w) / (m * dt)
    g = g - mass(grid, g) / grid.area
    w_from_psi = -inv_neg_laplacian(ws.plan, g)
    w0 = w - mass(grid, w) / grid.area
    mu_rel = _relative(w0 - w_from_psi, *w_terms)

    dr = nxt.r - prev.r
    r_inc = 0.5 * inner_m(grid, b, dz)
    r_rel = _relative(np.array([dr - r_inc]), np.array([dr]), np.array([r_inc]))
    return ResidualReport(psi_rel, vel_rel, mu_rel, r_rel)
