"""Time integration of the incompressible viscous resistive Hall-MHD system.

The pressure is eliminated by Leray projection of the velocity nonlinearity.
Time stepping is integrating-factor RK4: diffusion is propagated exactly by
exp(-nu |k|^2 dt) / exp(-mu |k|^2 dt) and the (dealiased) quadratic terms are
treated explicitly.  Modes:

  full      - the complete system,
  mhd       - Hall coefficient forced to zero,
  hall_only - magnetic equation alone with u = 0 and its transport dropped.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .littlewood_paley import SobolevParams, dyadic_sobolev_norm, resolved_band
from .random_fields import random_band_field
from .spectral import (
    Grid,
    SpectralField,
    advect,
    divergence,
    half_to_full,
    irfftn_batch,
    leray_project,
    rfftn_batch,
    lp_norm,
    to_spectral,
)

MODES = ("full", "mhd", "hall_only")


class StateDriftError(ValueError):
    """Raised when an allegedly divergence-free state has drifted."""


class BlowUpError(RuntimeError):
    """Raised when coefficients leave the representable range mid-run."""


@dataclass(frozen=True)
class PhysicalParams:
    """Viscosity nu, resistivity mu, Hall coefficient eta; all nonnegative."""

    nu: float
    mu: float
    eta: float = 0.0

    def __post_init__(self):
        if self.nu < 0 or self.mu < 0 or self.eta < 0:
            raise ValueError("nu, mu, eta must be nonnegative")


@dataclass
class State:
    """Velocity/magnetic pair at time t, both stored spectrally."""

    u: SpectralField
    b: SpectralField
    t: float = 0.0

    @property
    def grid(self) -> Grid:
        return self.u.grid

    def copy(self) -> "State":
        return State(self.u.copy(), self.b.copy(), self.t)


@dataclass
class SolverConfig:
    params: PhysicalParams
    sobolev: SobolevParams
    dt: float
    tmax: float
    scheme: str = "ifrk4"
    mode: str = "full"
    snapshot_every: int = 10
    blowup_factor: float = 1.0e6

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.scheme != "ifrk4":
            raise ValueError(f"unknown scheme {self.scheme!r}")


def divergence_drift(f: SpectralField) -> float:
    """L2 norm of div f, relative to the field scale (absolute for small fields)."""
    return lp_norm(divergence(f), 2) / max(1.0, lp_norm(f, 2))


def _check_divergence(state: State, tol: float = 1.0e-8) -> None:
    for name, f in (("u", state.u), ("b", state.b)):
        drift = divergence_drift(f)
        if drift > tol:
            raise StateDriftError(
                f"state drift: div {name} = {drift:.3e} exceeds {tol:.1e} at t={state.t}"
            )


# index of the (j, i) entry in a packed symmetric 3x3 product block
_SYM = ((0, 1, 2), (1, 3, 4), (2, 4, 5))


def _half_curl(f: np.ndarray, k: np.ndarray) -> np.ndarray:
    out = np.empty_like(f)
    out[0] = 1j * (k[1] * f[2] - k[2] * f[1])
    out[1] = 1j * (k[2] * f[0] - k[0] * f[2])
    out[2] = 1j * (k[0] * f[1] - k[1] * f[0])
    return out


def _half_div_form(prod, k, sym=False):
    """Assemble d_j(f_j g_i) from packed products; prod[j*3+i] = f_j g_i."""
    out = np.empty((3,) + prod.shape[1:], dtype=prod.dtype)
    for i in range(3):
        if sym:
            acc = k[0] * prod[_SYM[0][i]] + k[1] * prod[_SYM[1][i]] + k[2] * prod[_SYM[2][i]]
        else:
            acc = k[0] * prod[i] + k[1] * prod[3 + i] + k[2] * prod[6 + i]
        out[i] = 1j * acc
    return out


def _nonlinear(u: np.ndarray, b: np.ndarray, grid: Grid, params: PhysicalParams, mode: str):
    """Nonlinear right-hand sides (no diffusion), fused into two batched FFTs.

    Works on the real-FFT half spectrum: advection is written in divergence
    form d_j(f_j g_i), exactly equivalent to f . grad g for divergence-free f.
    The velocity part is Leray-projected; every quadratic term is dealiased.
    """
    g = grid
    n, npts, half = g.n, g.npoints, g.dims // 2 + 1
    k = g.k_half
    uh = u[..., :half] * npts
    bh = b[..., :half] * npts
    with_hall = mode != "mhd" and params.eta != 0.0

    if mode == "hall_only":
        stack = np.concatenate([bh, _half_curl(bh, k)])
        phys = irfftn_batch(stack, n, g.shape)
        pb, pcb = phys[:3], phys[3:]
        hall = np.cross(pcb, pb, axisa=0, axisb=0, axisc=0)
        hall_h = rfftn_batch(hall, n) * (g.dealias_mask_half / npts)
        nb = -params.eta * _half_curl(hall_h, k)
        return np.zeros_like(u), half_to_full(nb, g)

    # skip velocity products when u is identically zero (e.g. pure induction runs)
    u_zero = not u.any()
    inv = [bh]
    if with_hall:
        inv.append(_half_curl(bh, k))
    if not u_zero:
        inv.insert(0, uh)
    phys = irfftn_batch(np.concatenate(inv), n, g.shape)
    if u_zero:
        pu = None
        pb = phys[:3]
        pcb = phys[3:6] if with_hall else None
    else:
        pu, pb = phys[:3], phys[3:6]
        pcb = phys[6:9] if with_hall else None

    prods = []
    if not u_zero:
        prods += [pu[j] * pu[i] for j in range(3) for i in range(j, 3)]
    prods += [pb[j] * pb[i] for j in range(3) for i in range(j, 3)]
    if not u_zero:
        prods += [pu[j] * pb[i] for j in range(3) for i in range(3)]
    if with_hall:
        prods.append(pcb[1] * pb[2] - pcb[2] * pb[1])
        prods.append(pcb[2] * pb[0] - pcb[0] * pb[2])
        prods.append(pcb[0] * pb[1] - pcb[1] * pb[0])

    hats = rfftn_batch(np.stack(prods), n) * (g.dealias_mask_half / npts)
    pos = 0
    if u_zero:
        ugu = ugb = bgu = 0.0
    else:
        ugu = _half_div_form(hats[pos : pos + 6], k, sym=True)
        pos += 6
    bgb = _half_div_form(hats[pos : pos + 6], k, sym=True)
    pos += 6
    if not u_zero:
        ub = hats[pos : pos + 9]
        pos += 9
        ugb = _half_div_form(ub, k)  # d_j(u_j b_i)
        # b . grad u = d_j(b_j u_i); u_i b_j sits at packed slot i*3+j
        swapped = np.swapaxes(ub.reshape((3, 3) + ub.shape[1:]), 0, 1)
        bgu = _half_div_form(np.ascontiguousarray(swapped).reshape(ub.shape), k)

    # Leray projection of the velocity nonlinearity.
    w = bgb - ugu
    kdotw = k[0] * w[0] + k[1] * w[1] + k[2] * w[2]
    nu = w - k * (kdotw * g.inv_ksq_half)

    nb = bgu - ugb if not u_zero else np.zeros_like(w)
    if with_hall:
        nb = nb - params.eta * _half_curl(hats[pos : pos + 3], k)
    out = half_to_full(np.concatenate([nu, nb]), g)
    return out[:3], out[3:]


def compute_rhs(state: State, params: PhysicalParams, mode: str = "full"):
    """Full right-hand sides (du/dt, db/dt) including diffusion.

    Raises StateDriftError if the input is not divergence-free to 1e-8.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    _check_divergence(state)
    g = state.grid
    nu_rhs, nb_rhs = _nonlinear(state.u.coeffs, state.b.coeffs, g, params, mode)
    dudt = nu_rhs - params.nu * g.ksq * state.u.coeffs
    dbdt = nb_rhs - params.mu * g.ksq * state.b.coeffs
    if mode == "hall_only":
        dudt = np.zeros_like(dudt)
    return SpectralField(g, dudt), SpectralField(g, dbdt)


def step(state: State, config: SolverConfig) -> State:
    """One integrating-factor RK4 step; diffusion propagated exactly."""
    g = state.grid
    p = config.params
    dt = config.dt

    def factors():
        eu_h = np.exp(-p.nu * g.ksq * (dt / 2.0))
        eb_h = np.exp(-p.mu * g.ksq * (dt / 2.0))
        return eu_h, eb_h, eu_h**2, eb_h**2

    eu_h, eb_h, eu, eb = g._cached(("ifrk4", dt, p.nu, p.mu), factors)

    u0, b0 = state.u.coeffs, state.b.coeffs
    nl = lambda u, b: _nonlinear(u, b, g, p, config.mode)

    k1u, k1b = nl(u0, b0)
    k2u, k2b = nl(eu_h * (u0 + 0.5 * dt * k1u), eb_h * (b0 + 0.5 * dt * k1b))
    k3u, k3b = nl(eu_h * u0 + 0.5 * dt * k2u, eb_h * b0 + 0.5 * dt * k2b)
    k4u, k4b = nl(eu * u0 + dt * eu_h * k3u, eb * b0 + dt * eb_h * k3b)

    u1 = eu * u0 + (dt / 6.0) * (eu * k1u + 2.0 * eu_h * (k2u + k3u) + k4u)
    b1 = eb * b0 + (dt / 6.0) * (eb * k1b + 2.0 * eb_h * (k2b + k3b) + k4b)
    t1 = state.t + dt
    if not (np.all(np.isfinite(u1)) and np.all(np.isfinite(b1))):
        raise BlowUpError(f"numerical blow-up at t={t1}")
    return State(SpectralField(g, u1), SpectralField(g, b1), t1)


def cfl_advisory_dt(state: State, params: PhysicalParams, c: float = 0.5) -> float:
    """Advisory bound: min(dx / ||u||_inf, c / (eta ||b||_inf kmax^2))."""
    g = state.grid
    dx = 2.0 * np.pi / g.dims
    bound = np.inf
    umax = lp_norm(state.u, np.inf)
    if umax > 0:
        bound = dx / umax
    if params.eta > 0:
        bmax = lp_norm(state.b, np.inf)
        if bmax > 0:
            bound = min(bound, c / (params.eta * bmax * g.kmax**2))
    return bound


@dataclass
class RunLog:
    """Per-run bookkeeping: sampled psi values and safety-projection magnitudes."""

    times: list = field(default_factory=list)
    psi: list = field(default_factory=list)
    projection_drift: list = field(default_factory=list)
    halted: bool = False
    halt_reason: str = ""


def run(initial: State, config: SolverConfig, sinks=()) -> tuple[State, RunLog]:
    """Advance the state to tmax, emitting snapshots through the sinks.

    Each sink is called as sink(step_index, state) at step 0, every
    snapshot_every steps, and at the final step.  Halts early when the
    blow-up guard psi(t) > blowup_factor * psi(0) trips.
    """
    _check_divergence(initial)
    sob = config.sobolev
    log = RunLog()

    def psi_of(state: State) -> float:
        return (
            dyadic_sobolev_norm(state.u, sob.s) ** 2
            + dyadic_sobolev_norm(state.b, sob.r) ** 2
        )

    psi0 = psi_of(initial)
    n_steps = int(round(config.tmax / config.dt))
    if cfl_advisory_dt(initial, config.params) < config.dt:
        warnings.warn(f"dt={config.dt} exceeds the advisory CFL bound", RuntimeWarning)

    state = initial
    for sink in sinks:
        sink(0, state)
    log.times.append(state.t)
    log.psi.append(psi0)

    for i in range(1, n_steps + 1):
        state = step(state, config)
        if i % 100 == 0:
            # The b-equation needs no projection analytically; project anyway
            # and log the removed magnitude to distinguish scheme drift.
            projected = leray_project(state.b)
            log.projection_drift.append(
                (state.t, lp_norm(state.b - projected, 2))
            )
            state = State(state.u, projected, state.t)
        at_snapshot = (i % config.snapshot_every == 0) or (i == n_steps)
        if at_snapshot:
            psi = psi_of(state)
            log.times.append(state.t)
            log.psi.append(psi)
            if psi0 > 0 and psi > config.blowup_factor * psi0:
                log.halted = True
                log.halt_reason = f"blow-up guard tripped at t={state.t}"
                for sink in sinks:
                    sink(i, state)
                break
            for sink in sinks:
                sink(i, state)
    return state, log


def recover_pressure(state: State, params: PhysicalParams) -> SpectralField:
    """Zero-mean pressure whose gradient is the projected-out part of the flux."""
    w = advect(state.u, state.u) - advect(state.b, state.b)
    g = state.grid
    k, ksq = g.k, g.ksq
    kdotw = k[0] * w.coeffs[0] + k[1] * w.coeffs[1] + k[2] * w.coeffs[2]
    inv_ksq = np.where(ksq > 0, 1.0 / np.where(ksq > 0, ksq, 1.0), 0.0)
    p_hat = 1j * kdotw * inv_ksq
    return SpectralField(g, p_hat[None])


def _beltrami(grid: Grid) -> SpectralField:
    xs = grid.coordinates()
    x = xs[0]
    vals = np.stack([np.zeros_like(x), np.sin(x), np.cos(x)])
    return to_spectral(grid, vals)


def _taylor_green_like(grid: Grid) -> SpectralField:
    xs = grid.coordinates()
    x, y = xs[0], xs[1]
    z = xs[2] if grid.n == 3 else None
    if grid.n == 3:
        vals = np.stack(
            [
                np.cos(x) * np.sin(y) * np.sin(z),
                -np.sin(x) * np.cos(y) * np.sin(z),
                np.zeros_like(x),
            ]
        )
    else:
        vals = np.stack([np.cos(x) * np.sin(y), -np.sin(x) * np.cos(y), np.zeros_like(x)])
    return leray_project(to_spectral(grid, vals))


def make_initial(
    kind: str,
    grid: Grid,
    seed: int,
    target_norms: tuple[float, float] | None,
    sob: SobolevParams,
    band: float | None = None,
) -> State:
    """Divergence-free initial data rescaled to hit the requested dyadic norms."""
    if band is None:
        band = resolved_band(grid)
    if kind == "beltrami":
        u = SpectralField.zero(grid, 3)
        b = _beltrami(grid)
    elif kind == "taylor_green_like":
        u = _taylor_green_like(grid)
        b = _taylor_green_like(grid)
    elif kind == "random_band":
        u = random_band_field(grid, seed, band)
        b = random_band_field(grid, seed + 1, band)
    else:
        raise ValueError(f"unknown initial kind {kind!r}")

    if target_norms is not None:
        tu, tb = target_norms
        u = _rescale(u, sob.s, tu, kind, seed)
        b = _rescale(b, sob.r, tb, kind, seed)
    return State(u, b, 0.0)


def _rescale(f: SpectralField, s: float, target: float, kind: str, seed: int) -> SpectralField:
    if target == 0.0:
        return SpectralField.zero(f.grid, f.m)
    current = dyadic_sobolev_norm(f, s)
    if current == 0.0:
        raise ValueError(
            f"unreachable target norm for kind={kind!r}, seed={seed}: zero draw, reseed"
        )
    return f * (target / current)
