"""Energy bookkeeping on a short seeded run.

The solver conserves total energy up to viscous/resistive dissipation (the
Hall term moves energy between scales but is globally neutral).  Per-shell,
the weighted energy balance closes through the five flux integrals I1..I5,
and the growth of the combined Sobolev norm feeds an existence-time estimate.
"""

import numpy as np

from hallmhd import Grid, PhysicalParams, SobolevParams, SolverConfig, make_initial, run
from hallmhd.diagnostics import (
    energy_balance_residual,
    existence_time,
    flux_terms,
    shell_energies,
    total_energy_residual,
)

grid = Grid(3, 32)
sob = SobolevParams(1.0, 1.75, 0.25)
params = PhysicalParams(nu=0.05, mu=0.05, eta=0.1)

state = make_initial("random_band", grid, 78, (1.0, 1.0), sob)
cfg = SolverConfig(params, sob, dt=1e-3, tmax=0.01, snapshot_every=1)

states = []
final, log = run(state, cfg, sinks=[lambda i, s: states.append(s.copy())])

# Total energy law: d/dt (kinetic + magnetic) = -dissipation, discretely.
res = total_energy_residual(states, params)
print("total energy-law residual (max over samples):", res.max())

# Per-shell energies and the flux terms of the dyadic balance at mid-run.
mid = states[len(states) // 2]
rec = shell_energies(mid, sob)
print(f"shell energies at t = {mid.t:.3f}:")
for i, q in enumerate(range(-1, len(rec.e_u) - 1)):
    print(f"  q={q:+d}:  e_u = {rec.e_u[i]:.4e}   e_b = {rec.e_b[i]:.4e}")

f = flux_terms(mid, params, sob)
print("flux integrals:",
      f"I1={f.I1:.3e} I2={f.I2:.3e} I3={f.I3:.3e} I4={f.I4:.3e} I5={f.I5:.3e}")

ts, ru, rb = energy_balance_residual(states, params, sob)
print("dyadic balance residuals: u-equation", ru.max(), " b-equation", rb.max())

# The sampled psi(t) = ||u||_{H^s}^2 + ||b||_{H^r}^2 trace plugs into the
# existence-time formula T = 1/2 min over gamma of 1/(C gamma psi0^gamma).
psi0 = log.psi[0]
est = existence_time(psi0, C=1e-4, gamma_low=1.0, gamma_high=1.0)
print(f"psi0 = {psi0:.4f};  with C = 1e-4 the guaranteed horizon is T = {est.T:.3f}")
