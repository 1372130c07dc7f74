"""Difference system: consistency, cancellations, Gronwall envelope."""

import numpy as np
import pytest

from hallmhd import (
    Grid,
    PhysicalParams,
    SobolevParams,
    SolverConfig,
    State,
    compute_rhs,
    make_initial,
    run,
)
from hallmhd.littlewood_paley import resolved_band
from hallmhd.random_fields import random_band_field
from hallmhd.spectral import (
    SpectralField,
    gradient,
    lp_norm,
    to_physical,
    to_spectral,
)
from hallmhd.uniqueness import (
    cancellation_check,
    difference_rhs,
    flux_bound_residuals,
    gronwall_check,
    hall_difference_identity_residual,
)

SOB = SobolevParams(1.0, 1.75, 0.25)
PARAMS = PhysicalParams(0.05, 0.05, 0.1)


@pytest.fixture(scope="module")
def grid():
    return Grid(3, 32)


@pytest.fixture(scope="module")
def fields(grid):
    band = resolved_band(grid)
    return {name: random_band_field(grid, 900 + i, band)
            for i, name in enumerate(["u1", "b1", "u2", "b2"])}


def test_difference_rhs_consistency(grid, fields):
    """difference_rhs must equal the subtraction of the two full right-hand sides."""
    u1, b1, u2, b2 = fields["u1"], fields["b1"], fields["u2"], fields["b2"]
    U, B = u1 - u2, b1 - b2
    dU, dB = difference_rhs(U, B, u1, b1, u2, b2, PARAMS)
    r1u, r1b = compute_rhs(State(u1, b1, 0.0), PARAMS)
    r2u, r2b = compute_rhs(State(u2, b2, 0.0), PARAMS)
    su, sb = r1u - r2u, r1b - r2b
    assert lp_norm(dU - su, 2) < 1e-10 * max(lp_norm(su, 2), 1e-30)
    assert lp_norm(dB - sb, 2) < 1e-10 * max(lp_norm(sb, 2), 1e-30)


def test_difference_rhs_rejects_divergent_input(grid, fields):
    x = grid.coordinates()[0]
    bad = to_spectral(grid, np.stack([np.sin(x), np.zeros_like(x), np.zeros_like(x)]))
    u1 = fields["u1"]
    with pytest.raises(ValueError, match="divergence drift"):
        difference_rhs(bad, u1, u1, u1, u1, u1, PARAMS)


def test_cancellations_small(grid, fields):
    band = resolved_band(grid)
    U = random_band_field(grid, 910, band)
    B = random_band_field(grid, 911, band)
    rs = cancellation_check(U, B, fields["u2"], fields["b1"], fields["b2"])
    assert len(rs) == 4
    assert max(rs) < 1e-10


def test_cancellations_zero_fields(grid):
    z = SpectralField.zero(grid, 3)
    assert cancellation_check(z, z, z, z, z) == (0.0, 0.0, 0.0, 0.0)


def test_cancellation_negative_control(grid, fields):
    band = resolved_band(grid)
    U = random_band_field(grid, 912, band)
    B = random_band_field(grid, 913, band)
    # potential correlated with |U|^2 so the transport identity's numerator
    # cannot average away against the broadband energy density
    e = (to_physical(U) ** 2).sum(axis=0)
    ehat = to_spectral(grid, e)
    pot = SpectralField(
        grid, np.where(grid.ksq > 0, -ehat.coeffs / np.maximum(grid.ksq, 1e-300), 0.0)
    )
    bump = gradient(pot)
    contaminated = fields["u2"] + bump * (lp_norm(fields["u2"], 2) / lp_norm(bump, 2))
    rs = cancellation_check(U, B, contaminated, fields["b1"], fields["b2"])
    assert rs[0] > 1e-2


def test_hall_difference_identity(grid, fields):
    band = resolved_band(grid)
    B = random_band_field(grid, 914, band)
    assert hall_difference_identity_residual(fields["b2"], B) < 1e-12


def test_flux_bounds_hold(grid, fields):
    band = resolved_band(grid)
    U = random_band_field(grid, 915, band)
    B = random_band_field(grid, 916, band)
    pairs = flux_bound_residuals(U, B, fields["u1"], fields["b1"], fields["b2"])
    assert len(pairs) == 5
    for value, bound in pairs:
        assert abs(value) <= bound * (1 + 1e-12)


def _paired_runs(grid, eps, dt=1e-3):
    st = make_initial("random_band", grid, 920, (1.0, 1.0), SOB)
    pert = State(
        SpectralField(grid, st.u.coeffs * (1.0 + eps)),
        SpectralField(grid, st.b.coeffs * (1.0 + eps)),
        0.0,
    )
    cfg = SolverConfig(PARAMS, SOB, dt, 0.01, snapshot_every=max(1, round(1e-3 / dt)))
    t1, t2 = [], []
    run(st, cfg, sinks=[lambda i, s: t1.append(s.copy())])
    run(pert, cfg, sinks=[lambda i, s: t2.append(s.copy())])
    return t1, t2


def test_gronwall_identical_runs(grid):
    t1, t2 = _paired_runs(grid, 0.0)
    trace = gronwall_check(t1, t2, SOB, 1.0, 1.0)
    assert trace.passed
    assert np.all(trace.energy == 0.0)
    assert trace.minimal_C_nu_mu == 0.0


def test_gronwall_perturbed_run(grid):
    t1, t2 = _paired_runs(grid, 1e-6)
    probe = gronwall_check(t1, t2, SOB, 1.0, 1.0)
    assert probe.energy[0] > 0
    assert np.isfinite(probe.minimal_C_nu_mu)
    # with the reported minimal constant (plus margin) the envelope holds
    final = gronwall_check(t1, t2, SOB, 1.0, probe.minimal_C_nu_mu * 1.001 + 1e-12)
    assert final.passed
    # an absurdly small constant fails whenever the difference grows
    if probe.minimal_C_nu_mu > 0:
        assert not gronwall_check(t1, t2, SOB, 1.0, 0.0).passed


def test_gronwall_mismatched_traces(grid):
    t1, t2 = _paired_runs(grid, 0.0)
    with pytest.raises(ValueError, match="trace lengths"):
        gronwall_check(t1, t2[:-1], SOB, 1.0, 1.0)
    shifted = [State(s.u, s.b, s.t + 0.5) for s in t2]
    with pytest.raises(ValueError, match="time grids"):
        gronwall_check(t1, shifted, SOB, 1.0, 1.0)
