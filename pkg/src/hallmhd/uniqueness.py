"""Difference-system machinery: cancellation identities and the Gronwall bound.

The difference (U, B) of two solutions satisfies a linearized system whose
energy growth is controlled by an exponential factor built from norms of the
reference solutions.  The checks here consume two independent forward runs on
a common time grid; difference_rhs exists for consistency testing against the
subtraction of the full right-hand sides.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .littlewood_paley import SobolevParams, dyadic_sobolev_norm
from .solver import PhysicalParams, State
from .spectral import (
    SpectralField,
    advect,
    cross,
    curl,
    divergence,
    inner_product,
    laplacian,
    leray_project,
    lp_norm,
    partial_derivative,
    to_physical,
)


def difference_rhs(
    U: SpectralField,
    B: SpectralField,
    u1: SpectralField,
    b1: SpectralField,
    u2: SpectralField,
    b2: SpectralField,
    params: PhysicalParams,
):
    """Right-hand sides of the difference system, pressure removed by projection.

    Equals compute_rhs(u1, b1) - compute_rhs(u2, b2) to roundoff whenever
    U = u1 - u2 and B = b1 - b2.
    """
    for name, f in (("U", U), ("B", B), ("u1", u1), ("b1", b1), ("u2", u2), ("b2", b2)):
        drift = lp_norm(divergence(f), 2)
        if drift > 1e-8 * max(1.0, lp_norm(f, 2)):
            raise ValueError(f"divergence drift in {name}: {drift:.3e}")

    dU = leray_project(
        -advect(u2, U) + advect(b2, B) - advect(U, u1) + advect(B, b1)
    ) + params.nu * laplacian(U)
    hall = curl(cross(curl(b2), B)) + curl(cross(curl(B), b1))
    dB = (
        -advect(u2, B)
        + advect(b2, U)
        - advect(U, b1)
        + advect(B, u1)
        - params.eta * hall
        + params.mu * laplacian(B)
    )
    return dU, dB


def _abs_integral(values: np.ndarray, grid) -> float:
    return float(np.abs(values).sum() * grid.cell_volume)


def _dot_phys(f: SpectralField, g: SpectralField) -> np.ndarray:
    return (to_physical(f) * to_physical(g)).sum(axis=0)


def cancellation_check(
    U: SpectralField,
    B: SpectralField,
    u2: SpectralField,
    b1: SpectralField,
    b2: SpectralField,
):
    """Residuals of the four exact cancellations, each normalized by the
    integral of the absolute value of its unsplit integrand."""
    g = U.grid

    def ratio(numer: float, integrand: np.ndarray) -> float:
        denom = _abs_integral(integrand, g)
        return abs(numer) / denom if denom > 0 else 0.0

    t1 = advect(u2, U)
    r1 = ratio(inner_product(t1, U), _dot_phys(t1, U))

    t2 = advect(u2, B)
    r2 = ratio(inner_product(t2, B), _dot_phys(t2, B))

    t3 = cross(curl(B), b1)
    # curl form: int curl(w) . B = int w . curl B
    r3 = ratio(
        inner_product(t3, curl(B)),
        _dot_phys(t3, curl(B)),
    )

    t4a = advect(b2, B)
    t4b = advect(b2, U)
    denom4 = _abs_integral(_dot_phys(t4a, U), g) + _abs_integral(_dot_phys(t4b, B), g)
    num4 = inner_product(t4a, U) + inner_product(t4b, B)
    r4 = abs(num4) / denom4 if denom4 > 0 else 0.0

    return r1, r2, r3, r4


def hall_difference_identity_residual(b2: SpectralField, B: SpectralField) -> float:
    """|int curl((curl b2) x B) . B - int ((curl b2) x B) . curl B| (normalized)."""
    w = cross(curl(b2), B)
    lhs = inner_product(curl(w), B)
    rhs = inner_product(w, curl(B))
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return abs(lhs - rhs) / scale


@dataclass
class DifferenceTrace:
    """Energy of the difference and its Gronwall envelope along a run pair."""

    t: np.ndarray
    energy: np.ndarray
    gronwall_factor: np.ndarray
    passed: bool
    minimal_C_nu_mu: float


def _grad_field(f: SpectralField) -> SpectralField:
    comps = [partial_derivative(f, ax).coeffs for ax in range(3)]
    return SpectralField(f.grid, np.concatenate(comps))


def gronwall_check(
    run1: list[State],
    run2: list[State],
    sob: SobolevParams,
    C: float,
    C_nu_mu: float,
) -> DifferenceTrace:
    """Check energy(t) <= energy(0) * exp{C_nu_mu int_0^t g + C C_nu_mu t}.

    g(tau) = ||u1||_{H^{s+1}}^2 + ||grad b2||_{H^{s+1-eps}}^2, integrated by the
    trapezoid rule on the stored trace.  Also reports the minimal C_nu_mu that
    would pass with the given C.
    """
    if len(run1) != len(run2):
        raise ValueError("mismatched trace lengths")
    ts = np.array([st.t for st in run1])
    ts2 = np.array([st.t for st in run2])
    if not np.allclose(ts, ts2, rtol=0, atol=1e-12):
        raise ValueError("mismatched time grids")

    energy = np.array(
        [
            lp_norm(s1.u - s2.u, 2) ** 2 + lp_norm(s1.b - s2.b, 2) ** 2
            for s1, s2 in zip(run1, run2)
        ]
    )
    g = np.array(
        [
            dyadic_sobolev_norm(s1.u, sob.s + 1.0) ** 2
            + dyadic_sobolev_norm(_grad_field(s2.b), sob.r) ** 2
            for s1, s2 in zip(run1, run2)
        ]
    )
    integral = np.concatenate([[0.0], np.cumsum(0.5 * (g[1:] + g[:-1]) * np.diff(ts))])
    exponent_scale = integral + C * ts
    # cap the exponent: beyond ~700 the envelope is infinite anyway
    factor = np.exp(np.minimum(C_nu_mu * exponent_scale, 700.0))

    if energy[0] == 0.0:
        passed = bool(np.all(energy == 0.0))
    else:
        passed = bool(np.all(energy <= energy[0] * factor + 1e-300))
    minimal = 0.0
    if energy[0] > 0:
        with np.errstate(divide="ignore", invalid="ignore"):
            need = np.log(energy[1:] / energy[0]) / exponent_scale[1:]
        need = need[np.isfinite(need)]
        if len(need):
            minimal = float(max(0.0, need.max()))
    return DifferenceTrace(ts, energy, factor, passed, minimal)


def flux_bound_residuals(
    U: SpectralField,
    B: SpectralField,
    u1: SpectralField,
    b1: SpectralField,
    b2: SpectralField,
):
    """The five nonzero difference-system flux integrals against their bounds.

    Returns (value, bound) pairs; each |value| must not exceed its bound.
    """
    pairs = []
    t = advect(B, b1)
    pairs.append((inner_product(t, U), lp_norm(B, 2) * _grad_l2(U) * lp_norm(b1, np.inf)))
    t = advect(U, u1)
    pairs.append((inner_product(t, U), lp_norm(U, 2) * _grad_l2(U) * lp_norm(u1, np.inf)))
    t = advect(B, u1)
    pairs.append((inner_product(t, B), lp_norm(B, 2) * _grad_l2(B) * lp_norm(u1, np.inf)))
    t = advect(U, b1)
    pairs.append((inner_product(t, B), lp_norm(U, 2) * _grad_l2(B) * lp_norm(b1, np.inf)))
    w = cross(curl(b2), B)
    pairs.append(
        (
            inner_product(curl(w), B),
            lp_norm(curl(B), 2) * lp_norm(curl(b2), np.inf) * lp_norm(B, 2),
        )
    )
    return pairs


def _grad_l2(f: SpectralField) -> float:
    return lp_norm(_grad_field(f), 2)
