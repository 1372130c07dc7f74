"""Bony paraproduct split of transport terms and the three shell commutators.

The split of Delta_q(u . grad v) keeps the low-high, high-low and resonant
interactions as separate fields whose sum reproduces the direct evaluation to
roundoff on band-limited data.  The p-window |q - p| <= 2 (p >= q - 2 for the
resonant part) is kept exactly as written, one (p, q) pair at a time; merging
the window would break the exact low-frequency cancellations downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .littlewood_paley import decompose, low_pass, max_shell, project_shell
from .spectral import (
    SpectralField,
    advect,
    cross,
    curl,
    inner_product,
    lp_norm,
    partial_derivative,
)


@dataclass
class BonySplit:
    """The three interaction classes of Delta_q(u . grad v) at one shell q."""

    q: int
    low_high: SpectralField
    high_low: SpectralField
    resonant: SpectralField

    def total(self) -> SpectralField:
        return self.low_high + self.high_low + self.resonant


def bony_split(u: SpectralField, v: SpectralField, q: int) -> BonySplit:
    Q = max_shell(u.grid)
    if q < -1 or q > Q:
        raise ValueError(f"shell index {q} outside [-1, {Q}]")
    su, sv = decompose(u), decompose(v)

    lh = SpectralField.zero(u.grid, v.m)
    hl = SpectralField.zero(u.grid, v.m)
    for p in range(max(-1, q - 2), min(Q, q + 2) + 1):
        u_low = low_pass(u, p - 2)
        lh = lh + project_shell(advect(u_low, sv.shell(p)), q)
        hl = hl + project_shell(advect(su.shell(p), low_pass(v, p - 2)), q)

    res = SpectralField.zero(u.grid, v.m)
    for p in range(max(-1, q - 2), Q + 1):
        res = res + project_shell(advect(su.near_shell(p), sv.shell(p)), q)

    return BonySplit(q, lh, hl, res)


def commutator_transport(u_low: SpectralField, v_p: SpectralField, q: int) -> SpectralField:
    """[Delta_q, u_low . grad] v_p, both terms dealiased the same way."""
    return project_shell(advect(u_low, v_p), q) - advect(u_low, project_shell(v_p, q))


def commutator_cross_curl(F: SpectralField, G: SpectralField, q: int) -> SpectralField:
    """[Delta_q, F x curl] G = Delta_q(F x curl G) - F x curl(Delta_q G)."""
    return project_shell(cross(F, curl(G)), q) - cross(F, curl(project_shell(G, q)))


def commutator_curl_cross(F: SpectralField, G: SpectralField, q: int) -> SpectralField:
    """[Delta_q, curl F x] G = Delta_q(curl F x G) - curl F x Delta_q G."""
    cF = curl(F)
    return project_shell(cross(cF, G), q) - cross(cF, project_shell(G, q))


def _sup_gradient(F: SpectralField, order: int = 1) -> float:
    """Grid-sampled sup norm of the (iterated) gradient tensor of F."""
    fields = [F]
    for _ in range(order):
        fields = [partial_derivative(f, ax) for f in fields for ax in range(3)]
    stacked = SpectralField(F.grid, np.concatenate([f.coeffs for f in fields]))
    return lp_norm(stacked, np.inf)


def transport_bound_ratio(u: SpectralField, v: SpectralField, p: int, q: int) -> float:
    """Measured constant in the transport commutator bound at one (p, q) pair."""
    u_low = low_pass(u, p - 2)
    v_p = project_shell(v, p)
    denom = _sup_gradient(u_low) * lp_norm(v_p, 2)
    if denom == 0.0:
        raise ValueError("undefined ratio: zero denominator")
    return lp_norm(commutator_transport(u_low, v_p, q), 2) / denom


def cross_curl_bound_ratio(F: SpectralField, G: SpectralField, q: int) -> float:
    """Measured constant in ||[Delta_q, F x curl]G||_2 <= C ||grad F||_inf ||G||_2."""
    denom = _sup_gradient(F) * lp_norm(G, 2)
    if denom == 0.0:
        raise ValueError("undefined ratio: zero denominator")
    return lp_norm(commutator_cross_curl(F, G, q), 2) / denom


def curl_cross_bound_ratio(F: SpectralField, G: SpectralField, q: int) -> float:
    """Measured constant in ||[Delta_q, curl F x]G||_2 <= C ||grad F||_inf ||G||_2."""
    denom = _sup_gradient(F) * lp_norm(G, 2)
    if denom == 0.0:
        raise ValueError("undefined ratio: zero denominator")
    return lp_norm(commutator_curl_cross(F, G, q), 2) / denom


def trilinear_bound_ratio(
    F: SpectralField, G: SpectralField, H: SpectralField, q: int
) -> float:
    """Measured constant in |int [Delta_q, curl F x]G . curl H| <= C ||grad^2 F||_inf ||G||_2 ||H||_2."""
    denom = _sup_gradient(F, order=2) * lp_norm(G, 2) * lp_norm(H, 2)
    if denom == 0.0:
        raise ValueError("undefined ratio: zero denominator")
    return abs(inner_product(commutator_curl_cross(F, G, q), curl(H))) / denom
