"""Seeded band-limited random fields for sweeps and initial data.

The generator is NumPy's default PCG64 bit stream seeded directly with the
integer seed; coefficients are drawn as standard complex normals on the modes
0 < |k| <= band in a fixed (component-major, C-order lattice) order, then
Hermitian-symmetrized and optionally Leray-projected.  Identical seeds give
bit-identical fields on one platform.
"""

from __future__ import annotations

import numpy as np

from .spectral import Grid, SpectralField, hermitian_symmetrize, leray_project


def random_band_field(
    grid: Grid,
    seed: int,
    band: float,
    m: int = 3,
    divergence_free: bool = True,
) -> SpectralField:
    """Random field with spectral support in 0 < |k| <= band."""
    rng = np.random.default_rng(seed)
    shape = (m,) + grid.shape
    raw = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    mask = (grid.kmag > 0) & (grid.kmag <= band)
    coeffs = hermitian_symmetrize(raw * mask, grid.n)
    f = SpectralField(grid, coeffs)
    if divergence_free:
        if m != 3:
            raise ValueError("divergence-free draw requires m = 3")
        f = leray_project(f)
    return f
