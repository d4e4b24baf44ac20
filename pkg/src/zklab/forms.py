"""The two dispersion forms of the equation.

Original form:     u_t + u_xxx + u_xyy + (u^2)_x = 0,
                   free propagator multiplier exp(i t (xi^3 + xi eta^2)).
Symmetrized form:  u_t + u_xxx + u_yyy + (u^2)_x + (u^2)_y = 0,
                   free propagator multiplier exp(i t (xi^3 + eta^3)).

The dispersion polynomial is zeroed on the unpaired Nyquist lines (same rule
as odd-order derivatives) so that all multipliers preserve real fields.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import ConfigurationError
from .spectral import Grid2D

__all__ = ["DispersionForm"]


class DispersionForm(Enum):
    ORIGINAL = "original"
    SYMMETRIZED = "symmetrized"

    @classmethod
    def parse(cls, name: str) -> "DispersionForm":
        try:
            return cls(str(name).lower())
        except ValueError:
            raise ConfigurationError(
                f"form: expected 'original' or 'symmetrized', got {name!r}") from None

    def omega(self, grid: Grid2D) -> np.ndarray:
        """Dispersion polynomial on the lattice, Nyquist lines zeroed."""
        xi, eta = grid.xi_grid, grid.eta_grid
        if self is DispersionForm.ORIGINAL:
            w = xi ** 3 + xi * eta ** 2
        else:
            w = xi ** 3 + eta ** 3
        return np.where(grid.nyquist_mask, w, 0.0)

    def omega_scalar(self, xi, eta):
        """Dispersion polynomial at arbitrary (xi, eta) points (no masking)."""
        xi = np.asarray(xi, dtype=np.float64)
        eta = np.asarray(eta, dtype=np.float64)
        if self is DispersionForm.ORIGINAL:
            return xi ** 3 + xi * eta ** 2
        return xi ** 3 + eta ** 3

    def nonlinear_derivative(self, grid: Grid2D) -> np.ndarray:
        """Multiplier of the derivative acting on u^2 (i xi, or i (xi + eta))."""
        xi = np.where(np.arange(grid.nx) == grid.nx // 2, 0.0, grid.xi)
        eta = np.where(np.arange(grid.ny) == grid.ny // 2, 0.0, grid.eta)
        if self is DispersionForm.ORIGINAL:
            return 1j * (xi[:, None] + 0.0 * eta[None, :])
        return 1j * (xi[:, None] + eta[None, :])
