"""Littlewood-Paley projections on the lattice.

The core block P_0 carries the profile ``chi(|zeta| / 0.5)`` and the dyadic
shell P_N (N = 1, 2, 4, ...) carries ``chi(|zeta| / N) - chi(|zeta| / (N/2))``.
Written this way consecutive shells cancel bit-for-bit, so the partition

    P_0 + sum_{N <= M} P_N  =  multiplier chi(|zeta| / M)

holds exactly in floating point; once M exceeds the lattice radius the sum
is exactly 1 on every lattice point.

``axis=None`` localizes in |zeta| (radial); ``axis="x"`` / ``axis="y"``
localize in |xi| / |eta| alone, which is the variant used by the
direction-sensitive smoothing probes.
"""

from __future__ import annotations

import numpy as np

from .bumps import chi
from .errors import UsageError
from .spectral import Field, Grid2D

__all__ = ["lp_project", "shell_weight", "dyadic_shells", "partition_values",
           "LPProjector", "is_dyadic"]


def is_dyadic(n: float) -> bool:
    """True for 2**k with integer k (including fractions like 0.5)."""
    if n <= 0:
        return False
    m = np.log2(n)
    return float(m) == np.round(m)


def _radius(grid: Grid2D, axis: str | None) -> np.ndarray:
    if axis is None:
        return grid.abs_zeta
    if axis == "x":
        return np.abs(grid.xi_grid)
    if axis == "y":
        return np.abs(grid.eta_grid)
    raise UsageError(f"axis must be None, 'x' or 'y', got {axis!r}")


def shell_weight(r: np.ndarray, block: float) -> np.ndarray:
    """Multiplier profile of one LP block evaluated at radii ``r``.

    ``block = 0`` is the core block; ``block = N`` (dyadic >= 1) the shell.
    """
    if block == 0:
        return chi(r / 0.5)
    if block < 1 or not is_dyadic(block):
        raise UsageError(f"shell index must be 0 or a dyadic >= 1, got {block!r}")
    return chi(r / block) - chi(r / (block * 0.5))


def lp_project(field: Field, block: float, axis: str | None = None) -> Field:
    """Project onto the LP block (0 = core, dyadic N >= 1 = shell)."""
    r = _radius(field.grid, axis)
    return field.multiplier(shell_weight(r, block))


def dyadic_shells(grid: Grid2D, axis: str | None = None) -> list[float]:
    """Shell indices [1, 2, 4, ...] whose support meets the lattice."""
    rmax = float(_radius(grid, axis).max())
    shells: list[float] = []
    block = 1.0
    while block * 0.5 < rmax:
        shells.append(block)
        block *= 2.0
    return shells


def partition_values(grid: Grid2D, top: float | None = None,
                     axis: str | None = None) -> np.ndarray:
    """Pointwise sum of P_0 + sum of shells up to ``top`` over the lattice."""
    r = _radius(grid, axis)
    if top is None:
        top = 2.0 ** np.ceil(np.log2(max(r.max(), 1.0)))
    total = shell_weight(r, 0)
    block = 1.0
    while block <= top:
        total = total + shell_weight(r, block)
        block *= 2.0
    return total


class LPProjector:
    """Reusable family of LP multipliers for one grid (weights precomputed)."""

    def __init__(self, grid: Grid2D, axis: str | None = None):
        self.grid = grid
        self.axis = axis
        self.shells = dyadic_shells(grid, axis)
        r = _radius(grid, axis)
        self._weights = {0.0: shell_weight(r, 0)}
        for block in self.shells:
            self._weights[block] = shell_weight(r, block)

    def weight(self, block: float) -> np.ndarray:
        return self._weights[float(block)]

    def apply(self, field: Field, block: float) -> Field:
        if not field.grid.same_geometry(self.grid):
            raise UsageError("field grid does not match projector grid")
        return field.multiplier(self.weight(block))

    def blocks(self) -> list[float]:
        return [0.0] + list(self.shells)
