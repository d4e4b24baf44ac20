"""Periodic grid, field container, and the basic spectral operations.

Conventions fixed here and relied on everywhere else:

* Physical samples live on the uniform lattice ``x_j = j * lx / nx``,
  ``y_k = k * ly / ny`` with shape ``(nx, ny)`` and ``indexing="ij"``.
* Spectral data are Fourier *series* coefficients: the forward transform is
  ``fft2(u) / (nx * ny)``, so ``u(x, y) = sum_jk uhat[j, k] * exp(i(xi_j x + eta_k y))``
  with wavenumbers ``xi_j = 2*pi*j / lx`` on the centered index set
  ``{-nx/2, ..., nx/2 - 1}`` in FFT order.
* Quadrature: ``integral(u) = lx * ly * uhat[0, 0]`` and Parseval reads
  ``integral(|u|^2) = lx * ly * sum |uhat|^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DataError, UsageError

__all__ = ["Grid2D", "Field", "make_grid", "to_spectral", "to_physical",
           "derivative", "dealias", "dealias_mask"]


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid2D:
    """Uniform periodic box [0, lx) x [0, ly) with power-of-two sampling."""

    nx: int
    ny: int
    lx: float
    ly: float

    def __post_init__(self):
        for name, n in (("nx", self.nx), ("ny", self.ny)):
            if not isinstance(n, (int, np.integer)) or not _is_pow2(int(n)) or n < 8:
                raise DataError(f"{name} must be a power of two >= 8, got {n!r}")
        for name, length in (("lx", self.lx), ("ly", self.ly)):
            if not (float(length) > 0.0) or not np.isfinite(length):
                raise DataError(f"{name} must be a positive finite period, got {length!r}")

    @cached_property
    def x(self) -> np.ndarray:
        return np.arange(self.nx) * (self.lx / self.nx)

    @cached_property
    def y(self) -> np.ndarray:
        return np.arange(self.ny) * (self.ly / self.ny)

    @cached_property
    def xi(self) -> np.ndarray:
        """Wavenumbers 2*pi*j/lx, FFT order, j in {-nx/2, ..., nx/2 - 1}."""
        return 2.0 * np.pi * np.fft.fftfreq(self.nx, d=self.lx / self.nx)

    @cached_property
    def eta(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.ny, d=self.ly / self.ny)

    @cached_property
    def xi_grid(self) -> np.ndarray:
        return self.xi[:, None] + 0.0 * self.eta[None, :]

    @cached_property
    def eta_grid(self) -> np.ndarray:
        return 0.0 * self.xi[:, None] + self.eta[None, :]

    @cached_property
    def abs_zeta(self) -> np.ndarray:
        return np.hypot(self.xi_grid, self.eta_grid)

    @property
    def cell_area(self) -> float:
        return (self.lx / self.nx) * (self.ly / self.ny)

    @property
    def area(self) -> float:
        return self.lx * self.ly

    @cached_property
    def nyquist_mask(self) -> np.ndarray:
        """False on the unpaired Nyquist row/column, True elsewhere."""
        keep = np.ones((self.nx, self.ny), dtype=bool)
        keep[self.nx // 2, :] = False
        keep[:, self.ny // 2] = False
        return keep

    def lattice_radius(self) -> float:
        """Largest |zeta| on the lattice."""
        return float(np.hypot(np.abs(self.xi).max(), np.abs(self.eta).max()))

    def same_geometry(self, other: "Grid2D") -> bool:
        return (self.nx == other.nx and self.ny == other.ny
                and np.isclose(self.lx, other.lx, rtol=1e-13, atol=0.0)
                and np.isclose(self.ly, other.ly, rtol=1e-13, atol=0.0))


def make_grid(nx: int, ny: int, lx: float, ly: float) -> Grid2D:
    """Validated Grid2D constructor."""
    return Grid2D(int(nx), int(ny), float(lx), float(ly))


@dataclass(frozen=True)
class Field:
    """A scalar field on a Grid2D, in physical or spectral representation.

    Physical data are real float64 samples; spectral data are complex128
    series coefficients with Hermitian symmetry (real underlying field).
    Instances are immutable; conversions return new objects.
    """

    grid: Grid2D
    data: np.ndarray
    space: str  # "physical" | "spectral"

    def __post_init__(self):
        if self.space not in ("physical", "spectral"):
            raise DataError(f"space must be 'physical' or 'spectral', got {self.space!r}")
        shape = (self.grid.nx, self.grid.ny)
        if self.data.shape != shape:
            raise DataError(f"data shape {self.data.shape} does not match grid {shape}")
        if self.space == "physical" and np.iscomplexobj(self.data):
            raise DataError("physical representation must be real-valued")

    # -- conversions ---------------------------------------------------------

    def spectral(self) -> "Field":
        if self.space == "spectral":
            return self
        coeffs = np.fft.fft2(self.data) / (self.grid.nx * self.grid.ny)
        return Field(self.grid, coeffs, "spectral")

    def physical(self) -> "Field":
        if self.space == "physical":
            return self
        vals = np.fft.ifft2(self.data) * (self.grid.nx * self.grid.ny)
        return Field(self.grid, np.real(vals), "physical")

    @property
    def coeffs(self) -> np.ndarray:
        return self.spectral().data

    @property
    def values(self) -> np.ndarray:
        return self.physical().data

    # -- small algebra (same grid, representation-aligned) -------------------

    def _aligned(self, other: "Field") -> tuple[np.ndarray, np.ndarray, str]:
        if not self.grid.same_geometry(other.grid):
            raise UsageError("fields live on different grids")
        if self.space == other.space:
            return self.data, other.data, self.space
        return self.coeffs, other.coeffs, "spectral"

    def __add__(self, other: "Field") -> "Field":
        a, b, space = self._aligned(other)
        return Field(self.grid, a + b, space)

    def __sub__(self, other: "Field") -> "Field":
        a, b, space = self._aligned(other)
        return Field(self.grid, a - b, space)

    def __mul__(self, scalar: float) -> "Field":
        if self.space == "physical":
            return Field(self.grid, self.data * float(scalar), "physical")
        return Field(self.grid, self.data * float(scalar), "spectral")

    __rmul__ = __mul__

    def multiplier(self, symbol: np.ndarray) -> "Field":
        """Apply a Fourier multiplier given as an (nx, ny) symbol array."""
        return Field(self.grid, self.coeffs * symbol, "spectral")


def make_field(grid: Grid2D, values: np.ndarray) -> Field:
    """Physical-space field from real samples."""
    values = np.asarray(values, dtype=np.float64)
    return Field(grid, values, "physical")


def from_coefficients(grid: Grid2D, coeffs: np.ndarray) -> Field:
    return Field(grid, np.asarray(coeffs, dtype=np.complex128), "spectral")


def to_spectral(field: Field) -> Field:
    return field.spectral()


def to_physical(field: Field) -> Field:
    return field.physical()


def derivative(field: Field, ax: int, ay: int) -> Field:
    """Partial derivative d^ax/dx^ax d^ay/dy^ay via (i xi)^ax (i eta)^ay.

    Odd orders zero the unpaired Nyquist line so that real fields stay real.
    """
    if ax < 0 or ay < 0:
        raise UsageError("derivative orders must be non-negative integers")
    g = field.grid
    mult_x = (1j * g.xi) ** ax
    mult_y = (1j * g.eta) ** ay
    if ax % 2 == 1:
        mult_x = mult_x.copy()
        mult_x[g.nx // 2] = 0.0
    if ay % 2 == 1:
        mult_y = mult_y.copy()
        mult_y[g.ny // 2] = 0.0
    return Field(g, field.coeffs * mult_x[:, None] * mult_y[None, :], "spectral")


def dealias_mask(grid: Grid2D) -> np.ndarray:
    """2/3-rule mask: integer modes with |j| > nx/3 or |k| > ny/3 are dropped."""
    jx = np.fft.fftfreq(grid.nx, d=1.0 / grid.nx)
    jy = np.fft.fftfreq(grid.ny, d=1.0 / grid.ny)
    keep_x = np.abs(jx) <= grid.nx / 3.0
    keep_y = np.abs(jy) <= grid.ny / 3.0
    return keep_x[:, None] & keep_y[None, :]


def dealias(field: Field) -> Field:
    """Zero every mode outside the 2/3 band.  Idempotent."""
    g = field.grid
    return Field(g, field.coeffs * dealias_mask(g), "spectral")


def in_band(field: Field, mask: np.ndarray, tol: float = 0.0) -> bool:
    """True if the spectral content outside ``mask`` is at most ``tol`` in l2."""
    coeffs = field.coeffs
    outside = np.linalg.norm(coeffs[~mask])
    return bool(outside <= tol * max(1.0, np.linalg.norm(coeffs)))
