"""Space-time trajectories on a fixed grid, sampled at uniform times.

Temporal Fourier analysis uses the periodic Hann window
``w_l = (1 - cos(2 pi l / K)) / 2`` and the discrete frequencies
``tau_m = 2 pi m / (K dt)`` in FFT order.  All temporal transforms analyze
the *windowed* trajectory; complementary modulation projections therefore
reconstruct the windowed field, and reports quote the window leakage scale
(two DFT bins, the Hann main-lobe half width).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bumps import chi
from .errors import DataError, ResolutionError, UsageError
from .forms import DispersionForm
from .littlewood_paley import is_dyadic
from .spectral import Field, Grid2D

__all__ = ["SpaceTimeField", "modulation_project"]


@dataclass(frozen=True)
class SpaceTimeField:
    """Uniformly sampled trajectory; frames stored as spectral coefficients."""

    grid: Grid2D
    t0: float
    dt: float
    coeffs: np.ndarray  # (K, nx, ny) complex

    def __post_init__(self):
        if self.coeffs.ndim != 3 or self.coeffs.shape[1:] != (self.grid.nx, self.grid.ny):
            raise DataError(f"coeffs shape {self.coeffs.shape} does not match grid")
        if self.coeffs.shape[0] < 1:
            raise DataError("a trajectory needs at least one frame")
        if not (self.dt > 0.0) and self.coeffs.shape[0] > 1:
            raise DataError("dt must be positive for multi-frame trajectories")

    @classmethod
    def from_fields(cls, frames: list[Field], t0: float, dt: float) -> "SpaceTimeField":
        if not frames:
            raise UsageError("empty frame list")
        grid = frames[0].grid
        stack = np.stack([f.coeffs for f in frames])
        return cls(grid, float(t0), float(dt), stack)

    @property
    def num_frames(self) -> int:
        return self.coeffs.shape[0]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.num_frames)

    @property
    def span(self) -> float:
        """Window length t_end - t_0."""
        return self.dt * (self.num_frames - 1)

    def frame(self, index: int) -> Field:
        return Field(self.grid, self.coeffs[index], "spectral")

    def values(self) -> np.ndarray:
        """Physical samples of every frame, shape (K, nx, ny), real."""
        n = self.grid.nx * self.grid.ny
        return np.real(np.fft.ifft2(self.coeffs, axes=(1, 2))) * n

    # -- temporal analysis ----------------------------------------------------

    @cached_property
    def window(self) -> np.ndarray:
        """Periodic Hann taper over the K samples."""
        k = self.num_frames
        return 0.5 * (1.0 - np.cos(2.0 * np.pi * np.arange(k) / k))

    @property
    def tau(self) -> np.ndarray:
        """Temporal frequencies 2*pi*fftfreq(K, dt), FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.num_frames, d=self.dt)

    def leakage_scale(self) -> float:
        """Hann main-lobe half width: two DFT bins."""
        return 2.0 * (2.0 * np.pi / (self.num_frames * self.dt))

    def windowed(self) -> "SpaceTimeField":
        return SpaceTimeField(self.grid, self.t0, self.dt,
                              self.coeffs * self.window[:, None, None])

    def temporal_transform(self) -> np.ndarray:
        """DFT in time of the windowed frames: c[m] = (1/K) sum_l w_l u_l e^{-i 2 pi m l / K}."""
        if self.num_frames < 8:
            raise ResolutionError("temporal transforms need at least 8 samples")
        windowed = self.coeffs * self.window[:, None, None]
        return np.fft.fft(windowed, axis=0) / self.num_frames

    def from_temporal_transform(self, cmod: np.ndarray) -> "SpaceTimeField":
        frames = np.fft.ifft(cmod, axis=0) * self.num_frames
        return SpaceTimeField(self.grid, self.t0, self.dt, frames)


def _modulation_weights(stf: SpaceTimeField, scale: float, form: DispersionForm,
                        part: str) -> np.ndarray:
    if not is_dyadic(scale):
        raise UsageError(f"modulation scale must be dyadic >= 1, got {scale!r}")
    k = stf.num_frames
    if k < 8:
        raise ResolutionError("too few time samples for a modulation projection")
    tau_max = float(np.abs(stf.tau).max())
    bin_width = 2.0 * np.pi / (k * stf.dt)
    if scale > tau_max / 2.0 or scale < bin_width:
        raise ResolutionError(
            f"modulation scale {scale} outside the resolvable range "
            f"[{bin_width:.3g}, {tau_max / 2.0:.3g}] of this sampling")
    omega = form.omega(stf.grid)
    # Zero the dispersion term on the temporal Nyquist bin so the multiplier
    # stays even under (zeta, tau) -> (-zeta, -tau) and real fields stay real.
    omega_eff = np.broadcast_to(omega, (k,) + omega.shape).copy()
    if k % 2 == 0:
        omega_eff[k // 2] = 0.0
    mu = stf.tau[:, None, None] - omega_eff
    if part == "shell":
        return chi(mu / scale) - chi(mu / (scale * 0.5))
    if part == "low":
        return chi(mu / (scale * 0.5))
    if part == "high":
        return 1.0 - chi(mu / (scale * 0.5))
    raise UsageError(f"part must be 'shell', 'low' or 'high', got {part!r}")


def modulation_project(stf: SpaceTimeField, scale: float,
                       form: DispersionForm, part: str = "shell") -> SpaceTimeField:
    """Project onto modulation scales of tau - omega(zeta).

    ``part="shell"`` applies the dyadic annulus psi((tau - omega)/M);
    ``"low"`` / ``"high"`` apply the complementary pair Q_{<M} / Q_{>=M},
    which sum to the identity on the windowed trajectory.
    """
    weights = _modulation_weights(stf, float(scale), form, part)
    return stf.from_temporal_transform(stf.temporal_transform() * weights)
