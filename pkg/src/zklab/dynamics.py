"""Time evolution: exact free propagator and the ETDRK4 stepper.

The stepper integrates the dealiased Fourier-Galerkin system

    d/dt uhat = i omega(zeta) uhat - D(zeta) * P_B[(u^2)hat],

where D is the form's nonlinear derivative multiplier and P_B the 2/3-rule
projection.  The linear part is exact (phase multipliers); the classical
ETDRK4 coefficients are evaluated from the phi functions with a Taylor
fallback near z = 0, which is stable for the purely imaginary spectrum here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InstabilityError, UsageError
from .forms import DispersionForm
from .spectral import Field, dealias_mask

__all__ = ["EtdrkTableau", "SolverState", "etdrk4_tableau", "linear_propagator",
           "nonlinear_term", "step_etdrk4", "evolve", "max_dispersion"]

# Documented step-size limit: beyond this the nonlinear stage phases are
# unresolved and the fourth-order error constant is meaningless.
DT_OMEGA_LIMIT = 1.0e4

_PHI_SERIES_RADIUS = 0.5
_PHI_SERIES_TERMS = 18


def max_dispersion(grid, form: DispersionForm) -> float:
    """max |omega| over the dealiased band."""
    return float(np.abs(form.omega(grid)[dealias_mask(grid)]).max())


def linear_propagator(field: Field, t: float, form: DispersionForm) -> Field:
    """Exact free evolution exp(i t omega(zeta)) on the lattice."""
    phase = np.exp(1j * t * form.omega(field.grid))
    return field.multiplier(phase)


def nonlinear_term(field: Field, form: DispersionForm) -> Field:
    """-d(u^2) under the form's derivative, 2/3 dealiased."""
    g = field.grid
    vals = field.values
    sq = np.fft.fft2(vals * vals) / (g.nx * g.ny)
    out = -form.nonlinear_derivative(g) * sq * dealias_mask(g)
    return Field(g, out, "spectral")


def _phi(j: int, z: np.ndarray) -> np.ndarray:
    """phi_j(z) = (e^z - sum_{k<j} z^k/k!) / z^j, entire; series near 0."""
    z = np.asarray(z, dtype=np.complex128)
    small = np.abs(z) < _PHI_SERIES_RADIUS
    series = np.zeros_like(z)
    term = np.ones_like(z) / float(math.factorial(j))
    series += term
    zs = np.where(small, z, 0.0)
    for k in range(1, _PHI_SERIES_TERMS):
        term = term * zs / (k + j)
        series += term
    with np.errstate(divide="ignore", invalid="ignore"):
        ez = np.exp(z)
        partial = np.zeros_like(z)
        fact = 1.0
        for k in range(j):
            partial += z ** k / fact
            fact *= k + 1
        closed = (ez - partial) / z ** j
    return np.where(small, series, closed)


@dataclass(frozen=True)
class EtdrkTableau:
    e_full: np.ndarray
    e_half: np.ndarray
    q: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    f3: np.ndarray


def etdrk4_tableau(grid, dt: float, form: DispersionForm) -> EtdrkTableau:
    z = 1j * dt * form.omega(grid)
    phi1, phi2, phi3 = _phi(1, z), _phi(2, z), _phi(3, z)
    return EtdrkTableau(
        e_full=np.exp(z),
        e_half=np.exp(0.5 * z),
        q=0.5 * dt * _phi(1, 0.5 * z),
        f1=dt * (phi1 - 3.0 * phi2 + 4.0 * phi3),
        f2=dt * (phi2 - 2.0 * phi3),
        f3=dt * (4.0 * phi3 - phi2),
    )


@dataclass(frozen=True)
class SolverState:
    """Stepper state: spectral field, clock, step size, form, counters."""

    field: Field
    t: float
    dt: float
    form: DispersionForm
    dealias: bool = True
    steps: int = 0

    def __post_init__(self):
        if not self.dt > 0:
            raise UsageError(f"dt must be positive, got {self.dt}")
        limit = self.dt * max_dispersion(self.field.grid, self.form)
        if limit > DT_OMEGA_LIMIT:
            raise UsageError(
                f"dt * max|omega| = {limit:.3g} exceeds the documented limit "
                f"{DT_OMEGA_LIMIT:.3g}; reduce dt or the resolution")


def _advance(uhat: np.ndarray, tab: EtdrkTableau, grid, form, mask) -> np.ndarray:
    def nonlin(vhat):
        vals = np.real(np.fft.ifft2(vhat)) * (grid.nx * grid.ny)
        sq = np.fft.fft2(vals * vals) / (grid.nx * grid.ny)
        return -form.nonlinear_derivative(grid) * sq * mask

    n0 = nonlin(uhat)
    a = tab.e_half * uhat + tab.q * n0
    na = nonlin(a)
    b = tab.e_half * uhat + tab.q * na
    nb = nonlin(b)
    c = tab.e_half * a + tab.q * (2.0 * nb - n0)
    nc = nonlin(c)
    return tab.e_full * uhat + tab.f1 * n0 + 2.0 * tab.f2 * (na + nb) + tab.f3 * nc


def step_etdrk4(state: SolverState, tableau: EtdrkTableau | None = None) -> SolverState:
    """One ETDRK4 step; raises InstabilityError on non-finite output."""
    grid = state.field.grid
    if tableau is None:
        tableau = etdrk4_tableau(grid, state.dt, state.form)
    uhat = state.field.coeffs
    if state.dealias:
        uhat = uhat * dealias_mask(grid)
    new = _advance(uhat, tableau, grid, state.form, dealias_mask(grid))
    if not np.all(np.isfinite(new)):
        raise InstabilityError(
            f"non-finite state at t = {state.t + state.dt:.6g}",
            last_diagnostics=_basic_diagnostics(state))
    return replace(state, field=Field(grid, new, "spectral"),
                   t=state.t + state.dt, steps=state.steps + 1)


def _basic_diagnostics(state: SolverState) -> dict:
    coeffs = state.field.coeffs
    l2 = float(np.sqrt(state.field.grid.area * np.sum(np.abs(coeffs) ** 2)))
    return {"t": state.t, "steps": state.steps, "l2": l2}


def evolve(u0: Field, t_final: float, dt: float, form: DispersionForm,
           sample_every: int = 1, diagnostics=None):
    """Evolve from u0 and return the sampled trajectory.

    ``t_final`` must be a whole number of steps and of sampling strides;
    the returned SpaceTimeField contains the frame at t = 0 and every
    ``sample_every``-th step.  ``diagnostics(t, field)`` is called at each
    sampled frame.  T = 0 returns the initial frame alone.
    """
    from .trajectory import SpaceTimeField

    grid = u0.grid
    u0 = u0.spectral()
    if t_final < 0:
        raise UsageError("t_final must be non-negative")
    if sample_every < 1:
        raise UsageError("sample_every must be a positive integer")
    frames = [u0.coeffs * dealias_mask(grid)]
    if diagnostics is not None:
        diagnostics(0.0, Field(grid, frames[0], "spectral"))
    if t_final == 0:
        return SpaceTimeField(grid, 0.0, dt * sample_every, np.stack(frames))

    n_steps = int(round(t_final / dt))
    if abs(n_steps * dt - t_final) > 1e-8 * max(dt, t_final) or n_steps == 0:
        raise UsageError(f"t_final = {t_final} is not a whole number of steps of dt = {dt}")
    if n_steps % sample_every != 0:
        raise UsageError("t_final / dt must be divisible by sample_every")

    state = SolverState(Field(grid, frames[0], "spectral"), 0.0, dt, form)
    tab = etdrk4_tableau(grid, dt, form)
    for k in range(1, n_steps + 1):
        state = step_etdrk4(state, tab)
        if k % sample_every == 0:
            frames.append(state.field.coeffs)
            if diagnostics is not None:
                diagnostics(state.t, state.field)
    return SpaceTimeField(grid, 0.0, dt * sample_every, np.stack(frames))
