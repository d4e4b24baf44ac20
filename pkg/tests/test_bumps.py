import numpy as np
import pytest

from zklab import chi, psi, smoothstep


def test_smoothstep_endpoints_and_monotone():
    assert smoothstep(0.0) == 0.0
    assert smoothstep(1.0) == 1.0
    assert smoothstep(-3.0) == 0.0
    assert smoothstep(4.0) == 1.0
    t = np.linspace(0.0, 1.0, 401)
    assert np.all(np.diff(smoothstep(t)) >= 0.0)


def test_smoothstep_c2_joins():
    """First and second divided differences vanish at t = 0 and t = 1."""
    h = 1e-5
    for edge in (0.0, 1.0):
        d1 = (smoothstep(edge + h) - smoothstep(edge - h)) / (2 * h)
        d2 = (smoothstep(edge + h) - 2 * smoothstep(edge) + smoothstep(edge - h)) / h ** 2
        assert abs(d1) < 1e-8
        assert abs(d2) < 1e-3


def test_chi_plateau_and_support():
    x = np.linspace(-1.0, 1.0, 101)
    assert np.all(chi(x) == 1.0)
    assert chi(2.0) == 0.0
    assert chi(-2.5) == 0.0
    assert chi(5.0) == 0.0
    mid = chi(1.5)
    assert 0.0 < mid < 1.0
    assert chi(-1.5) == mid


def test_chi_transition_value():
    # half-way through the blend the quintic gives exactly 1/2
    assert chi(1.5) == pytest.approx(0.5, abs=1e-15)


def test_psi_support_and_telescope():
    assert psi(0.2) == 0.0
    assert psi(3.0) == 0.0
    assert psi(1.0) == pytest.approx(1.0)
    # sum of psi(x / 2^j) over octaves telescopes back to chi differences
    x = np.linspace(0.03125, 1.0, 64)
    total = sum(psi(x / 2.0 ** j) for j in range(-6, 2))
    assert np.allclose(total, chi(x / 4.0) - chi(64.0 * x), atol=1e-14)
