"""Smooth cutoff profiles used by every frequency/time localization in the package.

``chi`` is an even bump equal to 1 on [-1, 1] and supported in [-2, 2]; the
transition uses the quintic smoothstep, so ``chi`` is C^2 with vanishing
first and second derivatives at |x| = 1 and |x| = 2.  ``psi(x) = chi(x) -
chi(2x)`` is the induced annular profile.  Dyadic rescalings of these two
profiles build the Littlewood-Paley family, the modulation projections and
the time cutoffs, so that telescoping identities hold exactly in floating
point (see :mod:`zklab.littlewood_paley`).
"""

from __future__ import annotations

import numpy as np

__all__ = ["chi", "psi", "smoothstep"]


def smoothstep(t):
    """Quintic blend: 0 for t <= 0, 1 for t >= 1, C^2 monotone in between."""
    t = np.clip(t, 0.0, 1.0)
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t))


def chi(x):
    """Even cutoff: exactly 1 on [-1, 1], exactly 0 outside (-2, 2)."""
    a = np.abs(np.asarray(x, dtype=np.float64))
    return 1.0 - smoothstep(a - 1.0)


def psi(x):
    """Annular profile chi(x) - chi(2x), supported on 1/2 <= |x| <= 2."""
    x = np.asarray(x, dtype=np.float64)
    return chi(x) - chi(2.0 * x)
