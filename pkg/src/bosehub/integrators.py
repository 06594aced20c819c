"""Fixed-step classic Runge-Kutta drivers."""
from __future__ import annotations

import numpy as np


def rk4_step(rhs, t, y, h):
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_on_grid(rhs, y0, times: np.ndarray, substeps: int = 1, check=None) -> np.ndarray:
    """Integrate y' = rhs(t, y), recording y at every grid time.

    ``check(t, y)`` runs after each recorded point and may raise to abort.
    """
    y = np.array(y0)
    out = np.empty((len(times),) + y.shape, dtype=y.dtype)
    out[0] = y
    for k in range(1, len(times)):
        t0 = times[k - 1]
        h = (times[k] - t0) / substeps
        for j in range(substeps):
            y = rk4_step(rhs, t0 + j * h, y, h)
        out[k] = y
        if check is not None:
            check(times[k], y)
    return out
