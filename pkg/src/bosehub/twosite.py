"""Large-N two-site reductions: pendulum and quartic double well.

With every particle initially on site 1 the mean-field dynamics reduce to a
pendulum phi'' + 4 eps^2 sin(phi) = 0 started at (0, 2g), whose angular
velocity maps to the imbalance rho12 = phi'/(2g). The same imbalance obeys
rho12'' + (4 eps^2 - 2 g^2) rho12 + 2 g^2 rho12^3 = 0 from (1, 0).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import TimeGrid, TrajectorySeries

CRITICAL_TOL = 1e-12


class Regime(enum.Enum):
    OSCILLATORY = "oscillatory"
    SELF_TRAPPED = "self-trapped"
    CRITICAL = "critical"


@dataclass(frozen=True)
class PendulumState:
    phi: float | np.ndarray
    phi_dot: float | np.ndarray


@dataclass(frozen=True)
class WellState:
    rho12: float | np.ndarray
    rho12_dot: float | np.ndarray


def _scalar_rk4(force, x0, v0, grid: TimeGrid, substeps: int):
    """x'' = force(x) with plain float arithmetic; much faster than numpy for 2 dofs."""
    n = grid.steps
    xs = [0.0] * (n + 1)
    vs = [0.0] * (n + 1)
    x, v = float(x0), float(v0)
    xs[0], vs[0] = x, v
    h = grid.dt / substeps
    h2 = 0.5 * h
    h6 = h / 6.0
    for k in range(1, n + 1):
        for _ in range(substeps):
            a1 = force(x)
            x2 = x + h2 * v
            v2 = v + h2 * a1
            a2 = force(x2)
            x3 = x + h2 * v2
            v3 = v + h2 * a2
            a3 = force(x3)
            x4 = x + h * v3
            v4 = v + h * a3
            a4 = force(x4)
            x += h6 * (v + 2.0 * v2 + 2.0 * v3 + v4)
            v += h6 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        xs[k], vs[k] = x, v
    return np.array(xs), np.array(vs)


def pendulum_integrate(eps: float, g: float, grid: TimeGrid, substeps: int = 1) -> TrajectorySeries:
    """RK4 pendulum from phi=0, phi'=2g; columns phi, phi_dot (plus rho1 when g>0)."""
    k = 4.0 * eps * eps
    sin = math.sin
    phi, phi_dot = _scalar_rk4(lambda x: -k * sin(x), 0.0, 2.0 * g, grid, substeps)
    series = TrajectorySeries(grid.times, {"phi": phi, "phi_dot": phi_dot})
    if g > 0:
        rho1 = rho1_from_pendulum(phi_dot, g)
        series.add("rho1", rho1)
        series.add("n12_over_N", 2.0 * rho1 - 1.0)
    return series


def rho1_from_pendulum(phi_dot, g: float):
    """Site-1 population fraction (1 + phi'/2g)/2."""
    if g == 0:
        raise ValueError("the pendulum map needs g != 0")
    return 0.5 * (1.0 + np.asarray(phi_dot) / (2.0 * g))


def double_well_integrate(eps: float, g: float, grid: TimeGrid, substeps: int = 1) -> TrajectorySeries:
    """RK4 quartic oscillator from rho12=1, rho12'=0; columns rho12, rho12_dot, rho1, n12_over_N."""
    lin = 4.0 * eps * eps - 2.0 * g * g
    cub = 2.0 * g * g
    rho, rho_dot = _scalar_rk4(lambda x: -(lin + cub * x * x) * x, 1.0, 0.0, grid, substeps)
    return TrajectorySeries(grid.times, {
        "rho12": rho,
        "rho12_dot": rho_dot,
        "rho1": 0.5 * (1.0 + rho),
        "n12_over_N": rho,
    })


def classify_regime(eps: float, g: float) -> Regime:
    if abs(g - 2.0 * eps) < CRITICAL_TOL:
        return Regime.CRITICAL
    return Regime.SELF_TRAPPED if g > 2.0 * eps else Regime.OSCILLATORY


def numerical_regime(eps: float, g: float, dt: float = 1e-3) -> Regime:
    """Classify by whether phi' changes sign over t in [0, 50/eps]."""
    if abs(g - 2.0 * eps) < CRITICAL_TOL:
        return Regime.CRITICAL
    series = pendulum_integrate(eps, g, TimeGrid(50.0 / eps, dt))
    crosses = np.any(series["phi_dot"] < 0)
    return Regime.OSCILLATORY if crosses else Regime.SELF_TRAPPED


def pendulum_energy(state: PendulumState, eps: float):
    return 0.5 * np.square(state.phi_dot) - 4.0 * eps * eps * np.cos(state.phi)


def well_energy(state: WellState, eps: float, g: float):
    rho = np.asarray(state.rho12)
    return 0.5 * np.square(state.rho12_dot) + (2.0 * eps * eps - g * g) * rho ** 2 + 0.5 * g * g * rho ** 4


def trapped_minimum(eps: float, g: float) -> float:
    """Inner turning point sqrt(1 - 4 eps^2/g^2) of the self-trapped orbit."""
    if g <= 2.0 * eps:
        raise ValueError("no self-trapped orbit for g <= 2 eps")
    return math.sqrt(1.0 - 4.0 * eps * eps / (g * g))
