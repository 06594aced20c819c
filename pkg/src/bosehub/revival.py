"""Approximate two-site moment system with collapse and revival.

    n12' = -4 eps Im q
    q'   = i eps n12 - i u (1 + cos 2 ut t) n12 q - u N sin(2 ut t) q

where ``ut`` (u_tilde) is either u or 0; at 0 this is the pendulum system.
The friction term is removed analytically: with
A(t) = exp(-(k g / 4 ut)(1 - cos 2 ut t)) we integrate m = n12/A, y = q/A.

The "phase" variant replaces the averaged factor (1 + e^{-2iut})/2 by
e^{-2iut}; this doubles the friction (k = 2) and uses 2u cos(2 ut t) as the
nonlinear coefficient.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import TimeGrid, TrajectorySeries

OVERFLOW_FACTOR = 1e6
VARIANTS = ("averaged", "phase")


class RevivalOverflowError(RuntimeError):
    pass


@dataclass(frozen=True)
class RevivalState:
    n12: float
    q: complex


@dataclass(frozen=True)
class RevivalParams:
    eps: float
    u: float
    u_tilde: float
    n_total: int

    @classmethod
    def from_g(cls, eps: float, g: float, n_total: int, switched_on: bool = True) -> "RevivalParams":
        u = g / n_total
        return cls(eps, u, u if switched_on else 0.0, n_total)

    @property
    def g(self) -> float:
        return self.u * self.n_total


def _coefficients(params: RevivalParams, variant: str):
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    k = 1.0 if variant == "averaged" else 2.0
    return k


def revival_rhs(state: RevivalState, params: RevivalParams, t: float, variant: str = "averaged") -> tuple[float, complex]:
    k = _coefficients(params, variant)
    u, ut, eps = params.u, params.u_tilde, params.eps
    c = math.cos(2.0 * ut * t)
    s = math.sin(2.0 * ut * t)
    inter = u * (1.0 + c) if variant == "averaged" else 2.0 * u * c
    dn12 = -4.0 * eps * state.q.imag
    dq = 1j * eps * state.n12 - 1j * inter * state.n12 * state.q - k * params.g * s * state.q
    return dn12, dq


def friction_factor(params: RevivalParams, t, variant: str = "averaged"):
    """exp(-(1/2) * integral of the friction), i.e. A(t)."""
    k = _coefficients(params, variant)
    t = np.asarray(t, dtype=float)
    if params.u_tilde == 0:
        return np.ones(t.shape)
    return np.exp(-(k * params.g / (4.0 * params.u_tilde)) * (1.0 - np.cos(2.0 * params.u_tilde * t)))


def integrate_revival(params: RevivalParams, grid: TimeGrid, substeps: int = 1, variant: str = "averaged", stabilized: bool = True) -> TrajectorySeries:
    """RK4 from n12 = N, q = 0; columns n12_over_N, q (= q/N), envelope.

    Raises RevivalOverflowError when |q| exceeds 1e6 N.
    """
    k = _coefficients(params, variant)
    eps, u, ut, g = params.eps, params.u, params.u_tilde, params.g
    big_n = params.n_total
    limit = OVERFLOW_FACTOR * big_n
    half_fric = 0.5 * k * g
    amp = (k * g / (4.0 * ut)) if ut != 0 else 0.0
    cos, sin, exp = math.cos, math.sin, math.exp
    averaged = variant == "averaged"

    def rhs(t, m, y):
        c = cos(2.0 * ut * t)
        s = sin(2.0 * ut * t)
        inter = u * (1.0 + c) if averaged else 2.0 * u * c
        if stabilized:
            a = exp(-amp * (1.0 - c))
            return (-4.0 * eps * y.imag + half_fric * s * m,
                    1j * eps * m - 1j * inter * a * m * y - half_fric * s * y)
        return (-4.0 * eps * y.imag, 1j * eps * m - 1j * inter * m * y - k * g * s * y)

    n = grid.steps
    ms = [0.0] * (n + 1)
    ys = [0j] * (n + 1)
    m, y = float(big_n), 0j
    ms[0], ys[0] = m, y
    h = grid.dt / substeps
    for step in range(1, n + 1):
        t = (step - 1) * grid.dt
        for j in range(substeps):
            t0 = t + j * h
            a1, b1 = rhs(t0, m, y)
            a2, b2 = rhs(t0 + 0.5 * h, m + 0.5 * h * a1, y + 0.5 * h * b1)
            a3, b3 = rhs(t0 + 0.5 * h, m + 0.5 * h * a2, y + 0.5 * h * b2)
            a4, b4 = rhs(t0 + h, m + h * a3, y + h * b3)
            m += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
            y += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        ms[step], ys[step] = m, y
        scale = exp(-amp * (1.0 - cos(2.0 * ut * step * grid.dt))) if stabilized else 1.0
        if not abs(y) * scale <= limit:
            raise RevivalOverflowError(f"|q| = {abs(y) * scale:.3e} exceeds {limit:.3e} at t={step * grid.dt:.6g}")
    times = grid.times
    envelope = friction_factor(params, times, variant)
    scale = envelope if stabilized else np.ones(times.shape)
    return TrajectorySeries(times, {
        "n12_over_N": scale * np.array(ms) / big_n,
        "q": scale * np.array(ys) / big_n,
        "envelope": envelope,
    })


def collapse_envelope(n_total, u, t):
    """exp(-(N/4)(1 - cos 2ut))."""
    return np.exp(-(n_total / 4.0) * (1.0 - np.cos(2.0 * u * np.asarray(t, dtype=float))))


def approx_small_g_solution(n_total, eps, u, t):
    """Envelope times the free Rabi oscillation N cos 2 eps t."""
    t = np.asarray(t, dtype=float)
    return collapse_envelope(n_total, u, t) * n_total * np.cos(2.0 * eps * t)
