"""Discrete Gross-Pitaevskii flow on an arbitrary hopping matrix.

    dw_j/dt = -i (eps w)_j - 2 i g c |w_j|^2 / s * w_j

Coherent drift has c = 1, s = 1. Number drift divides by s = ||w||^2;
with ``finite_n`` it also carries c = (N-1)/N. Both agree on the unit
sphere when c = 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .integrators import rk4_on_grid
from .model import ModelParams, TimeGrid, TrajectorySeries

NORM_DRIFT_LIMIT = 1e-6


class NormDriftError(RuntimeError):
    pass


@dataclass(frozen=True)
class GPState:
    w: np.ndarray
    time: float = 0.0


@dataclass(frozen=True)
class DriftMode:
    kind: str = "coherent"
    n_total: int | None = None
    finite_n: bool = False

    def __post_init__(self):
        if self.kind not in ("coherent", "number"):
            raise ValueError(f"unknown drift kind {self.kind!r}")
        if self.kind == "number" and (self.n_total is None or self.n_total < 2):
            raise ValueError("number drift needs n_total >= 2")

    @classmethod
    def coherent(cls) -> "DriftMode":
        return cls("coherent")

    @classmethod
    def number(cls, n_total: int, finite_n: bool = False) -> "DriftMode":
        return cls("number", n_total, finite_n)

    def prefactor(self) -> float:
        if self.kind == "number" and self.finite_n:
            return (self.n_total - 1) / self.n_total
        return 1.0


def _coupling(params: ModelParams) -> float:
    if params.g is not None:
        return params.g
    raise ValueError("GP flow needs g; build params with n_total (ModelParams.from_g)")


def gp_rhs(state, params: ModelParams, mode: DriftMode = DriftMode()) -> np.ndarray:
    w = np.asarray(state.w if isinstance(state, GPState) else state, dtype=complex)
    if w.shape != (params.sites,):
        raise ValueError(f"state has shape {w.shape}, model has {params.sites} sites")
    return _rhs(w, params.hopping, _coupling(params), mode)


def _rhs(w, eps, g, mode):
    dens = np.abs(w) ** 2
    scale = 2.0 * g * mode.prefactor()
    if mode.kind == "number":
        scale = scale / dens.sum()
    return -1j * (eps @ w) - 1j * scale * dens * w


# below this many sites plain complex arithmetic beats numpy call overhead
_SCALAR_SITES = 4


def _scalar_flow(eps, g, mode, w0, times, substeps, check):
    """Same RK4 as rk4_on_grid, on Python complex lists."""
    sites = len(w0)
    rows = [[(j, -1j * float(eps[i, j])) for j in range(sites) if eps[i, j] != 0] for i in range(sites)]
    base = 2.0 * g * mode.prefactor()
    number = mode.kind == "number"

    def rhs(w):
        dens = [x.real * x.real + x.imag * x.imag for x in w]
        scale = base / sum(dens) if number else base
        out = []
        for i in range(sites):
            acc = -1j * scale * dens[i] * w[i]
            for j, c in rows[i]:
                acc += c * w[j]
            out.append(acc)
        return out

    w = [complex(x) for x in w0]
    out = np.empty((len(times), sites), dtype=complex)
    out[0] = w
    for k in range(1, len(times)):
        h = (times[k] - times[k - 1]) / substeps
        half, sixth = 0.5 * h, h / 6.0
        for _ in range(substeps):
            k1 = rhs(w)
            k2 = rhs([a + half * b for a, b in zip(w, k1)])
            k3 = rhs([a + half * b for a, b in zip(w, k2)])
            k4 = rhs([a + h * b for a, b in zip(w, k3)])
            w = [a + sixth * (b + 2.0 * c + 2.0 * d + e) for a, b, c, d, e in zip(w, k1, k2, k3, k4)]
        out[k] = w
        check(times[k], w)
    return out


def default_dt(params: ModelParams, base: float = 1e-3) -> float:
    """Step size base / max(hopping scale, |g|); the scale is the spectral radius of eps."""
    scale = float(np.max(np.abs(np.linalg.eigvalsh(params.hopping))))
    return base / max(scale, abs(_coupling(params)), 1e-300)


def gp_energy(w, eps, g):
    w = np.asarray(w)
    hop = np.einsum("...i,ij,...j->...", np.conj(w), eps, w).real
    return hop + g * np.sum(np.abs(w) ** 4, axis=-1)


def integrate_gp(params: ModelParams, mode: DriftMode, w0, grid: TimeGrid, substeps: int = 1, scale_by_n: bool = False) -> TrajectorySeries:
    """RK4 without renormalization; aborts when | ||w||^2 - 1 | exceeds 1e-6.

    Columns: rho<j> per site, norm, energy and for two or more sites
    rho1-based n12_over_N and q = w_1 conj(w_2). With ``scale_by_n`` the
    density-matrix elements N w_i conj(w_j) are added as dm_<i><j>.
    """
    w0 = np.asarray(w0, dtype=complex)
    if w0.shape != (params.sites,):
        raise ValueError(f"w0 has shape {w0.shape}, model has {params.sites} sites")
    if abs(np.sum(np.abs(w0) ** 2) - 1.0) > 1e-12:
        raise ValueError("w0 must be normalized")
    eps = params.hopping
    g = _coupling(params)

    def check(t, w):
        drift = abs(sum(x.real * x.real + x.imag * x.imag for x in w) - 1.0)
        if not drift <= NORM_DRIFT_LIMIT:
            raise NormDriftError(f"norm drift {drift:.3e} at t={t:.6g} exceeds {NORM_DRIFT_LIMIT:.0e}; reduce dt")

    if params.sites <= _SCALAR_SITES:
        ws = _scalar_flow(eps, g, mode, w0, grid.times, substeps, check)
    else:
        ws = rk4_on_grid(lambda t, w: _rhs(w, eps, g, mode), w0, grid.times, substeps, check)
    dens = np.abs(ws) ** 2
    series = TrajectorySeries(grid.times, raw=ws)
    for j in range(params.sites):
        series.add(f"rho{j + 1}", dens[:, j])
    if params.sites >= 2:
        series.add("n12_over_N", dens[:, 0] - dens[:, 1])
        series.add("q", ws[:, 0] * np.conj(ws[:, 1]))
    series.add("norm", dens.sum(axis=1))
    series.add("energy", gp_energy(ws, eps, g))
    if scale_by_n:
        if params.n_total is None:
            raise ValueError("scale_by_n needs n_total")
        for i in range(params.sites):
            for j in range(params.sites):
                series.add(f"dm_{i + 1}{j + 1}", params.n_total * ws[:, i] * np.conj(ws[:, j]))
    return series
