"""Exact quantum evolution for one and two sites.

Two-site states live in fixed-N sectors with basis |n, N-n>, n = 0..N
(n counts site-1 bosons). Each sector Hamiltonian is real symmetric
tridiagonal. Coherent states are Poisson mixtures over sectors.

Observable convention: ``q`` is the density-matrix element with inner
product (f, g) = integral of f * conj(g), which equals the textbook
<a_2^dag a_1> / N. In the one-site case ``a`` equals the textbook
conj(<a>), so it starts at conj(lam).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln, jv
from scipy.stats import poisson

from .model import InitialState, ModelParams, TimeGrid, TrajectorySeries, validate_state

MAX_EIG_DIM = 5001
TAIL_MASS = 1e-12
# columns of evolved coefficients held in memory at once
_TIME_CHUNK = 512


@dataclass(frozen=True)
class FockSector:
    n_total: int

    def __post_init__(self):
        if self.n_total < 0:
            raise ValueError("n_total must be >= 0")

    @property
    def dim(self) -> int:
        return self.n_total + 1

    @property
    def occupations(self) -> np.ndarray:
        n = np.arange(self.dim)
        return np.stack([n, self.n_total - n], axis=1)


@dataclass(frozen=True, eq=False)
class SectorHamiltonian:
    """Symmetric tridiagonal sector Hamiltonian."""

    diagonal: np.ndarray
    offdiagonal: np.ndarray
    n_total: int

    @property
    def dim(self) -> int:
        return self.diagonal.shape[0]

    def dense(self) -> np.ndarray:
        return np.diag(self.diagonal) + np.diag(self.offdiagonal, 1) + np.diag(self.offdiagonal, -1)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diagonal[:, None] * v if v.ndim == 2 else self.diagonal * v
        out[:-1] += _bcast(self.offdiagonal, v) * v[1:]
        out[1:] += _bcast(self.offdiagonal, v) * v[:-1]
        return out

    def spectral_bounds(self) -> tuple[float, float]:
        # Gershgorin discs
        r = np.zeros(self.dim)
        r[:-1] += np.abs(self.offdiagonal)
        r[1:] += np.abs(self.offdiagonal)
        return float(np.min(self.diagonal - r)), float(np.max(self.diagonal + r))

    @cached_property
    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        if self.dim == 1:
            return self.diagonal.copy(), np.ones((1, 1))
        return eigh_tridiagonal(self.diagonal, self.offdiagonal)


def _bcast(vec, like):
    return vec[:, None] if like.ndim == 2 else vec


def hop_amplitudes(n_total: int) -> np.ndarray:
    """sqrt((n+1)(N-n)): matrix element of a_1^dag a_2 from |n> to |n+1>."""
    n = np.arange(n_total, dtype=float)
    return np.sqrt((n + 1.0) * (n_total - n))


def build_sector_hamiltonian(params: ModelParams, n_total: int) -> SectorHamiltonian:
    if params.sites != 2:
        raise ValueError(f"sector Hamiltonian needs 2 sites, got {params.sites}")
    if n_total < 0 or int(n_total) != n_total:
        raise ValueError("n_total must be a non-negative integer")
    n_total = int(n_total)
    eps = params.hopping
    u = params.interaction_u
    n = np.arange(n_total + 1, dtype=float)
    m = n_total - n
    diag = u * (n * (n - 1) + m * (m - 1)) + eps[0, 0] * n + eps[1, 1] * m
    off = eps[0, 1] * hop_amplitudes(n_total)
    return SectorHamiltonian(diag, off, n_total)


def number_state_coefficients(lam, n_total: int) -> np.ndarray:
    """Fock amplitudes of (lam.z)^N / sqrt(N! N^N) after normalizing lam."""
    lam = np.asarray(lam, dtype=complex)
    norm = math.sqrt(float(np.sum(np.abs(lam) ** 2)))
    if lam.shape != (2,) or norm == 0.0:
        raise ValueError("number state needs a nonzero two-component lam")
    l1, l2 = lam / norm
    n = np.arange(n_total + 1)
    m = n_total - n
    coeffs = np.zeros(n_total + 1, dtype=complex)
    ok = np.ones(n_total + 1, dtype=bool)
    if l1 == 0:
        ok &= n == 0
    if l2 == 0:
        ok &= m == 0
    n, m = n[ok], m[ok]
    log_binom = 0.5 * (gammaln(n_total + 1) - gammaln(n + 1) - gammaln(m + 1))
    log_mod = log_binom
    phase = np.zeros(n.shape)
    if l1 != 0:
        log_mod = log_mod + n * math.log(abs(l1))
        phase = phase + n * np.angle(l1)
    if l2 != 0:
        log_mod = log_mod + m * math.log(abs(l2))
        phase = phase + m * np.angle(l2)
    coeffs[ok] = np.exp(log_mod + 1j * phase)
    return coeffs


class SectorPropagator:
    """e^{-itH} on one sector, by eigendecomposition or Chebyshev steps."""

    def __init__(self, ham: SectorHamiltonian, solver: str = "auto"):
        if solver == "auto":
            solver = "eig" if ham.dim <= MAX_EIG_DIM else "chebyshev"
        if solver not in ("eig", "chebyshev"):
            raise ValueError(f"unknown solver {solver!r}")
        if solver == "eig" and ham.dim > MAX_EIG_DIM:
            raise ValueError(f"sector dimension {ham.dim} too large for dense eig (max {MAX_EIG_DIM})")
        self.ham = ham
        self.solver = solver

    def propagate(self, coeffs: np.ndarray, t: float) -> np.ndarray:
        if self.solver == "eig":
            energies, vecs = self.ham.eigensystem
            return vecs @ (np.exp(-1j * energies * t) * (vecs.T @ coeffs))
        return chebyshev_propagate(self.ham, coeffs, t)

    def on_grid(self, coeffs: np.ndarray, times: np.ndarray):
        """Yield (slice, coefficient block of shape dim x len(slice)) over the grid."""
        if self.solver == "eig":
            energies, vecs = self.ham.eigensystem
            overlap = vecs.T @ coeffs
            for start in range(0, len(times), _TIME_CHUNK):
                ts = times[start:start + _TIME_CHUNK]
                block = vecs @ (np.exp(-1j * np.outer(energies, ts)) * overlap[:, None])
                yield slice(start, start + len(ts)), block
            return
        state = coeffs.astype(complex)
        t_prev = 0.0
        for k, t in enumerate(times):
            if t != t_prev:
                state = chebyshev_propagate(self.ham, state, t - t_prev)
                t_prev = t
            yield slice(k, k + 1), state[:, None]


def chebyshev_propagate(ham: SectorHamiltonian, coeffs: np.ndarray, t: float, tol: float = 1e-15) -> np.ndarray:
    """Chebyshev expansion of e^{-iHt} applied to a vector."""
    lo, hi = ham.spectral_bounds()
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    v = np.asarray(coeffs, dtype=complex)
    if half == 0.0:
        return np.exp(-1j * mid * t) * v
    x = half * abs(t)
    order = int(x + 10.0 * x ** (1.0 / 3.0) + 30)
    bessel = jv(np.arange(order + 1), x)

    def scaled(w):
        return (ham.matvec(w) - mid * w) / half

    sign = -1j if t >= 0 else 1j
    t_prev, t_cur = v, scaled(v)
    acc = bessel[0] * t_prev + 2.0 * sign * bessel[1] * t_cur
    for k in range(2, order + 1):
        t_prev, t_cur = t_cur, 2.0 * scaled(t_cur) - t_prev
        term = 2.0 * sign ** k * bessel[k]
        acc += term * t_cur
        if abs(bessel[k]) < tol and k > x:
            break
    return np.exp(-1j * mid * t) * acc


def sector_observables(block: np.ndarray, n_total: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (norm, <n_1>, q) per column of a coefficient block; q is unnormalized."""
    prob = np.abs(block) ** 2
    norm = prob.sum(axis=0)
    n1 = np.arange(n_total + 1) @ prob
    if n_total == 0:
        q = np.zeros(block.shape[1], dtype=complex)
    else:
        q = hop_amplitudes(n_total) @ (np.conj(block[:-1]) * block[1:])
    return norm, n1, q


def evolve_number_state(params: ModelParams, n_total: int, lam, grid: TimeGrid, solver: str = "auto") -> TrajectorySeries:
    """Two-site number state; columns rho1, n12_over_N, q, norm."""
    if params.sites != 2:
        raise ValueError("number-state evolution is implemented for two sites")
    state = validate_state(InitialState.number(lam, n_total))
    coeffs = number_state_coefficients(state.lam, state.n_total)
    prop = SectorPropagator(build_sector_hamiltonian(params, state.n_total), solver)
    times = grid.times
    norm = np.empty(times.shape)
    n1 = np.empty(times.shape)
    q = np.empty(times.shape, dtype=complex)
    for sl, block in prop.on_grid(coeffs, times):
        norm[sl], n1[sl], q[sl] = sector_observables(block, state.n_total)
    big_n = state.n_total
    return TrajectorySeries(times, {
        "rho1": n1 / big_n,
        "n12_over_N": (2.0 * n1 - big_n * norm) / big_n,
        "q": q / big_n,
        "norm": norm,
    })


def poisson_window(mean: float, truncation: int | None = None, tail: float = TAIL_MASS) -> tuple[int, int, float]:
    """Sector range [lo, hi] and the Poisson mass outside it."""
    center = int(round(mean))
    if truncation is None:
        lo = int(poisson.ppf(tail / 4, mean)) if mean > 0 else 0
        hi = int(poisson.isf(tail / 4, mean)) + 1
        truncation = max(center - lo, hi - center)
    lo = max(0, center - truncation)
    hi = center + truncation
    lost = float(poisson.cdf(lo - 1, mean) + poisson.sf(hi, mean)) if lo > 0 else float(poisson.sf(hi, mean))
    if lost > tail:
        raise ValueError(f"truncation {truncation} discards Poisson mass {lost:.3e} > {tail:.0e}")
    return lo, hi, lost


def evolve_coherent_state(params: ModelParams, lam, grid: TimeGrid, truncation: int | None = None, solver: str = "auto") -> TrajectorySeries:
    """Coherent product state as a Poisson mixture over fixed-N sectors.

    One site: columns a (= (psi, a psi)), n_over_N, norm. Two sites: rho1,
    n12_over_N, q, norm. Normalization uses N = sum |lam|^2.
    """
    state = validate_state(InitialState.coherent(lam))
    if state.sites != params.sites:
        raise ValueError(f"lam has {state.sites} components for a {params.sites}-site model")
    mean = state.n_total
    lo, hi, _ = poisson_window(mean, truncation)
    if params.sites == 1:
        return _coherent_one_site(params, state.lam[0], grid, lo, hi)
    if params.sites != 2:
        raise ValueError("exact evolution supports one or two sites")
    times = grid.times
    direction = state.lam / math.sqrt(mean)
    norm = np.zeros(times.shape)
    n1 = np.zeros(times.shape)
    total = np.zeros(times.shape)
    q = np.zeros(times.shape, dtype=complex)
    for sector in range(lo, hi + 1):
        weight = poisson.pmf(sector, mean)
        if weight == 0.0:
            continue
        coeffs = number_state_coefficients(direction, sector) if sector > 0 else np.ones(1, dtype=complex)
        prop = SectorPropagator(build_sector_hamiltonian(params, sector), solver)
        for sl, block in prop.on_grid(coeffs, times):
            s_norm, s_n1, s_q = sector_observables(block, sector)
            norm[sl] += weight * s_norm
            n1[sl] += weight * s_n1
            total[sl] += weight * sector * s_norm
            q[sl] += weight * s_q
    return TrajectorySeries(times, {
        "rho1": n1 / mean,
        "n12_over_N": (2.0 * n1 - total) / mean,
        "q": q / mean,
        "norm": norm,
    })


def _coherent_one_site(params, lam, grid, lo, hi):
    eps = params.hopping[0, 0]
    u = params.interaction_u
    n = np.arange(lo, hi + 1, dtype=float)
    mean = abs(lam) ** 2
    energies = eps * n + u * n * (n - 1)
    log_mod = -0.5 * mean + n * math.log(abs(lam)) - 0.5 * gammaln(n + 1)
    c0 = np.exp(log_mod + 1j * n * np.angle(lam))
    times = grid.times
    a = np.empty(times.shape, dtype=complex)
    norm = np.empty(times.shape)
    occ = np.empty(times.shape)
    root = np.sqrt(n[:-1] + 1)
    for start in range(0, len(times), _TIME_CHUNK):
        ts = times[start:start + _TIME_CHUNK]
        c = c0[:, None] * np.exp(-1j * np.outer(energies, ts))
        sl = slice(start, start + len(ts))
        # (psi, a psi) = sum_n sqrt(n+1) c_n conj(c_{n+1})
        a[sl] = root @ (c[:-1] * np.conj(c[1:]))
        prob = np.abs(c) ** 2
        norm[sl] = prob.sum(axis=0)
        occ[sl] = n @ prob
    return TrajectorySeries(times, {"a": a, "n_over_N": occ / mean, "norm": norm})


def zero_d_closed_form(lam: complex, eps: float, u: float, t):
    """conj(lam) e^{i eps t} exp(-(1 - e^{2iut}) |lam|^2)."""
    t = np.asarray(t, dtype=float)
    mod2 = abs(lam) ** 2
    return np.conj(lam) * np.exp(1j * eps * t) * np.exp(-(1.0 - np.exp(2j * u * t)) * mod2)


def zero_d_truncated_sum(lam: complex, eps: float, u: float, t, terms: int, tail: float = 1e-14):
    """Direct series sum_n e^{it(eps + 2un)} |lam|^{2n}/n! conj(lam) e^{-|lam|^2}."""
    mod2 = abs(lam) ** 2
    lost = float(poisson.sf(terms - 1, mod2)) if mod2 > 0 else 0.0
    if lost > tail:
        raise ValueError(f"{terms} terms leave Poisson tail {lost:.3e} > {tail:.0e}")
    t = np.asarray(t, dtype=float)
    if mod2 == 0:
        return np.zeros(t.shape, dtype=complex)
    n = np.arange(terms, dtype=float)
    weights = np.exp(n * math.log(mod2) - gammaln(n + 1) - mod2)
    phases = np.exp(1j * np.multiply.outer(t, eps + 2.0 * u * n))
    return np.conj(lam) * (phases @ weights)
