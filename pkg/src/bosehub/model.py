"""Shared parameter, state, grid and trajectory types.

Conventions: ``interaction_u`` is the on-site coupling u (half the usual U),
the hopping matrix is used as given (no sign flip), and the user-facing
interaction strength is g = u * N.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np


def _frozen_array(a, dtype) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ModelParams:
    """Lattice model: symmetric hopping matrix plus on-site interaction u.

    ``g`` and ``n_total`` are optional but come as a pair; when present
    ``interaction_u * n_total == g`` up to rounding.
    """

    hopping: np.ndarray
    interaction_u: float
    g: float | None = None
    n_total: int | None = None

    def __post_init__(self):
        eps = _frozen_array(self.hopping, float)
        if eps.ndim != 2 or eps.shape[0] != eps.shape[1] or eps.shape[0] == 0:
            raise ValueError(f"hopping must be a non-empty square matrix, got shape {eps.shape}")
        if not np.all(np.isfinite(eps)):
            raise ValueError("hopping matrix has non-finite entries")
        if not np.array_equal(eps, eps.T):
            raise ValueError("hopping matrix must be exactly symmetric")
        if not math.isfinite(self.interaction_u):
            raise ValueError("interaction_u must be finite")
        object.__setattr__(self, "hopping", eps)
        object.__setattr__(self, "interaction_u", float(self.interaction_u))
        if (self.g is None) != (self.n_total is None):
            raise ValueError("g and n_total must be given together")
        if self.n_total is not None:
            if int(self.n_total) != self.n_total or self.n_total < 1:
                raise ValueError("n_total must be a positive integer")
            object.__setattr__(self, "n_total", int(self.n_total))
            object.__setattr__(self, "g", float(self.g))
            mismatch = abs(self.interaction_u * self.n_total - self.g)
            if mismatch > 4 * np.finfo(float).eps * max(abs(self.g), 1e-300):
                raise ValueError(f"u*N = {self.interaction_u * self.n_total!r} does not match g = {self.g!r}")

    @property
    def sites(self) -> int:
        return self.hopping.shape[0]

    @classmethod
    def from_g(cls, hopping, g: float, n_total: int) -> "ModelParams":
        return cls(hopping, g / n_total, g, n_total)

    def coupling(self) -> float:
        """Interaction strength g = uN; requires n_total."""
        if self.g is None:
            raise ValueError("this ModelParams carries no particle number, so g is undefined")
        return self.g


def build_two_site_params(eps: float, u: float, n_total: int | None = None) -> ModelParams:
    """Two sites, zero on-site energies, hopping eps between them."""
    if not (math.isfinite(eps) and math.isfinite(u)):
        raise ValueError("eps and u must be finite")
    hopping = [[0.0, eps], [eps, 0.0]]
    if n_total is None:
        return ModelParams(hopping, u)
    return ModelParams(hopping, u, u * n_total, n_total)


@dataclass(frozen=True)
class InitialState:
    """Coherent product state e^{lam.z} or normalized number state (lam.z)^N.

    For the coherent kind ``n_total`` is the mean particle number sum |lam|^2
    (a float); for the number kind it is the exact integer N.
    """

    kind: str
    lam: np.ndarray
    n_total: float | int | None = None

    def __post_init__(self):
        if self.kind not in ("coherent", "number"):
            raise ValueError(f"unknown state kind {self.kind!r}")
        lam = _frozen_array(np.atleast_1d(self.lam), complex)
        if lam.ndim != 1:
            raise ValueError("lam must be a vector")
        if not np.all(np.isfinite(lam)):
            raise ValueError("lam has non-finite entries")
        object.__setattr__(self, "lam", lam)

    @classmethod
    def coherent(cls, lam) -> "InitialState":
        return cls("coherent", lam)

    @classmethod
    def number(cls, lam, n_total: int) -> "InitialState":
        return cls("number", lam, n_total)

    @property
    def sites(self) -> int:
        return self.lam.shape[0]


def validate_state(state: InitialState) -> InitialState:
    """Rescale number states onto |lam|^2 = N; attach N to coherent states."""
    weight = float(np.sum(np.abs(state.lam) ** 2))
    if weight == 0.0:
        raise ValueError("lam vector is zero")
    if state.kind == "coherent":
        return InitialState("coherent", state.lam, weight)
    n = state.n_total
    if n is None or int(n) != n or n < 1:
        raise ValueError(f"number state needs a positive integer n_total, got {n!r}")
    n = int(n)
    if abs(weight - n) <= 1e-12 * n:
        return InitialState("number", state.lam, n)
    return InitialState("number", state.lam * math.sqrt(n / weight), n)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid 0, dt, 2dt, ... up to t_max (inclusive when commensurate)."""

    t_max: float
    dt: float

    def __post_init__(self):
        if not (math.isfinite(self.t_max) and self.t_max >= 0):
            raise ValueError("t_max must be finite and >= 0")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError("dt must be finite and > 0")

    @property
    def steps(self) -> int:
        return int(math.floor(self.t_max / self.dt + 1e-9))

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.steps + 1) * self.dt


@dataclass
class TrajectorySeries:
    """Time grid plus named real-valued observable columns.

    ``raw`` optionally keeps the engine's native state history.
    """

    times: np.ndarray
    columns: dict[str, np.ndarray] = field(default_factory=dict)
    raw: np.ndarray | None = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        given, self.columns = self.columns, {}
        for name, col in given.items():
            self.add(name, col)

    def add(self, name: str, values) -> None:
        values = np.asarray(values)
        if values.shape != self.times.shape:
            raise ValueError(f"column {name!r} has shape {values.shape}, expected {self.times.shape}")
        if np.iscomplexobj(values):
            self.columns[name + "_re"] = values.real.astype(float)
            self.columns[name + "_im"] = values.imag.astype(float)
        else:
            self.columns[name] = values.astype(float)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    def __contains__(self, name: str) -> bool:
        return name in self.columns

    def complex(self, name: str) -> np.ndarray:
        return self.columns[name + "_re"] + 1j * self.columns[name + "_im"]

    @property
    def names(self) -> list[str]:
        return list(self.columns)

    def to_csv(self, path) -> None:
        names = self.names
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", *names])
            for k, t in enumerate(self.times):
                writer.writerow([repr(float(t))] + [repr(float(self.columns[n][k])) for n in names])

    def to_dict(self) -> dict:
        return {"t": self.times.tolist(), **{n: c.tolist() for n, c in self.columns.items()}}
