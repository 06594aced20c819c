"""Figure presets at desk scale; ``full=True`` restores the large particle numbers.

Each preset's ``about`` line lists its parameters and time horizon.
"""
from __future__ import annotations

import math

from .config import ExperimentConfig

_PRESETS = {}


def _preset(name, about):
    def wrap(fn):
        _PRESETS[name] = (fn, about)
        return fn
    return wrap


@_preset("fig-4", "one site, eps=2, g=0.5, N=|lam|^2=20 coherent; t in [0, 3 pi/u]; ED vs closed form")
def _fig4(full):
    n = 20
    u = 0.5 / n
    return {
        "name": "fig-4",
        "model": {"hopping": [[2.0]], "g": 0.5},
        "state": {"kind": "coherent", "lam": [math.sqrt(n)]},
        "grid": {"t_max": 3 * math.pi / u, "dt": 0.02},
        "engines": ["ed", "zero_d"],
        "tolerances": {"a_re": 1e-9, "a_im": 1e-9},
    }


def _large_n(name, gs, full):
    return {
        "name": name,
        "model": {"eps": 1.0},
        "state": {"kind": "number", "lam": [1.0, 0.0]},
        "grid": {"t_max": 10.0, "dt": 0.01},
        "engines": ["ed", "pendulum", "gp"],
        "sweep": {"g": gs, "n_total": [2500, 5000, 10000, 20000] if full else [400, 1600]},
        "options": {"substeps": 4, "workers": 4},
    }


@_preset("fig-5.1.1", "eps=1, g in {0.5, 1.0, 1.8}, number state on site 1; t in [0, 10]; N in {400, 1600} (full: 2500..20000)")
def _fig511(full):
    return _large_n("fig-5.1.1", [0.5, 1.0, 1.8], full)


@_preset("fig-5.1.2", "eps=1, g in {2.2, 3.0, 6.0} (self-trapped side); t in [0, 10]; N in {400, 1600} (full: 2500..20000)")
def _fig512(full):
    return _large_n("fig-5.1.2", [2.2, 3.0, 6.0], full)


def _collapse(name, gs, periods, full):
    # horizon covers the first revival of the smallest g
    u_min = min(gs) / 50
    return {
        "name": name,
        "model": {"eps": 1.0},
        "state": {"kind": "number", "lam": [1.0, 0.0], "n_total": 50},
        "grid": {"t_max": periods * math.pi / u_min, "dt": 0.02 if full else 0.05},
        "engines": ["ed", "envelope"],
        "sweep": {"g": gs},
        "options": {"workers": 4},
    }


@_preset("fig-5.3.1", "N=50, eps=1, g in {0.05, 0.1, 0.2}; t in [0, 1.2 pi/u_min]; ED vs analytic collapse factor")
def _fig531(full):
    return _collapse("fig-5.3.1", [0.05, 0.1, 0.2], 1.2, full)


@_preset("fig-5.3.2", "N=50, eps=1, g in {0.5, 1.0, 2.0}; t in [0, 1.2 pi/u_min]; ED vs analytic collapse factor")
def _fig532(full):
    return _collapse("fig-5.3.2", [0.5, 1.0, 2.0], 1.2, full)


@_preset("fig-5.3.3", "N=50, eps=1, g=0.1; t in [0, 1.1 pi/u]; ED vs envelope-stabilized moment ODE")
def _fig533(full):
    n, g = 50, 0.1
    return {
        "name": "fig-5.3.3",
        "model": {"eps": 1.0, "g": g},
        "state": {"kind": "number", "lam": [1.0, 0.0], "n_total": n},
        "grid": {"t_max": 1.1 * math.pi / (g / n), "dt": 0.01 if full else 0.02},
        "engines": ["ed", "revival", "envelope"],
    }


def preset_names() -> list[str]:
    return list(_PRESETS)


def describe(name: str) -> str:
    return _PRESETS[name][1]


def preset_config(name: str, full: bool = False) -> ExperimentConfig:
    if name not in _PRESETS:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(_PRESETS)}")
    raw = _PRESETS[name][0](full)
    raw.setdefault("output", {"path": f"out/{name}", "format": "csv"})
    return ExperimentConfig.from_dict(raw)
