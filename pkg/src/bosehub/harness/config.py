"""Declarative experiment configuration (JSON), strictly validated."""
from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field

ENGINES = ("ed", "gp", "pendulum", "double_well", "revival", "envelope", "zero_d")
FORMATS = ("csv", "json")

_TOP_KEYS = {"name", "model", "state", "grid", "engines", "output", "sweep", "options", "tolerances"}
_MODEL_KEYS = {"eps", "hopping", "u", "g"}
_STATE_KEYS = {"kind", "lam", "n_total"}
_GRID_KEYS = {"t_max", "dt"}
_OUTPUT_KEYS = {"path", "format"}
_SWEEP_KEYS = {"g", "n_total"}
_OPTION_KEYS = {"substeps", "solver", "revival_variant", "finite_n_drift", "workers", "truncation"}


class ConfigError(ValueError):
    pass


def _reject_unknown(section: str, given: dict, allowed: set):
    if not isinstance(given, dict):
        raise ConfigError(f"{section} must be a mapping")
    extra = sorted(set(given) - allowed)
    if extra:
        raise ConfigError(f"unknown key(s) in {section}: {', '.join(extra)}")


def _number(section, key, value, positive=False, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{section}.{key} must be a finite number")
    if integer and int(value) != value:
        raise ConfigError(f"{section}.{key} must be an integer")
    if positive and value <= 0:
        raise ConfigError(f"{section}.{key} must be > 0")
    return int(value) if integer else float(value)


def _complex(value):
    # complex entries are written as [re, im]
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    raise ConfigError(f"cannot read {value!r} as a complex number; use a number or [re, im]")


@dataclass
class ExperimentConfig:
    name: str
    model: dict
    state: dict
    grid: dict
    engines: list[str]
    output: dict = field(default_factory=lambda: {"path": "out", "format": "csv"})
    sweep: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        raw = copy.deepcopy(raw)
        _reject_unknown("config", raw, _TOP_KEYS)
        for key in ("model", "state", "grid", "engines"):
            if key not in raw:
                raise ConfigError(f"missing required key {key!r}")
        cfg = cls(
            name=str(raw.get("name", "experiment")),
            model=raw["model"],
            state=raw["state"],
            grid=raw["grid"],
            engines=raw["engines"],
            output=raw.get("output", {"path": "out", "format": "csv"}),
            sweep=raw.get("sweep", {}),
            options=raw.get("options", {}),
            tolerances=raw.get("tolerances", {}),
        )
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
        return cls.from_dict(raw)

    def to_dict(self) -> dict:
        return {
            "name": self.name, "model": self.model, "state": self.state, "grid": self.grid,
            "engines": self.engines, "output": self.output, "sweep": self.sweep,
            "options": self.options, "tolerances": self.tolerances,
        }

    def validate(self) -> None:
        _reject_unknown("model", self.model, _MODEL_KEYS)
        if ("eps" in self.model) == ("hopping" in self.model):
            raise ConfigError("model needs exactly one of eps (two sites) or hopping (matrix)")
        if "eps" in self.model:
            _number("model", "eps", self.model["eps"])
        else:
            hop = self.model["hopping"]
            if not (isinstance(hop, list) and hop and all(isinstance(r, list) and len(r) == len(hop) for r in hop)):
                raise ConfigError("model.hopping must be a square list of lists")
            for row in hop:
                for x in row:
                    _number("model", "hopping", x)
        if "u" in self.model and "g" in self.model:
            raise ConfigError("model takes u or g, not both")
        if "u" not in self.model and "g" not in self.model and "g" not in self.sweep:
            raise ConfigError("model needs u or g (or a g sweep)")
        if "u" in self.model and "g" in self.sweep:
            raise ConfigError("a g sweep conflicts with a fixed model.u")
        for key in ("u", "g"):
            if key in self.model:
                _number("model", key, self.model[key])

        _reject_unknown("state", self.state, _STATE_KEYS)
        if self.state.get("kind") not in ("coherent", "number"):
            raise ConfigError("state.kind must be 'coherent' or 'number'")
        if "lam" not in self.state or not isinstance(self.state["lam"], list) or not self.state["lam"]:
            raise ConfigError("state.lam must be a non-empty list")
        lam = [_complex(x) for x in self.state["lam"]]
        if all(x == 0 for x in lam):
            raise ConfigError("state.lam is zero")
        if self.state["kind"] == "number":
            if "n_total" not in self.state and "n_total" not in self.sweep:
                raise ConfigError("number state needs n_total")
            if "n_total" in self.state:
                _number("state", "n_total", self.state["n_total"], positive=True, integer=True)
        elif "n_total" in self.state:
            raise ConfigError("coherent state takes its particle number from |lam|^2; drop n_total")
        if len(lam) != self.sites:
            raise ConfigError(f"state.lam has {len(lam)} entries for a {self.sites}-site model")

        _reject_unknown("grid", self.grid, _GRID_KEYS)
        for key in ("t_max", "dt"):
            if key not in self.grid:
                raise ConfigError(f"grid.{key} is required")
        _number("grid", "t_max", self.grid["t_max"])
        _number("grid", "dt", self.grid["dt"], positive=True)
        if self.grid["t_max"] < 0:
            raise ConfigError("grid.t_max must be >= 0")

        if not isinstance(self.engines, list) or not self.engines:
            raise ConfigError("engines must be a non-empty list")
        bad = [e for e in self.engines if e not in ENGINES]
        if bad:
            raise ConfigError(f"unknown engine(s) {bad}; choose from {list(ENGINES)}")
        if len(set(self.engines)) != len(self.engines):
            raise ConfigError("engines contains duplicates")

        _reject_unknown("output", self.output, _OUTPUT_KEYS)
        if self.output.get("format", "csv") not in FORMATS:
            raise ConfigError(f"output.format must be one of {FORMATS}")
        if not isinstance(self.output.get("path", "out"), str):
            raise ConfigError("output.path must be a string")

        _reject_unknown("sweep", self.sweep, _SWEEP_KEYS)
        for key, values in self.sweep.items():
            if not isinstance(values, list) or not values:
                raise ConfigError(f"sweep.{key} must be a non-empty list")
            for v in values:
                _number("sweep", key, v, positive=True, integer=(key == "n_total"))
        if "n_total" in self.sweep and self.state["kind"] != "number":
            raise ConfigError("sweeping n_total needs a number state")

        _reject_unknown("options", self.options, _OPTION_KEYS)
        if "substeps" in self.options:
            _number("options", "substeps", self.options["substeps"], positive=True, integer=True)
        if "workers" in self.options:
            _number("options", "workers", self.options["workers"], positive=True, integer=True)
        if self.options.get("solver", "auto") not in ("auto", "eig", "chebyshev"):
            raise ConfigError("options.solver must be auto, eig or chebyshev")
        if self.options.get("revival_variant", "averaged") not in ("averaged", "phase"):
            raise ConfigError("options.revival_variant must be averaged or phase")

        if not isinstance(self.tolerances, dict):
            raise ConfigError("tolerances must map observable names to numbers")
        for key, value in self.tolerances.items():
            _number("tolerances", key, value, positive=True)

    @property
    def sites(self) -> int:
        return 2 if "eps" in self.model else len(self.model["hopping"])

    def lam(self) -> list[complex]:
        return [_complex(x) for x in self.state["lam"]]

    def points(self) -> list[dict]:
        """Sweep points as {'g': ..., 'n_total': ...} overrides, in file order."""
        gs = self.sweep.get("g", [None])
        ns = self.sweep.get("n_total", [None])
        out = []
        for n in ns:
            for g in gs:
                point = {}
                if g is not None:
                    point["g"] = float(g)
                if n is not None:
                    point["n_total"] = int(n)
                out.append(point)
        return out
