"""Dispatch engines for each sweep point, write series, compare engines."""
from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..exact import evolve_coherent_state, evolve_number_state, zero_d_closed_form
from ..gp import DriftMode, integrate_gp
from ..model import ModelParams, TimeGrid, TrajectorySeries
from ..revival import RevivalParams, approx_small_g_solution, collapse_envelope, integrate_revival
from ..twosite import classify_regime, double_well_integrate, pendulum_integrate
from .config import ExperimentConfig

OUTPUT_ENV = "BOSEHUB_OUTPUT_DIR"
# bookkeeping columns that are not physics comparisons
_NOT_COMPARED = {"norm", "energy"}


@dataclass
class PointSetup:
    hopping: np.ndarray
    kind: str
    lam: np.ndarray
    n_total: float
    u: float
    g: float
    grid: TimeGrid
    options: dict

    @property
    def label(self) -> str:
        return f"g{self.g:g}_N{self.n_total:g}"

    def two_site_eps(self) -> float:
        h = self.hopping
        if h.shape != (2, 2) or h[0, 0] != 0 or h[1, 1] != 0:
            raise ValueError("engine needs a two-site model with zero on-site energies")
        return float(h[0, 1])

    def require_site_one(self):
        if self.lam[1] != 0:
            raise ValueError("engine needs every particle on site 1 at t=0 (lam = (x, 0))")


@dataclass
class PointResult:
    setup: dict
    regime: str | None
    series: dict[str, TrajectorySeries] = field(default_factory=dict)
    failures: dict[str, str] = field(default_factory=dict)
    files: dict[str, str] = field(default_factory=dict)
    comparisons: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and all(c["passed"] is not False for c in self.comparisons)

    def to_dict(self) -> dict:
        engines = {name: {"status": "ok", "file": self.files.get(name)} for name in self.series}
        engines.update({name: {"status": "failed", "error": msg} for name, msg in self.failures.items()})
        return {
            "point": self.setup,
            "regime": self.regime,
            "engines": dict(sorted(engines.items())),
            "comparisons": self.comparisons,
            "passed": self.passed,
        }


@dataclass
class ComparisonReport:
    name: str
    points: list[PointResult]

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.points)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "points": [p.to_dict() for p in self.points]}


def _setup(cfg: ExperimentConfig, point: dict) -> PointSetup:
    model = cfg.model
    if "eps" in model:
        eps = float(model["eps"])
        hopping = np.array([[0.0, eps], [eps, 0.0]])
    else:
        hopping = np.array(model["hopping"], dtype=float)
    lam = np.array(cfg.lam(), dtype=complex)
    kind = cfg.state["kind"]
    if kind == "number":
        n_total = float(point.get("n_total", cfg.state.get("n_total")))
        lam = lam * math.sqrt(n_total / float(np.sum(np.abs(lam) ** 2)))
    else:
        n_total = float(np.sum(np.abs(lam) ** 2))
    if "g" in point or "g" in model:
        g = float(point.get("g", model.get("g")))
        u = g / n_total
    else:
        u = float(model["u"])
        g = u * n_total
    grid = TimeGrid(float(cfg.grid["t_max"]), float(cfg.grid["dt"]))
    return PointSetup(hopping, kind, lam, n_total, u, g, grid, dict(cfg.options))


def _params(s: PointSetup) -> ModelParams:
    if s.kind == "number":
        return ModelParams(s.hopping, s.u, s.u * int(s.n_total), int(s.n_total))
    return ModelParams(s.hopping, s.u)


def _run_engine(engine: str, s: PointSetup) -> TrajectorySeries:
    sub = int(s.options.get("substeps", 1))
    if engine == "ed":
        params = _params(s)
        if s.kind == "number":
            return evolve_number_state(params, int(s.n_total), s.lam, s.grid, s.options.get("solver", "auto"))
        return evolve_coherent_state(params, s.lam, s.grid, s.options.get("truncation"), s.options.get("solver", "auto"))
    if engine == "gp":
        # only g enters the mean-field flow; N is carried for bookkeeping
        n_int = max(2, int(round(s.n_total)))
        params = ModelParams.from_g(s.hopping, s.g, n_int)
        if s.kind == "number":
            mode = DriftMode.number(n_int, bool(s.options.get("finite_n_drift", False)))
        else:
            mode = DriftMode.coherent()
        w0 = s.lam / np.linalg.norm(s.lam)
        return integrate_gp(params, mode, w0, s.grid, sub)
    if engine == "zero_d":
        if s.hopping.shape != (1, 1):
            raise ValueError("zero_d engine needs a one-site model")
        values = zero_d_closed_form(s.lam[0], float(s.hopping[0, 0]), s.u, s.grid.times)
        return TrajectorySeries(s.grid.times, {"a": values})
    eps = s.two_site_eps()
    s.require_site_one()
    if engine == "pendulum":
        return pendulum_integrate(eps, s.g, s.grid, sub)
    if engine == "double_well":
        return double_well_integrate(eps, s.g, s.grid, sub)
    if engine == "revival":
        rp = RevivalParams(eps, s.u, s.u, s.n_total)
        return integrate_revival(rp, s.grid, sub, s.options.get("revival_variant", "averaged"))
    if engine == "envelope":
        t = s.grid.times
        return TrajectorySeries(t, {
            "envelope": collapse_envelope(s.n_total, s.u, t),
            "n12_over_N": approx_small_g_solution(s.n_total, eps, s.u, t) / s.n_total,
        })
    raise ValueError(f"unknown engine {engine!r}")


def _run_point(args) -> tuple[dict, dict]:
    cfg, point = args
    s = _setup(cfg, point)
    series, failures = {}, {}
    for engine in cfg.engines:
        try:
            series[engine] = _run_engine(engine, s)
        except Exception as exc:  # reported per engine, the rest still runs
            failures[engine] = f"{type(exc).__name__}: {exc}"
    return series, failures


def compare(series: dict[str, TrajectorySeries], tolerances: dict) -> list[dict]:
    rows = []
    for a, b in itertools.combinations(sorted(series), 2):
        sa, sb = series[a], series[b]
        if sa.times.shape != sb.times.shape:
            continue
        for name in sorted(set(sa.names) & set(sb.names) - _NOT_COMPARED):
            diff = sa[name] - sb[name]
            sup = float(np.max(np.abs(diff))) if diff.size else 0.0
            rms = float(np.sqrt(np.mean(diff ** 2))) if diff.size else 0.0
            tol = tolerances.get(name)
            rows.append({
                "engines": [a, b], "observable": name, "sup": sup, "rms": rms,
                "tolerance": tol, "passed": None if tol is None else bool(sup <= tol),
            })
    return rows


def output_root(cfg: ExperimentConfig, out_dir=None) -> Path:
    """Explicit out_dir wins; otherwise the env var relocates output.path."""
    if out_dir is not None:
        return Path(out_dir)
    path = Path(cfg.output.get("path", "out"))
    base = os.environ.get(OUTPUT_ENV)
    if base:
        return Path(base) / (path.name if path.is_absolute() else path)
    return path


def run_experiment(cfg: ExperimentConfig, out_dir=None, write: bool = True) -> ComparisonReport:
    points = cfg.points() or [{}]
    workers = int(cfg.options.get("workers", 1))
    jobs = [(cfg, p) for p in points]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            outcomes = list(pool.map(_run_point, jobs))
    else:
        outcomes = [_run_point(j) for j in jobs]

    root = output_root(cfg, out_dir)
    fmt = cfg.output.get("format", "csv")
    results = []
    for point, (series, failures) in zip(points, outcomes):
        s = _setup(cfg, point)
        regime = None
        if s.hopping.shape == (2, 2) and s.hopping[0, 1] > 0 and s.g > 0:
            regime = classify_regime(float(s.hopping[0, 1]), s.g).value
        setup = {"g": s.g, "u": s.u, "n_total": s.n_total, "kind": s.kind}
        res = PointResult(setup, regime, series, failures)
        res.comparisons = compare(series, cfg.tolerances)
        if write:
            root.mkdir(parents=True, exist_ok=True)
            for engine in sorted(series):
                fname = f"{cfg.name}_{s.label}_{engine}.{fmt}"
                path = root / fname
                if fmt == "csv":
                    series[engine].to_csv(path)
                else:
                    path.write_text(json.dumps(series[engine].to_dict(), sort_keys=True))
                res.files[engine] = fname
        results.append(res)
    report = ComparisonReport(cfg.name, results)
    if write:
        root.mkdir(parents=True, exist_ok=True)
        (root / f"{cfg.name}_report.json").write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return report
