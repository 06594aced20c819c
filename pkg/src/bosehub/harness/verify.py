"""Battery of identity and invariant checks with machine-readable output."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from ..exact import evolve_number_state, zero_d_closed_form, zero_d_truncated_sum
from ..fresnel import FresnelKernelSpec, TrotterStep0D, fresnel_integral, martingale_check_0d, trotter_step_0d
from ..girsanov import apply_L0, apply_Lint, check_girsanov_identity, rotation_Rt
from ..gp import DriftMode, integrate_gp
from ..model import ModelParams, TimeGrid, build_two_site_params
from ..polynomial import VPolynomial
from ..twosite import double_well_integrate, pendulum_energy, pendulum_integrate, PendulumState


@dataclass
class CheckResult:
    name: str
    observed: float
    tolerance: float
    passed: bool
    note: str = ""


def _check(name, observed, tol, note=""):
    observed = float(observed)
    return CheckResult(name, observed, tol, bool(observed <= tol), note)


def _girsanov(eps3, seed=7):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        sites = int(rng.integers(1, 4))
        a = rng.normal(size=(sites, sites))
        f = VPolynomial.random(rng, sites, 4, 5)
        worst = max(worst, check_girsanov_identity(f, int(rng.integers(1, 4)), a + a.T, float(rng.normal())))
    yield _check("girsanov_identity", worst, 1e-12)
    casimir = VPolynomial.casimir(3)
    for m in (1, 2):
        p = casimir ** m
        yield _check(f"L0_annihilates_casimir_power_{m}", apply_L0(p, eps3).max_abs_coefficient(), 1e-12,
                     "needs a symmetric hopping matrix")
        yield _check(f"Lint_annihilates_casimir_power_{m}", apply_Lint(p, 0.37).max_abs_coefficient(), 1e-12)


def _rotation():
    gap = np.max(np.abs(rotation_Rt(1.0, 0.3).matrix @ rotation_Rt(1.0, 0.7).matrix - rotation_Rt(1.0, 1.0).matrix))
    yield _check("rotation_semigroup", gap, 1e-12)


def _classical():
    grid = TimeGrid(20.0, 1e-3)
    worst = 0.0
    for g in (0.5, 1.0, 1.8, 2.2, 3.0, 6.0):
        pend = pendulum_integrate(1.0, g, grid)
        well = double_well_integrate(1.0, g, grid)
        worst = max(worst, np.max(np.abs(pend["phi_dot"] / (2 * g) - well["rho12"])))
    yield _check("pendulum_vs_cubic", worst, 1e-6)
    pend = pendulum_integrate(1.0, 1.8, grid)
    e = pendulum_energy(PendulumState(pend["phi"], pend["phi_dot"]), 1.0)
    yield _check("pendulum_energy_drift", np.max(np.abs(e - e[0])) / abs(e[0]), 1e-8)


def _conservation():
    params = build_two_site_params(1.0, 0.5 / 200, 200)
    ed = evolve_number_state(params, 200, [1.0, 0.0], TimeGrid(10.0, 0.05))
    yield _check("ed_norm", np.max(np.abs(ed["norm"] - 1.0)), 1e-9)
    gp = integrate_gp(ModelParams.from_g([[0, 1], [1, 0]], 0.5, 100), DriftMode.coherent(), [1.0, 0.0], TimeGrid(20.0, 1e-3))
    yield _check("gp_norm", np.max(np.abs(gp["norm"] - 1.0)), 1e-9)
    yield _check("gp_energy", np.max(np.abs(gp["energy"] - gp["energy"][0])), 1e-7)


def _zero_d():
    n, g, eps = 20, 0.5, 2.0
    u = g / n
    lam = math.sqrt(n)
    t = np.linspace(0.0, 3 * math.pi / u, 2001)
    gap = np.max(np.abs(zero_d_closed_form(lam, eps, u, t) - zero_d_truncated_sum(lam, eps, u, t, 120)))
    yield _check("zero_d_closed_vs_series", gap, 1e-10)


def _fresnel(quad_tol):
    # quadrature runs unconstrained; the declared tolerance is applied to the measured error
    spec = FresnelKernelSpec(tol=math.inf)
    step = TrotterStep0D(0.01, 1.0, 1.0)
    r = fresnel_integral(1.0, spec)
    gap = max(abs(r.value - complex(math.cos(0.5), -math.sin(0.5))), r.error)
    yield _check("fresnel_identity", gap, quad_tol)
    yield _check("trotter_step_n2", abs(trotter_step_0d(2, step, spec) - 1.0), quad_tol)
    spec2 = FresnelKernelSpec(levels=8, tol=math.inf)
    yield _check("martingale_m1", abs(martingale_check_0d(1, step, spec2) - 1.0), 10 * quad_tol)


def verify_suite(inject_asymmetry: bool = False, quadrature_tol: float = 1e-6, quick: bool = False) -> list[CheckResult]:
    """Run every check. ``inject_asymmetry`` perturbs the hopping matrix used for the
    L0 checks; ``quadrature_tol`` sets the Fresnel tolerance."""
    eps3 = np.array([[0.0, 1.0, 0.3], [1.0, 0.2, -0.5], [0.3, -0.5, 0.0]])
    if inject_asymmetry:
        eps3 = eps3.copy()
        eps3[0, 1] += 1e-3
    results = []
    groups = [_girsanov(eps3), _rotation(), _zero_d(), _classical(), _conservation()]
    if not quick:
        groups.append(_fresnel(quadrature_tol))
    for group in groups:
        results.extend(group)
    return results


def summary_lines(results: list[CheckResult]) -> list[str]:
    return [json.dumps(asdict(r), sort_keys=True) for r in results]
