import cmath
import math

import numpy as np
import pytest

from bosehub.fresnel import (FresnelConvergenceError, FresnelKernelSpec, TrotterStep0D, fresnel_1d,
                             fresnel_integral, fresnel_kernel, kernel_semigroup_check, martingale_check_0d,
                             neville_at_zero, trotter_step_0d)

STEP = TrotterStep0D(0.01, 1.0, 1.0)


@pytest.mark.parametrize("lam", [0, 1, 2j, 0.5 + 0.3j, -1.5])
def test_fresnel_identity(lam):
    assert abs(fresnel_1d(lam) - cmath.exp(-0.5j * lam * lam)) < 1e-6


@pytest.mark.parametrize("lam", [0.7, 0.4 - 0.9j])
def test_conjugate_measure(lam):
    # dF-bar of e^{-i lam phi} is the conjugate of dF applied to e^{+i conj(lam) phi}
    bar = fresnel_1d(lam, FresnelKernelSpec(sign=-1))
    assert abs(bar - np.conj(fresnel_1d(-np.conj(lam)))) < 1e-6
    assert abs(bar - cmath.exp(0.5j * lam * lam)) < 1e-6


def test_regulator_halving_is_stable():
    a = fresnel_integral(1.0)
    b = fresnel_integral(1.0, FresnelKernelSpec(regulator_epsilon=0.25))
    assert abs(a.value - b.value) < max(a.error, b.error, 1e-9) * 10


def test_trotter_step_values():
    assert trotter_step_0d(0, STEP) == pytest.approx(1.0, abs=1e-9)
    for n in range(1, 5):
        assert abs(trotter_step_0d(n, STEP) - 1.0) < 1e-6


def test_trotter_step_limits():
    with pytest.raises(ValueError):
        trotter_step_0d(9, STEP)
    with pytest.raises(ValueError):
        trotter_step_0d(1, STEP, FresnelKernelSpec(sign=-1))
    with pytest.raises(ValueError):
        TrotterStep0D(0.0, 1.0, 1.0)


def test_martingale_values():
    # m=0 is pure normalization; what remains is 2D quadrature error
    assert abs(martingale_check_0d(0, STEP) - 1.0) < 1e-7
    assert abs(martingale_check_0d(1, STEP) - 1.0) < 1e-6
    assert abs(martingale_check_0d(2, STEP) - 1.0) < 1e-5


def test_kernel_semigroup():
    t, s, x, z = 0.7, 1.3, 0.4, -0.9
    assert abs(kernel_semigroup_check(t, s, x, z) - fresnel_kernel(t + s, x, z)) < 1e-6


def test_impossible_tolerance_reported():
    with pytest.raises(FresnelConvergenceError):
        fresnel_integral(1.0, FresnelKernelSpec(tol=1e-18))


def test_spec_validation():
    with pytest.raises(ValueError):
        FresnelKernelSpec(sign=0)
    with pytest.raises(ValueError):
        FresnelKernelSpec(regulator_epsilon=-1)
    with pytest.raises(ValueError):
        FresnelKernelSpec(domain_cutoff=1.0).cutoff(0.1)


def test_neville_recovers_polynomial():
    x = np.array([1.0, 0.5, 0.25, 0.125, 0.0625])
    value, err = neville_at_zero(x, 3 - 2 * x + x ** 3)
    assert value == pytest.approx(3.0, abs=1e-13) and err < 1e-12
