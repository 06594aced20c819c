import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bosehub.model import (InitialState, ModelParams, TimeGrid, TrajectorySeries,
                           build_two_site_params, validate_state)

finite = st.floats(-10, 10, allow_nan=False)


def test_two_site_params_layout():
    p = build_two_site_params(1.0, 0.002)
    assert np.array_equal(p.hopping, [[0.0, 1.0], [1.0, 0.0]])
    assert p.interaction_u == 0.002
    assert p.sites == 2


def test_free_noninteracting_is_zero():
    p = build_two_site_params(0.0, 0.0)
    assert not p.hopping.any() and p.interaction_u == 0.0


def test_g_recovered_from_u_and_n():
    p = build_two_site_params(1.0, 0.1 / 50, 50)
    assert p.g == pytest.approx(0.1, rel=1e-15)
    assert p.n_total == 50


@pytest.mark.parametrize("eps,u", [(math.inf, 0.1), (1.0, math.nan)])
def test_non_finite_rejected(eps, u):
    with pytest.raises(ValueError):
        build_two_site_params(eps, u)


def test_asymmetric_hopping_rejected():
    with pytest.raises(ValueError):
        ModelParams([[0.0, 1.0], [1.0 + 1e-15, 0.0]], 0.1)


def test_inconsistent_g_rejected():
    with pytest.raises(ValueError):
        ModelParams([[0.0, 1.0], [1.0, 0.0]], 0.01, g=0.5, n_total=10)


def test_hopping_is_read_only():
    p = build_two_site_params(1.0, 0.1)
    with pytest.raises(ValueError):
        p.hopping[0, 1] = 3.0


@given(finite, finite, st.integers(1, 10_000))
def test_params_rebuild_is_bitwise_idempotent(eps, g, n):
    p = ModelParams.from_g([[0.0, eps], [eps, 0.0]], g, n)
    q = ModelParams(p.hopping, p.interaction_u, p.g, p.n_total)
    assert np.array_equal(p.hopping, q.hopping)
    assert (p.interaction_u, p.g, p.n_total) == (q.interaction_u, q.g, q.n_total)
    assert np.array_equal(p.hopping, p.hopping.T)


@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=5), st.integers(1, 500))
def test_number_state_normalized(parts, n):
    lam = [complex(a, b) for a, b in parts]
    if sum(abs(x) ** 2 for x in lam) < 1e-6:
        return
    s = validate_state(InitialState.number(lam, n))
    assert np.sum(np.abs(s.lam) ** 2) == pytest.approx(n, rel=1e-12)


def test_number_state_examples():
    s = validate_state(InitialState.number([1.0, 0.0], 50))
    assert s.lam[0] == pytest.approx(math.sqrt(50))
    s = validate_state(InitialState.number([1.0, 1.0], 2))
    assert np.array_equal(s.lam, [1.0, 1.0])


def test_coherent_state_gets_particle_number():
    s = validate_state(InitialState.coherent([math.sqrt(20)]))
    assert s.n_total == pytest.approx(20)


@pytest.mark.parametrize("state", [
    lambda: InitialState.coherent([0.0, 0.0]),
    lambda: InitialState.number([1.0, 0.0], 0),
])
def test_bad_states_rejected(state):
    with pytest.raises(ValueError):
        validate_state(state())


def test_time_grid():
    g = TimeGrid(1.0, 0.1)
    assert g.steps == 10
    assert g.times[0] == 0.0
    assert np.allclose(np.diff(g.times), 0.1)


def test_series_splits_complex_columns(tmp_path):
    t = np.linspace(0, 1, 3)
    s = TrajectorySeries(t, {"q": np.array([1j, 2, 3 + 1j]), "rho1": np.ones(3)})
    assert s.names == ["q_re", "q_im", "rho1"]
    assert np.array_equal(s.complex("q"), [1j, 2, 3 + 1j])
    path = tmp_path / "x.csv"
    s.to_csv(path)
    assert path.read_text().splitlines()[0] == "t,q_re,q_im,rho1"
