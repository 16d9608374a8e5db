import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import comb

from kerr_esqpt import (
    ModelParams,
    coherent_state,
    default_grid,
    husimi_entropy,
    husimi_eval,
    m2_exact,
    m2_quadrature,
)


def fock(n, dim=48):
    v = np.zeros(dim, dtype=complex)
    v[n] = 1.0
    return v


def test_m2_fock_state_closed_form():
    """Frozen oracle: M2(|n>) = binom(2n, n) / 4^n."""
    expected = [comb(2 * n, n, exact=True) / 4**n for n in range(6)]
    assert expected[:3] == [1.0, 0.5, 0.375]  # sanity-pin the table itself
    for n, ref in enumerate(expected):
        assert abs(m2_exact(fock(n)) - ref / 2.0) < 1e-14


def test_m2_vacuum_and_coherent_are_half():
    params = ModelParams(xi=1.0, dim_N=80)
    assert abs(m2_exact(fock(0)) - 0.5) < 1e-15
    for q, p in ((0.7, 0.0), (-1.3, 2.1), (3.0, -3.0)):
        psi = coherent_state(q, p, params)
        assert abs(m2_exact(psi) - 0.5) < 1e-12


def test_m2_bounded_by_coherent_value():
    """Random normalized states: 0 < M2 <= 1/2 (coherent states maximize)."""
    rng = np.random.default_rng(7)
    for dim in (4, 16, 60):
        for _ in range(5):
            psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
            psi /= np.linalg.norm(psi)
            m2 = m2_exact(psi)
            assert 0.0 < m2 <= 0.5 + 1e-12


def test_m2_phase_invariance():
    rng = np.random.default_rng(3)
    psi = rng.normal(size=12) + 1j * rng.normal(size=12)
    psi /= np.linalg.norm(psi)
    assert abs(m2_exact(psi) - m2_exact(np.exp(1.7j) * psi)) < 1e-14


def test_m2_quadrature_agrees_on_small_states():
    rng = np.random.default_rng(19)
    for _ in range(3):
        psi = rng.normal(size=10) + 1j * rng.normal(size=10)
        psi /= np.linalg.norm(psi)
        psi = np.concatenate([psi, np.zeros(6)])
        assert abs(m2_exact(psi) - m2_quadrature(psi)) < 1e-7


def test_m2_large_amplitude_stability():
    # nbar ~ 312: the closed form must stay in the log domain
    params = ModelParams(xi=1.0, dim_N=900)
    psi = coherent_state(25.0, 0.0, params)
    m2 = m2_exact(psi)
    assert math.isfinite(m2)
    assert abs(m2 - 0.5) < 1e-9


def test_m2_quadrature_guards():
    psi = fock(0, dim=8)
    with pytest.raises(ValueError):
        m2_quadrature(psi, spacing=0.6)  # too coarse for the Gaussian core
    # a grid that clips the state must be rejected by the mass check
    q = np.linspace(-0.3, 0.3, 5)
    with pytest.raises(ValueError):
        m2_quadrature(fock(3, dim=8), q=q, p=q)


def test_husimi_entropy_is_minus_log_m2():
    assert abs(husimi_entropy(fock(0)) - math.log(2.0)) < 1e-14
    psi = fock(2)
    assert abs(husimi_entropy(psi) + math.log(m2_exact(psi))) < 1e-14


def test_husimi_peaks_on_the_coherent_center():
    params = ModelParams(xi=1.0, dim_N=120)
    q0, p0 = 2.0, -1.0
    psi = coherent_state(q0, p0, params)
    q = np.linspace(-6, 6, 121)
    p = np.linspace(-6, 6, 121)
    grid = husimi_eval(psi, q, p)
    i, j = np.unravel_index(np.argmax(grid.values), grid.values.shape)
    assert abs(q[i] - q0) <= grid.dq
    assert abs(p[j] - p0) <= grid.dp
    # peak height of a coherent state is n_eff / (2 pi)
    assert abs(grid.values[i, j] - 1.0 / (2 * math.pi)) < 1e-3
    assert abs(grid.riemann_mass - 1.0) < 1e-4
    assert not grid.coarse


def test_husimi_mass_with_default_grid():
    params = ModelParams(xi=1.0, dim_N=160)
    psi = coherent_state(3.5, 1.5, params)
    q, p = default_grid(psi)
    grid = husimi_eval(psi, q, p)
    assert abs(grid.riemann_mass - 1.0) < 1e-8


def test_husimi_parity_symmetry_of_cat_like_state():
    # an even-parity superposition has a symmetric Husimi function
    params = ModelParams(xi=1.0, dim_N=100)
    plus = coherent_state(2.2, 0.0, params)
    minus = coherent_state(-2.2, 0.0, params)
    cat = plus + minus
    cat = cat / np.linalg.norm(cat)
    q = np.linspace(-5, 5, 81)
    grid = husimi_eval(cat, q, q)
    assert_allclose(grid.values, grid.values[::-1, ::-1], atol=1e-12)


def test_husimi_eval_input_validation():
    with pytest.raises(ValueError):
        husimi_eval(fock(0), np.array([0.0]), np.array([0.0, 1.0]))


def test_coarse_flag():
    q = np.linspace(-4, 4, 9)  # spacing 1.0
    grid = husimi_eval(fock(0), q, q)
    assert grid.coarse
