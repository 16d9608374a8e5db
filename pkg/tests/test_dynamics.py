import math

import numpy as np
import pytest
import scipy.linalg
from numpy.testing import assert_allclose

from kerr_esqpt import (
    PRESET_POINTS,
    ModelParams,
    build_hamiltonian,
    coherent_state,
    default_time_grid,
    diagonalize,
    ehrenfest_prediction,
    ehrenfest_time,
    energy_distribution,
    evolve,
    expectation_series,
    fit_growth_rate,
    fotoc,
    husimi_entropy_series,
    ladder_matrices,
    long_time_average,
    m2_exact,
    norm_series,
    parity_series,
    preset_state,
    short_time_coefficients,
    survival_probability,
    TimeSeries,
)


def small_setup(xi=3.0, dim=40):
    params = ModelParams(xi=xi, dim_N=dim)
    dec = diagonalize(params)
    return params, dec


def test_evolve_matches_expm_oracle():
    params, dec = small_setup()
    H = build_hamiltonian(params)
    psi0 = coherent_state(0.9, -0.4, params)
    times = np.array([0.0, 0.013, 0.21, 0.8])
    ev = evolve(psi0, dec, times)
    for j, t in enumerate(times):
        ref = scipy.linalg.expm(-1j * H * t) @ psi0
        assert np.linalg.norm(ev.psi[:, j] - ref) < 1e-10


def test_survival_two_routes_agree():
    params, dec = small_setup()
    psi0 = preset_state("O", params)
    times = np.linspace(0.0, 0.5, 60)
    ev = evolve(psi0, dec, times)
    sp = survival_probability(ev)
    direct = np.abs(np.einsum("i,it->t", psi0.conj(), ev.psi)) ** 2
    assert_allclose(sp.values, direct, atol=1e-12)
    assert sp.values[0] == pytest.approx(1.0, abs=1e-12)


def test_preset_points_frozen():
    assert PRESET_POINTS["O"] == (0.0, 0.0)
    assert PRESET_POINTS["A"] == (16.9143, 0.0)
    assert PRESET_POINTS["B"] == (1.2533, 0.0)
    assert PRESET_POINTS["C"] == (0.0, 1.2506)
    assert PRESET_POINTS["D"] == (0.0, 8.4443)
    assert PRESET_POINTS["E"] == (28.1302, 0.0)
    with pytest.raises(ValueError):
        preset_state("Z", ModelParams(xi=1.0, dim_N=20))


def test_default_time_grid_shape():
    t = default_time_grid(kerr_K=2.0, t_max=0.15, samples=500)
    assert t[0] == 0.0
    assert t[-1] == pytest.approx(0.075)
    assert np.all(np.diff(t) > 0)
    # the log prefix fills in the short-time decade
    assert np.count_nonzero((t > 0) & (t < 1e-4)) > 50


def test_expectation_series_matches_loop():
    params, dec = small_setup()
    ops = ladder_matrices(params)
    psi0 = coherent_state(1.1, 0.3, params)
    ev = evolve(psi0, dec, np.linspace(0, 0.3, 7))
    series = expectation_series(ev, ops.n_op)
    for j in range(7):
        col = ev.psi[:, j]
        assert series[j] == pytest.approx((col.conj() @ ops.n_op @ col).real, abs=1e-12)


def test_fotoc_initial_value_is_one():
    params, dec = small_setup(xi=5.0, dim=60)
    ops = ladder_matrices(params)
    ev = evolve(preset_state("O", params), dec, np.array([0.0, 1e-4]))
    f = fotoc(ev, ops)
    # coherent state: var q = var p = 1/2 in these units
    assert f.values[0] == pytest.approx(1.0, abs=1e-10)


def test_energy_distribution_moments():
    params, dec = small_setup(xi=6.0, dim=80)
    H = build_hamiltonian(params)
    psi0 = preset_state("O", params)
    d = energy_distribution(psi0, dec)
    assert d.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert d.mean == pytest.approx((psi0.conj() @ H @ psi0).real, abs=1e-9)
    # vacuum quench: Gamma = sqrt(2) K xi exactly
    assert d.gamma == pytest.approx(math.sqrt(2.0) * params.kerr_K * params.xi, rel=1e-12)


def test_short_time_coefficients_synthetic():
    params = ModelParams(xi=10.0, dim_N=16)
    t = np.linspace(0, 0.01, 400)
    sp = TimeSeries(times=t, values=1.0 - 2.0 * params.xi**2 * t**2)
    fit = short_time_coefficients(sp, "survival", params)
    assert fit.coefficient == pytest.approx(2.0 * params.xi**2, rel=1e-12)
    assert fit.relative_deviation < 1e-12
    fo = TimeSeries(times=t, values=1.0 + 8.0 * params.xi**2 * t**2)
    fit2 = short_time_coefficients(fo, "fotoc", params)
    assert fit2.coefficient == pytest.approx(8.0 * params.xi**2, rel=1e-12)
    with pytest.raises(ValueError):
        short_time_coefficients(
            TimeSeries(times=np.array([0.0, 1.0]), values=np.array([1.0, 0.5])),
            "survival",
            params,
        )
    with pytest.raises(ValueError):
        short_time_coefficients(sp, "sideways", params)


def test_ehrenfest_time_interior_and_edges():
    t = np.linspace(0, 1, 11)
    bump = TimeSeries(times=t, values=np.exp(-((t - 0.4) ** 2) / 0.02))
    assert ehrenfest_time(bump) == pytest.approx(0.4)
    rising = TimeSeries(times=t, values=t)
    with pytest.raises(ValueError):
        ehrenfest_time(rising)


def test_ehrenfest_prediction_value():
    params = ModelParams(xi=180.0, dim_N=16)
    assert ehrenfest_prediction(params) == pytest.approx(
        math.log(180.0) / 360.0 - 0.0027, rel=1e-12
    )


def test_fit_growth_rate_synthetic():
    t = np.linspace(0.1, 0.5, 40)
    y = 3.0 * np.exp(4.2 * t)
    fit = fit_growth_rate(TimeSeries(times=t, values=y), 0.1, 0.5)
    assert fit.rate == pytest.approx(4.2, rel=1e-10)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        fit_growth_rate(TimeSeries(times=t, values=-y), 0.1, 0.5)
    with pytest.raises(ValueError):
        fit_growth_rate(TimeSeries(times=t, values=y), 10.0, 11.0)
    logged = fit_growth_rate(
        TimeSeries(times=t, values=np.log(y)), 0.1, 0.5, log_already=True
    )
    assert logged.rate == pytest.approx(4.2, rel=1e-10)


def test_long_time_average():
    t = np.linspace(0, 10, 101)
    s = TimeSeries(times=t, values=np.where(t < 5, 0.0, 2.0))
    assert long_time_average(s, 6.0, 9.0) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        long_time_average(s, 9.0, 6.0)
    with pytest.raises(ValueError):
        long_time_average(s, 10.5, 11.0)


def test_husimi_entropy_series_matches_direct():
    params, dec = small_setup(xi=2.0, dim=36)
    ev = evolve(preset_state("O", params), dec, np.linspace(0, 0.4, 9))
    sub = np.array([0, 4, 8])
    series = husimi_entropy_series(ev, indices=sub)
    assert_allclose(series.times, ev.times[sub])
    for k, j in enumerate(sub):
        assert series.values[k] == pytest.approx(
            -math.log(m2_exact(ev.psi[:, j])), abs=1e-12
        )
    assert series.values[0] == pytest.approx(math.log(2.0), abs=1e-12)


def test_norm_and_parity_conserved():
    params, dec = small_setup(xi=4.0, dim=50)
    psi0 = coherent_state(1.0, 0.5, params)
    ev = evolve(psi0, dec, np.linspace(0, 1.0, 30))
    assert np.max(np.abs(norm_series(ev) - 1.0)) < 1e-12
    par = parity_series(ev)
    assert np.max(np.abs(par - par[0])) < 1e-12


def test_evolve_input_validation():
    params, dec = small_setup(dim=30)
    psi0 = preset_state("O", params)
    with pytest.raises(ValueError):
        evolve(psi0, dec, np.array([0.3, 0.1]))
    with pytest.raises(ValueError):
        evolve(psi0, dec, np.array([-0.1, 0.2]))
    with pytest.raises(ValueError):
        evolve(psi0, dec, np.array([]))
    with pytest.raises(ValueError):
        evolve(psi0[:-1], dec, np.array([0.0]))
