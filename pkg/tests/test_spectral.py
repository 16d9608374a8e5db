import numpy as np
import pytest
from numpy.testing import assert_allclose

from kerr_esqpt import (
    ModelParams,
    build_hamiltonian,
    diagonalize,
    dos_histogram,
    esqpt_energy,
    fit_log_gap,
    kissing_gaps,
    locate_esqpt,
    occupation_expectation,
    participation_ratio,
)


def test_eigenvalues_match_unsplit_solver():
    """Oracle: eigh of the full matrix without exploiting parity."""
    params = ModelParams(xi=7.3, dim_N=90)
    dec = diagonalize(params)
    reference = np.linalg.eigvalsh(build_hamiltonian(params))
    scale = max(abs(reference[0]), abs(reference[-1]))
    assert_allclose(dec.eigenvalues, reference, atol=1e-11 * scale)


def test_eigenvectors_solve_the_full_problem():
    params = ModelParams(xi=12.0, dim_N=70)
    dec = diagonalize(params)
    H = build_hamiltonian(params)
    scale = np.linalg.norm(H, 2)
    for k in (0, 1, 5, 33, 69):
        v = dec.eigenvector(k)
        assert np.linalg.norm(H @ v - dec.eigenvalues[k] * v) < 1e-10 * scale


def test_parity_labels_match_support():
    dec = diagonalize(ModelParams(xi=9.0, dim_N=50))
    for k in range(50):
        v = dec.eigenvector(k)
        odd_mass = np.sum(np.abs(v[1::2]) ** 2)
        expected = 1.0 if dec.parity[k] == -1 else 0.0
        assert abs(odd_mass - expected) < 1e-12


def test_ground_doublet_energy_is_minus_K_xi_squared():
    # the two-photon drive term factorizes, pinning the ground pair exactly
    for xi, dim in ((5.0, 80), (60.0, 420), (180.0, 900)):
        params = ModelParams(xi=xi, dim_N=dim)
        dec = diagonalize(params)
        e0_expected = -params.kerr_K * xi * xi
        assert abs(dec.ground_energy / e0_expected - 1.0) < 1e-12
        assert dec.excitation_energies[0] == 0.0
        assert np.all(np.diff(dec.eigenvalues) >= -1e-9 * abs(e0_expected))


def test_lab_frame_spectrum_is_negated():
    main = diagonalize(ModelParams(xi=6.0, dim_N=60))
    lab = diagonalize(ModelParams(xi=6.0, dim_N=60,
                                  sign_convention="lab_frame"))
    assert_allclose(np.sort(lab.signed_eigenvalues()),
                    np.sort(-main.signed_eigenvalues()), atol=1e-10)
    # excitation ladder is convention-independent
    assert_allclose(lab.excitation_energies, main.excitation_energies,
                    atol=1e-9)


def test_diagonalize_is_cached():
    a = diagonalize(ModelParams(xi=3.5, dim_N=40))
    b = diagonalize(ModelParams(xi=3.5, dim_N=40))
    assert a is b


def test_esqpt_energy():
    assert esqpt_energy(ModelParams(xi=180.0, dim_N=10)) == 32400.0
    assert esqpt_energy(ModelParams(xi=3.0, dim_N=10, kerr_K=2.0)) == 18.0


def test_kissing_gaps_invariants():
    grid = np.linspace(2.0, 12.0, 21)
    series = kissing_gaps(grid, pairs=5, dim_N=160)
    assert series.gaps.shape == (5, 21)
    assert np.all(series.converged)
    # gaps are non-negative up to round-off
    assert series.gaps.min() > -1e-12
    # ground pair is degenerate throughout
    assert np.max(np.abs(series.gaps[0])) < 1e-10
    # every excited pair has closed substantially by xi = 12
    for k in range(1, 5):
        assert series.gaps[k, -1] < 0.55 * series.gaps[k, 0]


def test_log_gap_fit_in_the_exponential_window():
    """Once the gap falls below 1e-2 K xi^2 the decay is exponential:
    ln(gap) affine in xi with R^2 >= 0.98."""
    grid = np.linspace(2.0, 14.0, 49)
    series = kissing_gaps(grid, pairs=3, dim_N=180)
    for pair in (1, 2):
        fit = fit_log_gap(series, pair)
        assert fit.r_squared >= 0.98
        assert fit.slope < -0.5
    with pytest.raises(ValueError):
        fit_log_gap(series, pair=0)  # degenerate pair never enters the window


def test_kissing_rejects_bad_grid():
    with pytest.raises(ValueError):
        kissing_gaps(np.array([-1.0, 2.0]), pairs=2, dim_N=80)


def test_dos_histogram_unit_area():
    dec = diagonalize(ModelParams(xi=30.0, dim_N=220))
    hist = dos_histogram(dec, bins=24, e_range=(0.0, 1800.0))
    widths = np.diff(hist.bin_edges)
    assert abs(np.sum(hist.density * widths) - 1.0) < 1e-12
    assert hist.counts.sum() > 0
    assert 0.0 <= hist.peak_energy <= 1800.0


def test_participation_ratio_oracles():
    e3 = np.zeros(16)
    e3[3] = 1.0
    assert abs(participation_ratio(e3) - 1.0) < 1e-12
    m = 7
    uniform = np.ones(m) / np.sqrt(m)
    assert abs(participation_ratio(uniform) - m) < 1e-12
    with pytest.raises(ValueError):
        participation_ratio(np.ones(4))  # not normalized


def test_occupation_expectation_oracle():
    e5 = np.zeros(12)
    e5[5] = 1.0
    assert abs(occupation_expectation(e5) - 5.0) < 1e-12


def test_locate_esqpt_markers_near_critical_energy():
    params = ModelParams(xi=100.0, dim_N=600)
    est = locate_esqpt(diagonalize(params))
    e_c = esqpt_energy(params)
    for e in (est.e_dos_peak, est.e_pr_dip, est.e_occ_dip):
        assert abs(e / e_c - 1.0) < 0.02
    assert est.spread < 0.05 * e_c


def test_esqpt_eigenstate_localized_on_vacuum():
    dec = diagonalize(ModelParams(xi=100.0, dim_N=600))
    est = locate_esqpt(dec)
    v = dec.eigenvector(est.level_pr_dip)
    weights = np.abs(v) ** 2
    assert np.argmax(weights) == 0  # pinned to the Fock vacuum


def test_locate_esqpt_error_paths():
    with pytest.raises(ValueError):
        locate_esqpt(diagonalize(ModelParams(xi=0.0, dim_N=60)))
    # basis too small to populate the level-count windows
    with pytest.raises(ValueError):
        locate_esqpt(diagonalize(ModelParams(xi=200.0, dim_N=8)))


def test_level_count_below_the_transition():
    """Semiclassical count: each parity ladder holds ~xi/pi pairs below
    the critical energy (well area over Planck cells)."""
    for xi in (60.0, 120.0):
        params = ModelParams(xi=xi, dim_N=int(8 * xi))
        dec = diagonalize(params)
        e_c = esqpt_energy(params)
        n_even = int(np.sum(dec.evals_even - dec.ground_energy < e_c))
        expected = xi / np.pi
        assert abs(n_even / expected - 1.0) < 0.08
