import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.stats import poisson

from kerr_esqpt import (
    KerrFreePointError,
    MicroscopicParams,
    ModelParams,
    TruncationError,
    build_hamiltonian,
    coherent_state,
    coherent_tail_mass,
    is_hermitian,
    ladder_matrices,
    microscopic_map,
    parity_operator,
    parity_split,
    truncation_check,
)


def brute_force_hamiltonian(params):
    """Element-by-element oracle: <n|H|n> = K n(n-1),
    <n+2|H|n> = <n|H|n+2> = -K xi sqrt((n+1)(n+2))."""
    N, K, xi = params.dim_N, params.kerr_K, params.xi
    H = np.zeros((N, N))
    for n in range(N):
        H[n, n] = K * n * (n - 1)
        if n + 2 < N:
            H[n + 2, n] = -K * xi * np.sqrt((n + 1) * (n + 2))
            H[n, n + 2] = H[n + 2, n]
    if params.sign_convention == "lab_frame":
        H = -H
    return H


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(xi=-1.0, dim_N=50)
    with pytest.raises(ValueError):
        ModelParams(xi=1.0, dim_N=1)
    with pytest.raises(ValueError):
        ModelParams(xi=1.0, dim_N=50, kerr_K=0.0)
    with pytest.raises(ValueError):
        ModelParams(xi=1.0, dim_N=50, sign_convention="rotating")
    with pytest.raises(ValueError):
        ModelParams(xi=1.0, dim_N=50, n_eff=0.0)


def test_epsilon2_property():
    params = ModelParams(xi=7.5, dim_N=40, kerr_K=2.0)
    assert abs(params.epsilon2 - 15.0) < 1e-15


def test_hamiltonian_matches_brute_force():
    for xi in (0.0, 1.0, 7.3, 180.0):
        params = ModelParams(xi=xi, dim_N=60, kerr_K=1.7)
        assert_allclose(build_hamiltonian(params),
                        brute_force_hamiltonian(params), rtol=0, atol=1e-12)


def test_lab_frame_is_global_negation():
    main = build_hamiltonian(ModelParams(xi=4.0, dim_N=30))
    lab = build_hamiltonian(
        ModelParams(xi=4.0, dim_N=30, sign_convention="lab_frame"))
    assert_allclose(lab, -main, rtol=0, atol=0)


def test_hamiltonian_hermitian():
    H = build_hamiltonian(ModelParams(xi=11.0, dim_N=80))
    assert is_hermitian(H)
    assert H.dtype == np.float64


def test_ladder_operators():
    params = ModelParams(xi=1.0, dim_N=20)
    ops = ladder_matrices(params)
    # a |n> = sqrt(n) |n-1>
    for n in range(1, 20):
        e = np.zeros(20)
        e[n] = 1.0
        out = ops.a @ e
        assert abs(out[n - 1] - np.sqrt(n)) < 1e-12
    assert_allclose(ops.a_dag, ops.a.T, atol=0)
    assert_allclose(ops.n_op, ops.a_dag @ ops.a, atol=1e-12)
    # canonical pair: [q, p] = i/n_eff on the subspace away from the edge
    comm = ops.q_op @ ops.p_op - ops.p_op @ ops.q_op
    assert_allclose(comm[:18, :18], 1j * np.eye(20)[:18, :18] / params.n_eff,
                    atol=1e-12)


def test_hamiltonian_from_ladder_algebra():
    # independent route: K (adag^2 a^2) - K xi (adag^2 + a^2)
    params = ModelParams(xi=6.0, dim_N=50, kerr_K=0.8)
    ops = ladder_matrices(params)
    a2 = ops.a @ ops.a
    H_alg = (params.kerr_K * (ops.a_dag @ ops.a_dag @ a2)
             - params.kerr_K * params.xi * (ops.a_dag @ ops.a_dag + a2))
    assert_allclose(build_hamiltonian(params), H_alg, atol=1e-10)


def test_parity_operator_and_split():
    P = parity_operator(7)
    assert_allclose(P, [1, -1, 1, -1, 1, -1, 1], atol=0)
    H = build_hamiltonian(ModelParams(xi=3.0, dim_N=33))
    blocks = parity_split(H)
    assert blocks.even.shape == (17, 17)
    assert blocks.odd.shape == (16, 16)
    assert_allclose(blocks.reassemble(), H, atol=0)


def test_parity_split_rejects_parity_mixing():
    H = build_hamiltonian(ModelParams(xi=3.0, dim_N=20))
    H[0, 1] = 1e-3  # a one-photon term breaks parity
    H[1, 0] = 1e-3
    with pytest.raises(Exception):
        parity_split(H)


def test_coherent_state_vacuum_exact():
    params = ModelParams(xi=1.0, dim_N=30)
    psi = coherent_state(0.0, 0.0, params)
    assert psi[0] == 1.0
    assert np.all(psi[1:] == 0.0)


def test_coherent_state_poisson_occupation():
    """|c_n|^2 oracle: Poisson with mean |alpha|^2 = (q^2 + p^2)/2."""
    params = ModelParams(xi=1.0, dim_N=120)
    q, p = 2.4, -1.1
    psi = coherent_state(q, p, params)
    nbar = (q * q + p * p) / 2.0
    assert_allclose(np.abs(psi) ** 2, poisson.pmf(np.arange(120), nbar),
                    atol=1e-13)
    assert abs(np.linalg.norm(psi) - 1.0) < 1e-12


def test_coherent_state_centered_on_launch_point():
    params = ModelParams(xi=1.0, dim_N=160)
    ops = ladder_matrices(params)
    q, p = 3.2, 0.7
    psi = coherent_state(q, p, params)
    assert abs(np.vdot(psi, ops.q_op @ psi).real - q) < 1e-9
    assert abs(np.vdot(psi, ops.p_op @ psi).real - p) < 1e-9


def test_coherent_state_truncation_guard():
    params = ModelParams(xi=1.0, dim_N=20)
    with pytest.raises(TruncationError):
        coherent_state(12.0, 0.0, params)  # nbar = 72 >> 20
    tail = coherent_tail_mass(12.0, 0.0, params)
    assert tail > 1e-8
    # matches the Poisson survival function
    assert_allclose(tail, poisson.sf(19, 72.0), rtol=1e-12)


def test_microscopic_map_normalization_point():
    # g3 = 0, g4 = -2/3 gives K = 1 and xi = 0
    mapped = microscopic_map(MicroscopicParams(g3=0.0, g4=-2.0 / 3.0,
                                               Omega_d=5.0, omega_d=1.0))
    assert abs(mapped["K"] - 1.0) < 1e-15
    assert mapped["epsilon2"] == 0.0
    assert mapped["xi"] == 0.0


def test_microscopic_map_linearity_in_drive():
    base = MicroscopicParams(g3=0.02, g4=-0.001, Omega_d=1.0, omega_d=1.0)
    xi1 = microscopic_map(base)["xi"]
    for scale in (2.0, 5.0, 11.0):
        scaled = MicroscopicParams(g3=0.02, g4=-0.001, Omega_d=scale,
                                   omega_d=1.0)
        assert abs(microscopic_map(scaled)["xi"] - scale * xi1) < 1e-12 * scale


def test_microscopic_map_kerr_free_point():
    # 20 g3^2 / (3 omega_d) = 1.5 g4 cancels K exactly
    g3 = 0.3
    g4 = 20.0 * g3 * g3 / (3.0 * 1.0) / 1.5
    with pytest.raises(KerrFreePointError):
        microscopic_map(MicroscopicParams(g3=g3, g4=g4, Omega_d=1.0,
                                          omega_d=1.0))


def test_truncation_check_flags_tight_basis():
    good = truncation_check(ModelParams(xi=10.0, dim_N=120), levels=8)
    assert good.converged and good.drift <= 1e-8
    bad = truncation_check(ModelParams(xi=60.0, dim_N=70), levels=30)
    assert not bad.converged
    with pytest.raises(ValueError):
        truncation_check(ModelParams(xi=1.0, dim_N=40))  # neither request
    with pytest.raises(TruncationError):
        truncation_check(ModelParams(xi=1.0, dim_N=40), levels=30)


def test_truncation_check_coherent_request():
    report = truncation_check(ModelParams(xi=1.0, dim_N=200),
                              coherent=(3.0, 0.0))
    assert report.converged
    report2 = truncation_check(ModelParams(xi=1.0, dim_N=12),
                               coherent=(4.0, 0.0))
    assert not report2.converged
