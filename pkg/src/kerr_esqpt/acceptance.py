"""Built-in verification suite: the package's quantitative guarantees.

Each criterion function performs one end-to-end measurement at pinned
parameters and tolerances and returns a CriterionResult.  The test suite
asserts each result; ``kerr-esqpt check`` prints one line per criterion.
These are deliberately end-to-end (they exercise the public API only) and
deterministic.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .classical import (
    ClassicalParams,
    h_cl,
    integrate_trajectory,
    linearize,
    semiclassical_dos,
    stationary_points,
)
from .dynamics import (
    PRESET_POINTS,
    TimeSeries,
    default_time_grid,
    ehrenfest_prediction,
    ehrenfest_time,
    energy_distribution,
    evolve,
    expectation_series,
    fit_growth_rate,
    fotoc,
    husimi_entropy_series,
    long_time_average,
    norm_series,
    parity_series,
    preset_state,
    survival_probability,
)
from .fock import ModelParams, build_hamiltonian, coherent_state, ladder_matrices
from .phasespace import m2_exact, m2_quadrature
from .spectral import (
    diagonalize,
    dos_histogram,
    esqpt_energy,
    fit_log_gap,
    kissing_gaps,
    locate_esqpt,
)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str


def _result(number: int, title: str, passed: bool, detail: str) -> CriterionResult:
    return CriterionResult(number=number, title=title, passed=bool(passed),
                           detail=detail)


@lru_cache(maxsize=32)
def _preset_series(
    xi: float, dim_N: int, label: str, t_max: float, samples: int
) -> dict:
    """Evolve one preset and keep only the small per-time series."""
    params = ModelParams(xi=xi, dim_N=dim_N)
    dec = diagonalize(params)
    state = preset_state(label, params)
    times = default_time_grid(params.kerr_K, t_max, samples)
    ev = evolve(state, dec, times)
    ops = ladder_matrices(params)
    H = build_hamiltonian(params)
    return {
        "params": params,
        "times": times,
        "sp": survival_probability(ev),
        "fotoc": fotoc(ev, ops),
        "norm": norm_series(ev),
        "parity": parity_series(ev),
        "energy": expectation_series(ev, H).real,
        "gamma": energy_distribution(state, dec).gamma,
    }


def criterion_1() -> CriterionResult:
    """DOS peak, PR dip and occupation dip co-located at K xi^2."""
    t0 = time.monotonic()
    params = ModelParams(xi=180.0, dim_N=900)
    est = locate_esqpt(diagonalize(params))
    e_c = esqpt_energy(params)
    devs = {
        "dos": est.e_dos_peak / e_c - 1.0,
        "pr": est.e_pr_dip / e_c - 1.0,
        "occ": est.e_occ_dip / e_c - 1.0,
    }
    wall = time.monotonic() - t0
    ok = all(abs(d) <= 0.02 for d in devs.values()) and wall < 120.0
    detail = (
        f"xi=180, dim=900: deviations from 32400K: "
        + ", ".join(f"{k} {100 * v:+.2f}%" for k, v in devs.items())
        + f" (tol 2%); wall {wall:.1f}s < 120s"
    )
    return _result(1, "ESQPT location from three spectral markers", ok, detail)


def criterion_2() -> CriterionResult:
    """Ground even/odd pair degenerate to 1e-10 K xi^2."""
    rows = []
    ok = True
    for xi, dim in ((10.0, 150), (50.0, 400), (180.0, 900)):
        dec = diagonalize(ModelParams(xi=xi, dim_N=dim))
        gap = float(dec.evals_odd[0] - dec.evals_even[0])
        bound = 1e-10 * dec.params.kerr_K * xi**2
        ok &= abs(gap) <= bound
        rows.append(f"xi={xi:g}: |gap|={abs(gap):.2e} <= {bound:.1e}")
    return _result(2, "Ground-pair degeneracy", ok, "; ".join(rows))


def criterion_3() -> CriterionResult:
    """Exponential kissing: log-gap affine in xi on [2, 12] for pairs 1-4."""
    grid = np.linspace(2.0, 12.0, 41)
    series = kissing_gaps(grid, pairs=5, dim_N=160)
    r2 = {}
    for pair in (1, 2, 3, 4):
        fit = fit_log_gap(series, pair, gap_ceiling_frac=None)
        r2[pair] = fit.r_squared
    ok = all(v >= 0.98 for v in r2.values())
    detail = (
        "R^2 of ln(gap) vs xi over [2,12]: "
        + ", ".join(f"pair {k}: {v:.4f}" for k, v in r2.items())
        + " (threshold 0.98; pairs 2-4 are still on the pre-kissing "
        "shoulder in this xi range, see README)"
    )
    return _result(3, "Spectral-kissing exponential fit", ok, detail)


def criterion_4() -> CriterionResult:
    """Energy spread of the saddle quench equals sqrt(2) K xi."""
    params = ModelParams(xi=180.0, dim_N=900)
    dec = diagonalize(params)
    gamma = energy_distribution(preset_state("O", params), dec).gamma
    expected = math.sqrt(2.0) * params.kerr_K * params.xi
    rel = abs(gamma / expected - 1.0)
    ok = rel <= 1e-10
    return _result(
        4, "Energy-width identity Gamma_O = sqrt(2) K xi", ok,
        f"Gamma={gamma:.12f}, sqrt(2) K xi={expected:.12f}, "
        f"rel dev {rel:.2e} <= 1e-10",
    )


def criterion_5() -> CriterionResult:
    """Short-time laws: S_p = 1 - 2 xi^2 (Kt)^2, F = 1 + 8 xi^2 (Kt)^2."""
    data = _preset_series(180.0, 900, "O", 0.15, 2000)
    params: ModelParams = data["params"]
    xi, K = params.xi, params.kerr_K
    checks = []
    ok = True
    for name, series, law, window in (
        ("survival", data["sp"], lambda t: 1.0 - 2.0 * xi**2 * K**2 * t**2,
         0.1 / (math.sqrt(2.0) * xi * K)),
        ("fotoc", data["fotoc"], lambda t: 1.0 + 8.0 * xi**2 * K**2 * t**2,
         0.1 / (math.sqrt(8.0) * xi * K)),
    ):
        mask = (series.times > 0) & (series.times <= window)
        t = series.times[mask]
        rel = np.abs(series.values[mask] / law(t) - 1.0)
        worst = float(rel.max())
        ok &= worst <= 0.01
        checks.append(f"{name}: {mask.sum()} pts, worst rel dev {worst:.2e}")
    return _result(5, "Short-time quadratic laws", ok,
                   "; ".join(checks) + " (tol 1%)")


def criterion_6() -> CriterionResult:
    """FOTOC grows at 2 lambda and the Husimi entropy at lambda."""
    data = _preset_series(180.0, 900, "O", 0.15, 2000)
    params: ModelParams = data["params"]
    fo: TimeSeries = data["fotoc"]
    lam = 2.0 * params.kerr_K * params.xi
    tau = 1.0 / (math.sqrt(8.0) * params.xi * params.kerr_K)
    t_ehr = ehrenfest_time(fo)
    window = (2.0 * tau, 0.8 * t_ehr)
    slope_f = fit_growth_rate(fo, *window).rate
    dev_f = abs(slope_f / (2.0 * lam) - 1.0)

    # entropy on the same window needs the evolved states once more
    params2 = ModelParams(xi=180.0, dim_N=900)
    dec = diagonalize(params2)
    times = default_time_grid(params2.kerr_K, 0.15, 2000)
    ev = evolve(preset_state("O", params2), dec, times)
    idx = np.flatnonzero((times >= 0.8 * window[0]) & (times <= 1.2 * window[1]))
    sh2 = husimi_entropy_series(ev, indices=idx)
    slope_s = fit_growth_rate(sh2, *window, log_already=True).rate
    dev_s = abs(slope_s / lam - 1.0)

    ok = dev_f <= 0.15 and dev_s <= 0.20
    return _result(
        6, "Lyapunov rate from FOTOC and Husimi entropy", ok,
        f"window Kt=[{window[0]:.4f},{window[1]:.4f}]: "
        f"d(ln F)/dt={slope_f:.1f} vs 2*lambda={2 * lam:.0f} "
        f"({100 * dev_f:.1f}%, tol 15%); "
        f"dS_H2/dt={slope_s:.1f} vs lambda={lam:.0f} "
        f"({100 * dev_s:.1f}%, tol 20%)",
    )


def criterion_7() -> CriterionResult:
    """First FOTOC maximum at the predicted Ehrenfest time."""
    rows = []
    ok = True
    for xi, dim in ((100.0, 700), (180.0, 900), (300.0, 1200)):
        params = ModelParams(xi=xi, dim_N=dim)
        pred = ehrenfest_prediction(params)
        data = _preset_series(xi, dim, "O", 3.0 * pred * params.kerr_K, 1500)
        t_max_f = ehrenfest_time(data["fotoc"])
        dev = abs(t_max_f / pred - 1.0)
        ok &= dev <= 0.20
        rows.append(f"xi={xi:g}: K T={t_max_f:.5f} vs {pred:.5f} "
                    f"({100 * dev:.1f}%)")
    return _result(7, "Ehrenfest time, K T = ln(xi)/(2 xi) - 0.0027", ok,
                   "; ".join(rows) + " (tol 20%)")


def criterion_8() -> CriterionResult:
    """Closed-form Husimi second moment agrees with quadrature."""
    params = ModelParams(xi=2.0, dim_N=64)
    states: list[tuple[str, np.ndarray]] = [
        ("vacuum", np.eye(64, dtype=complex)[0]),
        ("fock1", np.eye(64, dtype=complex)[1]),
    ]
    coherent_qp = [(1.0, 0.0), (0.8, -0.6), (0.0, 1.6)]
    for q, p in coherent_qp:
        states.append((f"coh({q:g},{p:g})", coherent_state(q, p, params)))
    small = ModelParams(xi=1.5, dim_N=20)
    dec = diagonalize(small)
    psi0 = coherent_state(0.9, 0.0, small)
    ev = evolve(psi0, dec, np.array([0.3, 0.7]) / small.kerr_K)
    states.append(("evolved(Kt=0.3)", ev.psi[:, 0]))
    states.append(("evolved(Kt=0.7)", ev.psi[:, 1]))

    ok = True
    worst = 0.0
    for name, state in states:
        m_exact = m2_exact(state)
        m_quad = m2_quadrature(state)
        diff = abs(m_exact - m_quad)
        worst = max(worst, diff)
        ok &= diff <= 1e-6
    coh_dev = max(
        abs(m2_exact(coherent_state(q, p, params)) - 0.5)
        for q, p in coherent_qp
    )
    ok &= coh_dev <= 1e-9
    return _result(
        8, "M2 closed form vs phase-space quadrature", ok,
        f"{len(states)} states, worst |exact - quadrature| = {worst:.2e} "
        f"(tol 1e-6); coherent M2 dev from 1/2: {coh_dev:.2e} (tol 1e-9)",
    )


def criterion_9() -> CriterionResult:
    """Classical stationary structure and RK4 energy conservation."""
    cp = ClassicalParams(xi_cl=180.0, k_cl=1.0)
    e_min = -cp.k_cl * cp.xi_cl**2
    checks = []
    ok = True

    pts = {pt.kind: pt for pt in stationary_points(cp)}
    centers = [pt for pt in stationary_points(cp) if pt.kind == "center"]
    worst_center = max(abs(pt.energy / e_min - 1.0) for pt in centers)
    saddle = pts["saddle"]
    ok &= worst_center <= 1e-12 and abs(saddle.energy) <= 1e-12 * abs(e_min)
    checks.append(f"stationary energies: center rel dev {worst_center:.1e}, "
                  f"|E_saddle|={abs(saddle.energy):.1e}")

    lam = 2.0 * cp.k_cl * cp.xi_cl
    eigs = sorted(ev.real for ev in linearize(0.0, 0.0, cp).eigenvalues)
    eig_dev = max(abs(eigs[0] + lam), abs(eigs[1] - lam)) / lam
    ok &= eig_dev <= 1e-14
    checks.append(f"origin eigenvalues +-2 K xi rel dev {eig_dev:.1e}")

    printed = {"O": 0.0, "A": -3.1034e4, "B": -0.0282e4, "C": 0.0282e4,
               "D": 1.4106e4, "E": 1.4106e4}
    worst_pt = 0.0
    for label, e_ref in printed.items():
        q, p = PRESET_POINTS[label]
        e_val = h_cl(q, p, cp)
        dev = (abs(e_val - e_ref) / abs(e_ref)) if e_ref != 0 else abs(e_val)
        worst_pt = max(worst_pt, dev)
    ok &= worst_pt <= 5e-4
    checks.append(f"launch-point energies worst rel dev {worst_pt:.1e} "
                  "(4 significant digits)")

    traj = integrate_trajectory(*PRESET_POINTS["D"], cp, t_max=1.0, dt=5e-6)
    ok &= traj.energy_drift <= 1e-8
    checks.append(f"RK4 drift over Kt=1: {traj.energy_drift:.1e} <= 1e-8")
    return _result(9, "Classical fixed points, energies, integrator", ok,
                   "; ".join(checks))


def criterion_10() -> CriterionResult:
    """Semiclassical level density matches the histogram; log peak."""
    params = ModelParams(xi=180.0, dim_N=900)
    dec = diagonalize(params)
    e_c = esqpt_energy(params)
    hist = dos_histogram(dec, bins=36, e_range=(0.0, 2.0 * e_c))
    cp = ClassicalParams.from_model(params)

    centers = hist.bin_centers
    keep = np.abs(centers - e_c) > 0.05 * e_c
    widths = np.diff(hist.bin_edges)
    # quantum probability per kept bin vs semiclassical nu integrated there
    p_q = hist.density[keep] * widths[keep]
    p_q = p_q / p_q.sum()
    nu = np.array([semiclassical_dos(float(E - e_c), cp) for E in centers[keep]])
    p_s = nu * widths[keep]
    p_s = p_s / p_s.sum()
    l1 = float(np.abs(p_q - p_s).sum())
    ok = l1 < 0.1

    sides = []
    for sign in (-1.0, +1.0):
        delta = np.array([0.02, 0.04, 0.08, 0.16, 0.32]) * e_c
        vals = np.array([semiclassical_dos(sign * d, cp) for d in delta])
        slope, _ = np.polyfit(np.log(delta), vals, 1)
        increasing = bool(np.all(np.diff(vals) < 0))  # toward the saddle
        ok &= slope < 0 and increasing
        sides.append(f"{'below' if sign < 0 else 'above'}: "
                     f"dnu/dln|E|={slope:.2e}")
    return _result(
        10, "Semiclassical vs quantum density of states", ok,
        f"unit-area L1 distance {l1:.3f} < 0.1 over {int(keep.sum())}/36 bins "
        f"(|E' - K xi^2| > 5% excluded); log divergence {'; '.join(sides)}",
    )


def criterion_11() -> CriterionResult:
    """Preset orderings: early S_p and long-time FOTOC hierarchy."""
    sp_at = {}
    fbar = {}
    for label in sorted(PRESET_POINTS):
        data = _preset_series(180.0, 900, label, 2.0, 1000)
        sp: TimeSeries = data["sp"]
        i = int(np.argmin(np.abs(sp.times - 0.002)))
        sp_at[label] = float(sp.values[i])
        fbar[label] = long_time_average(data["fotoc"], 1.0, 2.0)
    others = {k: v for k, v in sp_at.items() if k != "O"}
    sp_ok = sp_at["O"] > max(others.values())
    mid = [fbar["O"], fbar["B"], fbar["C"]]
    de_dev = abs(fbar["D"] - fbar["E"]) / max(fbar["D"], fbar["E"])
    order_ok = (fbar["A"] < min(mid)
                and max(mid) < min(fbar["D"], fbar["E"])
                and de_dev <= 0.05)
    ok = sp_ok and order_ok
    return _result(
        11, "Dynamical orderings across launch points", ok,
        f"S_p(Kt=0.002): O={sp_at['O']:.4f} > rest max "
        f"{max(others.values()):.4f}; Fbar[1,2]: A={fbar['A']:.1f} < "
        f"(O,B,C)=({fbar['O']:.1f},{fbar['B']:.1f},{fbar['C']:.1f}) < "
        f"(D,E)=({fbar['D']:.1f},{fbar['E']:.1f}), D~E dev {100 * de_dev:.1f}% "
        "(tol 5%)",
    )


def criterion_12() -> CriterionResult:
    """Norm, energy and parity conserved to 1e-9 along every evolution."""
    worst = {"norm": 0.0, "energy": 0.0, "parity": 0.0}
    for label in sorted(PRESET_POINTS):
        data = _preset_series(180.0, 900, label, 0.15, 2000)
        norm = data["norm"]
        worst["norm"] = max(worst["norm"],
                            float(np.max(np.abs(norm - norm[0])) / norm[0]))
        energy = data["energy"]
        scale = max(abs(float(energy[0])), data["gamma"])
        worst["energy"] = max(worst["energy"],
                              float(np.max(np.abs(energy - energy[0])) / scale))
        par = data["parity"]
        worst["parity"] = max(worst["parity"],
                              float(np.max(np.abs(par - par[0]))))
    ok = all(v <= 1e-9 for v in worst.values())
    return _result(
        12, "Conservation of norm, energy, parity", ok,
        "worst drifts over all presets, Kt in [0, 0.15]: "
        + ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
        + " (tol 1e-9)",
    )


CRITERIA: tuple[Callable[[], CriterionResult], ...] = (
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
    criterion_11, criterion_12,
)


def run_criteria(only: Sequence[int] | None = None) -> list[CriterionResult]:
    """Run the numbered criteria (all by default) in order."""
    if only is None:
        picked = list(range(1, len(CRITERIA) + 1))
    else:
        picked = sorted(set(int(n) for n in only))
        bad = [n for n in picked if not 1 <= n <= len(CRITERIA)]
        if bad:
            raise ValueError(f"no such criterion: {bad}; valid range is "
                             f"1..{len(CRITERIA)}")
    return [CRITERIA[n - 1]() for n in picked]
