"""Quench dynamics in the exact eigenbasis.

A coherent state released in the double-well landscape is expanded over the
merged even+odd eigenbasis (coherent states off the axes mix parity) and
propagated exactly:

    |Psi(t)> = sum_k c_k e^{-i E_k t} |E_k>,   c_k = <E_k|Psi(0)>.

Observables built on top of the propagated states:

* survival probability  S_p(t) = |<Psi(0)|Psi(t)>|^2
* FOTOC                 F(t) = var(q) + var(p)   (fidelity OTOC; equals 1 at
  t = 0 for any coherent state when n_eff = 1)
* Husimi second-moment entropy series S_H2(t) = -ln M2(t)

Short-time laws for the saddle-point state |0>:  S_p = 1 - 2 xi^2 K^2 t^2
(valid Kt << 1/(sqrt2 xi)) and F = 1 + 8 xi^2 K^2 t^2 (valid Kt <<
1/(sqrt8 xi)); past those windows both cross over to exponential growth or
decay at rates set by the classical Lyapunov exponent lambda = 2 K xi, until
the Ehrenfest time K T ~ ln(xi)/(2 xi) - 0.0027 where F peaks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import LadderOps, ModelParams, coherent_state, parity_operator
from .phasespace import m2_exact
from .spectral import SpectralDecomposition

#: phase-space launch points (q, p) for the xi = 180 landscape: O sits on the
#: saddle, A near a well bottom, B/C just below/above the separatrix energy,
#: D and E at the same positive energy inside and outside the separatrix.
PRESET_POINTS: dict[str, tuple[float, float]] = {
    "O": (0.0, 0.0),
    "A": (16.9143, 0.0),
    "B": (1.2533, 0.0),
    "C": (0.0, 1.2506),
    "D": (0.0, 8.4443),
    "E": (28.1302, 0.0),
}


def preset_state(state_id: str, params: ModelParams) -> np.ndarray:
    """Coherent state at one of the tabulated launch points.

    "O" (the origin) is meaningful at any xi; the lettered points are
    tailored to the xi = 180 landscape but are constructed verbatim at other
    xi too.  Unknown ids raise ValueError.
    """
    try:
        q, p = PRESET_POINTS[state_id]
    except KeyError:
        raise ValueError(
            f"unknown preset {state_id!r}; choose from {sorted(PRESET_POINTS)}"
        ) from None
    return coherent_state(q, p, params)


def default_time_grid(
    kerr_K: float = 1.0,
    t_max: float = 0.15,
    samples: int = 2000,
    log_prefix: tuple[float, float, int] | None = (1e-5, 1e-3, 200),
) -> np.ndarray:
    """Uniform grid on [0, t_max/K] plus a log-spaced short-time prefix.

    The prefix resolves the quadratic short-time windows, which shrink like
    1/xi and would otherwise fall between uniform samples.
    """
    t = np.linspace(0.0, t_max / kerr_K, samples)
    if log_prefix is not None:
        lo, hi, n = log_prefix
        t = np.concatenate([t, np.geomspace(lo / kerr_K, hi / kerr_K, n)])
    return np.unique(t)


@dataclass(frozen=True)
class Evolution:
    """Propagated quench: eigenbasis coefficients plus reconstructed states.

    psi has shape (dim_N, len(times)); column j is |Psi(t_j)> in the Fock
    basis.  coeffs are the eigenbasis amplitudes c_k of the initial state.
    """

    times: np.ndarray
    psi: np.ndarray
    coeffs: np.ndarray
    decomposition: SpectralDecomposition
    initial_state: np.ndarray

    @property
    def dim(self) -> int:
        return self.psi.shape[0]


def evolve(
    state0: np.ndarray, dec: SpectralDecomposition, times: np.ndarray
) -> Evolution:
    """Propagate an initial state over the merged eigenbasis.

    Times must be non-negative and ascending.  Completeness of the expansion
    is checked (sum_k |c_k|^2 must reach the state's norm to 1e-8): the
    merged basis spans the truncated space, so a deficit means the input
    leaked outside it.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1-D array")
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be non-negative and ascending")
    state0 = np.asarray(state0, dtype=complex)
    if state0.shape != (dec.dim,):
        raise ValueError(
            f"state has shape {state0.shape}, expected ({dec.dim},)"
        )
    V = dec.full_eigenvector_matrix()
    coeffs = V.T @ state0
    norm2 = float(np.sum(np.abs(state0) ** 2))
    completeness = float(np.sum(np.abs(coeffs) ** 2))
    if abs(completeness - norm2) > 1e-8 * max(norm2, 1.0):
        raise ValueError(
            f"eigenbasis expansion lost {norm2 - completeness:.3e} of the norm"
        )
    phases = np.exp(-1j * np.outer(dec.eigenvalues, times))
    psi = V @ (coeffs[:, None] * phases)
    return Evolution(
        times=times.copy(), psi=psi, coeffs=coeffs,
        decomposition=dec, initial_state=state0.copy(),
    )


@dataclass(frozen=True)
class TimeSeries:
    times: np.ndarray
    values: np.ndarray


def survival_probability(ev: Evolution) -> TimeSeries:
    """S_p(t) = |sum_k |c_k|^2 e^{-i E_k t}|^2 (equals |<Psi(0)|Psi(t)>|^2)."""
    w = np.abs(ev.coeffs) ** 2
    phases = np.exp(-1j * np.outer(ev.decomposition.eigenvalues, ev.times))
    amp = w @ phases
    return TimeSeries(times=ev.times, values=np.abs(amp) ** 2)


def expectation_series(ev: Evolution, op: np.ndarray) -> np.ndarray:
    """<Psi(t)| op |Psi(t)> for each time column (real part)."""
    return np.einsum("it,it->t", ev.psi.conj(), op @ ev.psi).real


def fotoc(ev: Evolution, ops: LadderOps) -> TimeSeries:
    """F(t) = var q + var p, the fidelity out-of-time-order correlator."""
    q1 = expectation_series(ev, ops.q_op)
    p1 = expectation_series(ev, ops.p_op)
    q2 = expectation_series(ev, ops.q_op @ ops.q_op)
    p2 = expectation_series(ev, ops.p_op @ ops.p_op)
    return TimeSeries(times=ev.times, values=(q2 - q1**2) + (p2 - p1**2))


def husimi_entropy_series(ev: Evolution, indices: np.ndarray | None = None) -> TimeSeries:
    """S_H2(t) = -ln M2(t), optionally on a subset of time indices."""
    if indices is None:
        indices = np.arange(len(ev.times))
    indices = np.asarray(indices, dtype=int)
    vals = np.array([-math.log(m2_exact(ev.psi[:, j])) for j in indices])
    return TimeSeries(times=ev.times[indices], values=vals)


def parity_series(ev: Evolution) -> np.ndarray:
    """<(-1)^n>(t); conserved by the dynamics."""
    sign = parity_operator(ev.dim)
    return (sign[:, None] * np.abs(ev.psi) ** 2).sum(axis=0).real


def norm_series(ev: Evolution) -> np.ndarray:
    """||Psi(t)|| for each column."""
    return np.sqrt(np.sum(np.abs(ev.psi) ** 2, axis=0))


@dataclass(frozen=True)
class EnergyDistribution:
    """Eigenbasis weights of an initial state and their moments."""

    energies: np.ndarray
    weights: np.ndarray
    mean: float
    variance: float

    @property
    def gamma(self) -> float:
        """Energy spread Gamma = sqrt(variance); sqrt(2) K xi for the vacuum."""
        return math.sqrt(self.variance)


def energy_distribution(
    state0: np.ndarray, dec: SpectralDecomposition
) -> EnergyDistribution:
    """Weights w_k = |<E_k|Psi(0)>|^2 with mean and variance."""
    state0 = np.asarray(state0, dtype=complex)
    V = dec.full_eigenvector_matrix()
    w = np.abs(V.T @ state0) ** 2
    w = w / w.sum()
    mean = float(np.dot(w, dec.eigenvalues))
    var = float(np.dot(w, (dec.eigenvalues - mean) ** 2))
    return EnergyDistribution(
        energies=dec.eigenvalues.copy(), weights=w, mean=mean, variance=var
    )


@dataclass(frozen=True)
class QuadraticFit:
    """Least-squares t^2 coefficient of a short-time series."""

    coefficient: float
    expected: float | None
    n_points: int
    window: float

    @property
    def relative_deviation(self) -> float | None:
        if self.expected in (None, 0.0):
            return None
        return abs(self.coefficient - self.expected) / abs(self.expected)


def short_time_coefficients(
    series: TimeSeries,
    law: str,
    params: ModelParams,
    window_fraction: float = 0.1,
    min_points: int = 20,
) -> QuadraticFit:
    """Fit y(t) = 1 + c t^2 on the early-time window.

    law = "survival": fit S_p - 1 ~ -a t^2 inside Kt <= fraction/(sqrt2 xi)
    and report a (expected 2 xi^2 K^2 for the vacuum quench).
    law = "fotoc": fit F - 1 ~ +b t^2 inside Kt <= fraction/(sqrt8 xi) and
    report b (expected 8 xi^2 K^2).  The default fraction 0.1 keeps the
    quadratic law accurate to ~1e-4 so the fit is unbiased.
    """
    K, xi = params.kerr_K, params.xi
    if xi <= 0:
        raise ValueError("short-time windows require xi > 0")
    if law == "survival":
        window = window_fraction / (math.sqrt(2.0) * xi * K)
        expected = 2.0 * xi**2 * K**2
        sign = -1.0
    elif law == "fotoc":
        window = window_fraction / (math.sqrt(8.0) * xi * K)
        expected = 8.0 * xi**2 * K**2
        sign = 1.0
    else:
        raise ValueError(f"unknown law {law!r}")
    mask = (series.times > 0) & (series.times <= window)
    n = int(np.count_nonzero(mask))
    if n < min_points:
        raise ValueError(
            f"only {n} samples inside the fit window Kt <= {window * K:.3e}; "
            f"need >= {min_points}"
        )
    t2 = series.times[mask] ** 2
    y = series.values[mask] - 1.0
    coeff = sign * float(np.dot(t2, y) / np.dot(t2, t2))
    return QuadraticFit(coefficient=coeff, expected=expected, n_points=n,
                        window=window)


def ehrenfest_time(series: TimeSeries) -> float:
    """Time of the first global maximum of a FOTOC series.

    The maximum must be interior: a maximum on either edge of the grid means
    the window does not bracket the peak.
    """
    i = int(np.argmax(series.values))
    if i == 0 or i == len(series.values) - 1:
        raise ValueError(
            "FOTOC maximum sits on the grid edge; extend the time window"
        )
    return float(series.times[i])


def ehrenfest_prediction(params: ModelParams) -> float:
    """Saddle-quench Ehrenfest time, K T = ln(xi)/(2 xi) - 0.0027."""
    if params.xi <= 0:
        raise ValueError("Ehrenfest prediction requires xi > 0")
    return (math.log(params.xi) / (2.0 * params.xi) - 0.0027) / params.kerr_K


def long_time_average(series: TimeSeries, t1: float, t2: float) -> float:
    """Mean of the samples with t1 <= t <= t2."""
    if not t2 > t1:
        raise ValueError("need t2 > t1")
    mask = (series.times >= t1) & (series.times <= t2)
    if np.count_nonzero(mask) < 2:
        raise ValueError("fewer than 2 samples inside the averaging window")
    return float(np.mean(series.values[mask]))


@dataclass(frozen=True)
class GrowthFit:
    """Linear fit of ln(values) over a time window."""

    rate: float
    intercept: float
    r_squared: float
    n_points: int
    window: tuple[float, float]


def fit_growth_rate(
    series: TimeSeries, t_lo: float, t_hi: float, log_already: bool = False
) -> GrowthFit:
    """Least-squares slope of ln y(t) (or of y itself for entropy series)."""
    mask = (series.times >= t_lo) & (series.times <= t_hi)
    n = int(np.count_nonzero(mask))
    if n < 5:
        raise ValueError(f"only {n} samples in window [{t_lo}, {t_hi}]")
    x = series.times[mask]
    y = series.values[mask]
    if not log_already:
        if np.any(y <= 0):
            raise ValueError("series must be positive to fit ln y")
        y = np.log(y)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss if ss > 0 else 0.0
    return GrowthFit(rate=float(slope), intercept=float(intercept),
                     r_squared=r2, n_points=n, window=(t_lo, t_hi))
