"""Classical limit of the squeeze-driven Kerr oscillator.

H_cl(q, p) = K_cl [ (q^2 + p^2)^2 / 4 - xi_cl (q^2 - p^2) ]

is an inverted double well in phase space: two elliptic centers at
(+-sqrt(2 xi_cl), 0) with energy -K_cl xi_cl^2, a hyperbolic (saddle) point
at the origin with energy 0, and a figure-eight separatrix H_cl = 0 whose
lobes cross the q axis at +-2 sqrt(xi_cl).  The saddle's instability rate
lambda = 2 K_cl xi_cl is the classical Lyapunov exponent that governs the
early-time scrambling of the quantum model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate

from .errors import StepSizeError
from .fock import ModelParams


@dataclass(frozen=True)
class ClassicalParams:
    """Classical coefficients; related to the quantum ones by
    K = K_cl / n_eff^2 and xi = xi_cl * n_eff."""

    xi_cl: float
    k_cl: float = 1.0

    def __post_init__(self) -> None:
        if self.xi_cl < 0:
            raise ValueError(f"xi_cl must be >= 0, got {self.xi_cl}")
        if self.k_cl <= 0:
            raise ValueError(f"k_cl must be > 0, got {self.k_cl}")

    @classmethod
    def from_model(cls, params: ModelParams) -> "ClassicalParams":
        return cls(xi_cl=params.xi / params.n_eff,
                   k_cl=params.kerr_K * params.n_eff**2)


def h_cl(q, p, cp: ClassicalParams):
    """Classical Hamiltonian (vectorized over q, p)."""
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    r2 = q * q + p * p
    val = cp.k_cl * (0.25 * r2 * r2 - cp.xi_cl * (q * q - p * p))
    return val if val.ndim else float(val)


def grad_h(q, p, cp: ClassicalParams):
    """(dH/dq, dH/dp)."""
    q = np.asarray(q, dtype=float)
    p = np.asarray(p, dtype=float)
    r2 = q * q + p * p
    dq = cp.k_cl * q * (r2 - 2.0 * cp.xi_cl)
    dp = cp.k_cl * p * (r2 + 2.0 * cp.xi_cl)
    return dq, dp


def hamilton_rhs(q, p, cp: ClassicalParams):
    """Phase-space flow (dq/dt, dp/dt) = (dH/dp, -dH/dq)."""
    dq, dp = grad_h(q, p, cp)
    return dp, -dq


@dataclass(frozen=True)
class StationaryPoint:
    q: float
    p: float
    energy: float
    kind: str  # "center" | "saddle"


def stationary_points(cp: ClassicalParams) -> tuple[StationaryPoint, ...]:
    """All stationary points of the flow.

    xi_cl > 0: two centers (+-sqrt(2 xi_cl), 0) at -K_cl xi_cl^2 and the
    saddle at the origin at 0.  xi_cl = 0: the origin is the single center
    of the quartic bowl.
    """
    if cp.xi_cl == 0:
        return (StationaryPoint(0.0, 0.0, 0.0, "center"),)
    qc = math.sqrt(2.0 * cp.xi_cl)
    e_min = -cp.k_cl * cp.xi_cl**2
    return (
        StationaryPoint(-qc, 0.0, e_min, "center"),
        StationaryPoint(qc, 0.0, e_min, "center"),
        StationaryPoint(0.0, 0.0, 0.0, "saddle"),
    )


@dataclass(frozen=True)
class Linearization:
    """Jacobian of the flow at a phase-space point."""

    matrix: np.ndarray
    eigenvalues: np.ndarray
    classification: str  # "hyperbolic" | "elliptic" | "degenerate"
    stationary: bool


def linearize(q: float, p: float, cp: ClassicalParams) -> Linearization:
    """Linearized flow d/dt (dq, dp) = J (dq, dp).

    J = K_cl [[ 2 q p,              q^2 + 3 p^2 + 2 xi_cl ],
              [ 2 xi_cl - 3 q^2 - p^2,           -2 q p   ]]

    Traceless everywhere (area-preserving flow).  At the origin the
    eigenvalues are +-2 K_cl xi_cl (hyperbolic); at the centers they are
    +-4i K_cl xi_cl (elliptic).  The classification is only meaningful at a
    stationary point; elsewhere ``stationary`` is False.
    """
    K, xi = cp.k_cl, cp.xi_cl
    J = K * np.array(
        [
            [2.0 * q * p, q * q + 3.0 * p * p + 2.0 * xi],
            [2.0 * xi - 3.0 * q * q - p * p, -2.0 * q * p],
        ]
    )
    eig = np.linalg.eigvals(J)
    gq, gp = grad_h(q, p, cp)
    scale = cp.k_cl * max(1.0, cp.xi_cl**2)
    stationary = math.hypot(float(gq), float(gp)) <= 1e-12 * scale
    tol = 1e-12 * max(1.0, float(np.max(np.abs(eig))))
    if np.all(np.abs(eig) <= tol):
        kind = "degenerate"
    elif np.max(np.abs(eig.real)) > tol:
        kind = "hyperbolic"
    else:
        kind = "elliptic"
    return Linearization(matrix=J, eigenvalues=eig, classification=kind,
                         stationary=stationary)


def lyapunov_origin(cp: ClassicalParams) -> float:
    """Instability rate of the saddle, lambda = 2 K_cl xi_cl."""
    return 2.0 * cp.k_cl * cp.xi_cl


def saddle_mode_decomposition(q0: float, p0: float, cp: ClassicalParams, t):
    """Linearized motion near the saddle in its eigenmode basis.

    The repelling mode points along (1, 1) and the contracting mode along
    (-1, 1):  (q, p)(t) = c1 (1, 1) e^{+lambda t} + c2 (-1, 1) e^{-lambda t}
    with c1 = (q0 + p0)/2 and c2 = (p0 - q0)/2.  Returns (q(t), p(t))
    vectorized over t.
    """
    lam = lyapunov_origin(cp)
    t = np.asarray(t, dtype=float)
    c1 = 0.5 * (q0 + p0)
    c2 = 0.5 * (p0 - q0)
    grow = np.exp(lam * t)
    shrink = np.exp(-lam * t)
    q = c1 * grow - c2 * shrink
    p = c1 * grow + c2 * shrink
    return q, p


def separatrix_points(cp: ClassicalParams, samples: int = 400) -> np.ndarray:
    """Sample the H_cl = 0 separatrix, excluding the origin puncture.

    Returns an (n, 2) array of (q, p) pairs covering both lobes and both
    signs of p, including the q-axis intercepts at +-2 sqrt(xi_cl).
    """
    if cp.xi_cl <= 0:
        raise ValueError("separatrix requires xi_cl > 0")
    if samples < 8:
        raise ValueError("samples must be >= 8")
    xi = cp.xi_cl
    q_max = 2.0 * math.sqrt(xi)
    m = max(2, samples // 4)
    # open at the origin (puncture), closed at the intercept
    q = np.linspace(q_max / m, q_max, m)
    p2 = 2.0 * np.sqrt(xi * xi + 2.0 * xi * q * q) - 2.0 * xi - q * q
    p = np.sqrt(np.maximum(p2, 0.0))
    upper = np.column_stack([q, p])
    lower = np.column_stack([q[::-1], -p[::-1]])
    right = np.vstack([upper, lower])
    left = -right
    return np.vstack([right, left])


def contour_points(
    cp: ClassicalParams, energy: float, samples: int = 400
) -> np.ndarray:
    """Sample the level set H_cl(q, p) = energy.

    Solving the quadratic in p^2 gives the single non-negative branch
    p^2 = 2 R - q^2 - 2 xi with R = sqrt(xi^2 + 2 xi q^2 + E/K), so every
    contour is traced by scanning q and reflecting in both axes.  Below the
    wells (E < -K xi^2) the set is empty and a ValueError is raised; for
    E < 0 the contour splits into two lobes with q^2 between the inner and
    outer turning points 2 xi -+ 2 sqrt(xi^2 + E/K); for E >= 0 it is a
    single loop through the p axis.  Returns an (n, 2) array of (q, p)
    pairs ordered to walk each closed loop once.
    """
    if samples < 8:
        raise ValueError("samples must be >= 8")
    xi = cp.xi_cl
    e = energy / cp.k_cl
    disc = xi * xi + e
    if disc < 0:
        raise ValueError(
            f"energy {energy:.6g} lies below the well minimum {-cp.k_cl * xi * xi:.6g}"
        )
    m = max(4, samples // 4)
    if e < 0:
        q_inner = math.sqrt(2.0 * xi - 2.0 * math.sqrt(disc))
        q_outer = math.sqrt(2.0 * xi + 2.0 * math.sqrt(disc))
        q = np.linspace(q_inner, q_outer, m)
    else:
        q_outer = math.sqrt(2.0 * xi + 2.0 * math.sqrt(disc))
        q = np.linspace(0.0, q_outer, m)
    r = np.sqrt(xi * xi + 2.0 * xi * q * q + e)
    p = np.sqrt(np.maximum(2.0 * r - q * q - 2.0 * xi, 0.0))
    upper = np.column_stack([q, p])
    lower = np.column_stack([q[::-1], -p[::-1]])
    right = np.vstack([upper, lower])
    if e < 0:
        return np.vstack([right, -right])
    # single loop: continue through negative q instead of reflecting
    return np.vstack([right, -right[1:-1]])


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    q: np.ndarray
    p: np.ndarray
    energy: np.ndarray
    energy_drift: float


def integrate_trajectory(
    q0: float,
    p0: float,
    cp: ClassicalParams,
    t_max: float,
    dt: float,
    drift_limit: float = 1e-6,
) -> Trajectory:
    """Fixed-step RK4 integration of Hamilton's equations.

    The step is shrunk to land exactly on t_max.  Energy drift is tracked
    relative to max(|E0|, K_cl max(1, xi_cl^2)); above ``drift_limit`` a
    StepSizeError is raised.
    """
    if t_max <= 0 or dt <= 0:
        raise ValueError("t_max and dt must be positive")
    steps = max(1, int(math.ceil(t_max / dt - 1e-12)))
    h = t_max / steps
    times = np.linspace(0.0, t_max, steps + 1)
    qs = np.empty(steps + 1)
    ps = np.empty(steps + 1)
    qs[0], ps[0] = q0, p0

    def rhs(q, p):
        r2 = q * q + p * p
        return (cp.k_cl * p * (r2 + 2.0 * cp.xi_cl),
                -cp.k_cl * q * (r2 - 2.0 * cp.xi_cl))

    q, p = float(q0), float(p0)
    for i in range(steps):
        k1q, k1p = rhs(q, p)
        k2q, k2p = rhs(q + 0.5 * h * k1q, p + 0.5 * h * k1p)
        k3q, k3p = rhs(q + 0.5 * h * k2q, p + 0.5 * h * k2p)
        k4q, k4p = rhs(q + h * k3q, p + h * k3p)
        q += (h / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
        p += (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        qs[i + 1], ps[i + 1] = q, p
    energy = h_cl(qs, ps, cp)
    scale = max(abs(float(energy[0])), cp.k_cl * max(1.0, cp.xi_cl**2))
    drift = float(np.max(np.abs(energy - energy[0]))) / scale
    if not math.isfinite(drift):
        raise StepSizeError(
            f"orbit diverged (non-finite energy) with dt={dt:.3e}; reduce dt"
        )
    if drift > drift_limit:
        raise StepSizeError(
            f"energy drift {drift:.3e} exceeds {drift_limit:.0e}; reduce dt"
        )
    return Trajectory(times=times, q=qs, p=ps, energy=energy, energy_drift=drift)


# --- semiclassical density of states -------------------------------------

def _turning_squares(e_over_k: float, xi: float) -> tuple[float, float]:
    """Roots (in q^2) of p^2(q) = 0: q^4 - 4 xi q^2 - 4 e = 0."""
    disc = math.sqrt(xi * xi + e_over_k)
    return 2.0 * xi - 2.0 * disc, 2.0 * xi + 2.0 * disc


def semiclassical_dos(E: float, cp: ClassicalParams) -> float:
    """nu(E) = (1/2pi) \\int dq dp  delta(H_cl - E).

    Evaluated as a level-set line integral (1/pi) \\int dq / (K p R) over the
    q > 0 half of the energy shell, with R = sqrt(xi^2 + 2 xi q^2 + E/K) and
    p^2 = (q^2 - q_in^2)(q_out^2 - q^2) / (2R + 2 xi + q^2) factorized
    exactly so that the square-root turning-point substitution is analytic.
    Integrable log divergence at E = 0 (the saddle energy, rejected as
    singular input); nu -> 1/(2 K_cl xi_cl) at the well bottom (two wells of
    harmonic frequency 4 K_cl xi_cl).

    Counts both parity ladders: integrating nu over an interval approximates
    the total number of quantum levels there.
    """
    K, xi = cp.k_cl, cp.xi_cl
    e = E / K
    e_min = -(xi * xi)
    if e < e_min:
        return 0.0
    if e == e_min:
        return math.inf if xi == 0 else 1.0 / (2.0 * K * xi)
    if e == 0.0 and xi > 0:
        raise ValueError("E = 0 is the saddle energy: nu(E) diverges logarithmically")
    qin2, qout2 = _turning_squares(e, xi)
    q_out = math.sqrt(qout2)

    def R(q2: np.ndarray) -> np.ndarray:
        return np.sqrt(xi * xi + 2.0 * xi * q2 + e)

    def denom(q2: np.ndarray) -> np.ndarray:
        return 2.0 * R(q2) + 2.0 * xi + q2

    if e < 0.0:
        q_in = math.sqrt(qin2)
        a, b = q_in, q_out
    else:
        a, b = 0.0, q_out
    mid = 0.5 * (a + b)

    def integrand(q: np.ndarray) -> np.ndarray:
        q2 = q * q
        p2 = (q2 - qin2) * (qout2 - q2) / denom(q2)
        return 1.0 / (K * np.sqrt(p2) * R(q2))

    total = 0.0
    # left piece [a, mid]; singular endpoint only for the two-lobe case
    if e < 0.0:
        def g_left(t: np.ndarray) -> np.ndarray:
            q = a + t * t
            q2 = q * q
            return 2.0 * np.sqrt(denom(q2)) / (
                K * R(q2) * np.sqrt((q + a) * (qout2 - q2))
            )

        val, _ = scipy.integrate.quad(
            g_left, 0.0, math.sqrt(mid - a), epsabs=1e-12, epsrel=1e-10, limit=200
        )
        total += val
    else:
        val, _ = scipy.integrate.quad(
            integrand, a, mid, epsabs=1e-12, epsrel=1e-10, limit=200
        )
        total += val

    # right piece [mid, b]; q_out is always a turning point
    def g_right(t: np.ndarray) -> np.ndarray:
        q = b - t * t
        q2 = q * q
        return 2.0 * np.sqrt(denom(q2)) / (
            K * R(q2) * np.sqrt((q2 - qin2) * (b + q))
        )

    val, _ = scipy.integrate.quad(
        g_right, 0.0, math.sqrt(b - mid), epsabs=1e-12, epsrel=1e-10, limit=200
    )
    total += val
    return total / math.pi


def dos_curve(energies: np.ndarray, cp: ClassicalParams) -> np.ndarray:
    """semiclassical_dos evaluated on an array (0 below the well bottom)."""
    return np.array([semiclassical_dos(float(E), cp) for E in energies])
