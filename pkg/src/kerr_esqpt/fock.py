"""Fock-space building blocks for the squeeze-driven Kerr oscillator.

The model is a single bosonic mode with a Kerr nonlinearity K and a
two-photon (squeezing) drive of amplitude epsilon_2 = K * xi.  In the frame
where the spectrum is bounded below ("main_text" convention, hbar = 1),

    H / K = n(n-1) - xi * (a^dag^2 + a^2),

which couples Fock states |n> and |n+2> only, so photon-number parity
(-1)^n is conserved.  The "lab_frame" convention is the global negation of
the same matrix.  Energies are measured in units of K throughout; times in
units of 1/K.

Quadratures follow a = sqrt(n_eff/2) (q + i p), so [q, p] = i / n_eff and
1/n_eff plays the role of an effective Planck constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .errors import KerrFreePointError, ParityViolationError, TruncationError

SIGN_CONVENTIONS = ("main_text", "lab_frame")

# Tail mass beyond the truncation above which a state cannot be trusted.
TAIL_MASS_LIMIT = 1e-8


@dataclass(frozen=True)
class ModelParams:
    """Model parameters.

    xi        : dimensionless squeezing strength epsilon_2 / K  (>= 0)
    dim_N     : Fock-space truncation (>= 4)
    kerr_K    : Kerr coefficient, sets the energy unit (> 0)
    n_eff     : effective size parameter; 1/n_eff acts as hbar (> 0)
    sign_convention : "main_text" (bounded below) or "lab_frame" (negated)
    """

    xi: float
    dim_N: int
    kerr_K: float = 1.0
    n_eff: float = 1.0
    sign_convention: str = "main_text"

    def __post_init__(self) -> None:
        if not isinstance(self.dim_N, (int, np.integer)):
            raise TruncationError(f"dim_N must be an integer, got {self.dim_N!r}")
        if self.dim_N < 4:
            raise TruncationError(f"dim_N must be >= 4, got {self.dim_N}")
        if self.xi < 0:
            raise ValueError(f"xi must be >= 0, got {self.xi}")
        if self.kerr_K <= 0:
            raise ValueError(f"kerr_K must be > 0, got {self.kerr_K}")
        if self.n_eff <= 0:
            raise ValueError(f"n_eff must be > 0, got {self.n_eff}")
        if self.sign_convention not in SIGN_CONVENTIONS:
            raise ValueError(
                f"sign_convention must be one of {SIGN_CONVENTIONS}, "
                f"got {self.sign_convention!r}"
            )

    @property
    def epsilon2(self) -> float:
        """Two-photon drive amplitude epsilon_2 = K * xi."""
        return self.kerr_K * self.xi


@dataclass(frozen=True)
class MicroscopicParams:
    """Third/fourth-rank expansion coefficients of a driven nonlinear circuit.

    g3, g4  : third- and fourth-order mode nonlinearities
    omega_d : drive frequency (set to twice the effective mode frequency)
    Omega_d : drive amplitude
    """

    g3: float
    g4: float
    omega_d: float
    Omega_d: float

    def __post_init__(self) -> None:
        if self.omega_d <= 0:
            raise ValueError(f"omega_d must be > 0, got {self.omega_d}")


@dataclass(frozen=True)
class LadderOps:
    """Annihilation/creation/number and quadrature matrices on the truncated space."""

    a: np.ndarray
    a_dag: np.ndarray
    n_op: np.ndarray
    q_op: np.ndarray
    p_op: np.ndarray


def build_hamiltonian(params: ModelParams) -> np.ndarray:
    """Hamiltonian matrix in the Fock basis, in units where hbar = 1.

    Matrix elements (main_text convention):

        <n|H|n>     = K n(n-1)
        <n+2|H|n>   = <n|H|n+2> = -K xi sqrt((n+1)(n+2))

    Returns a real symmetric (dim_N, dim_N) array; "lab_frame" returns the
    negated matrix.  Only n <-> n and n <-> n+-2 entries are populated, so
    photon parity is conserved exactly.
    """
    N = params.dim_N
    K = params.kerr_K
    n = np.arange(N, dtype=float)
    H = np.zeros((N, N))
    H[np.diag_indices(N)] = K * n * (n - 1.0)
    m = np.arange(N - 2, dtype=float)
    off = -K * params.xi * np.sqrt((m + 1.0) * (m + 2.0))
    rows = np.arange(N - 2)
    H[rows, rows + 2] = off
    H[rows + 2, rows] = off
    if params.sign_convention == "lab_frame":
        H = -H
    return H


def ladder_matrices(params: ModelParams) -> LadderOps:
    """Ladder and quadrature operators with <n|a|n+1> = sqrt(n+1).

    q = (a + a^dag) / sqrt(2 n_eff),  p = i (a^dag - a) / sqrt(2 n_eff),
    so that [q, p] = i / n_eff on the interior of the truncated space.
    """
    N = params.dim_N
    a = np.diag(np.sqrt(np.arange(1, N, dtype=float)), k=1)
    a_dag = a.T.copy()
    n_op = np.diag(np.arange(N, dtype=float))
    s = 1.0 / math.sqrt(2.0 * params.n_eff)
    q_op = s * (a + a_dag).astype(complex)
    p_op = 1j * s * (a_dag - a)
    return LadderOps(a=a, a_dag=a_dag, n_op=n_op, q_op=q_op, p_op=p_op)


def parity_operator(dim_N: int) -> np.ndarray:
    """Diagonal of (-1)^n as a length-dim_N vector of +-1."""
    v = np.ones(dim_N)
    v[1::2] = -1.0
    return v


@dataclass(frozen=True)
class ParityBlocks:
    """Even/odd parity blocks of a parity-conserving matrix."""

    even: np.ndarray
    odd: np.ndarray
    even_indices: np.ndarray
    odd_indices: np.ndarray

    def reassemble(self) -> np.ndarray:
        """Embed both blocks back into the full Fock-ordered matrix."""
        N = len(self.even_indices) + len(self.odd_indices)
        full = np.zeros((N, N), dtype=np.result_type(self.even, self.odd))
        full[np.ix_(self.even_indices, self.even_indices)] = self.even
        full[np.ix_(self.odd_indices, self.odd_indices)] = self.odd
        return full


def parity_split(H: np.ndarray) -> ParityBlocks:
    """Split a parity-conserving matrix into its even/odd Fock-index blocks.

    Raises ParityViolationError if any cross-parity entry exceeds
    1e-14 * max|H|.
    """
    H = np.asarray(H)
    N = H.shape[0]
    if H.shape != (N, N):
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    even_idx = np.arange(0, N, 2)
    odd_idx = np.arange(1, N, 2)
    cross = H[np.ix_(even_idx, odd_idx)]
    scale = max(1.0, float(np.max(np.abs(H)))) if H.size else 1.0
    worst = float(np.max(np.abs(cross))) if cross.size else 0.0
    if worst > 1e-14 * scale:
        raise ParityViolationError(
            f"cross-parity coupling {worst:.3e} exceeds 1e-14 * max|H| = {1e-14 * scale:.3e}"
        )
    return ParityBlocks(
        even=H[np.ix_(even_idx, even_idx)].copy(),
        odd=H[np.ix_(odd_idx, odd_idx)].copy(),
        even_indices=even_idx,
        odd_indices=odd_idx,
    )


def coherent_tail_mass(q: float, p: float, params: ModelParams) -> float:
    """Probability mass of the untruncated coherent state beyond dim_N - 1."""
    nbar = 0.5 * params.n_eff * (q * q + p * p)
    if nbar == 0.0:
        return 0.0
    return float(poisson.sf(params.dim_N - 1, nbar))


def coherent_state(q: float, p: float, params: ModelParams) -> np.ndarray:
    """Glauber coherent state centred at phase-space point (q, p).

    alpha = sqrt(n_eff/2) (q + i p); amplitudes are evaluated in the log
    domain, C_n = exp(n ln|alpha| - |alpha|^2/2 - lgamma(n+1)/2) e^{i n arg alpha},
    then renormalised on the truncated space.  (0, 0) returns the Fock vacuum
    exactly.  Raises TruncationError if the untruncated tail mass beyond the
    truncation exceeds 1e-8.
    """
    N = params.dim_N
    alpha = math.sqrt(params.n_eff / 2.0) * complex(q, p)
    if alpha == 0:
        out = np.zeros(N, dtype=complex)
        out[0] = 1.0
        return out
    tail = coherent_tail_mass(q, p, params)
    if tail > TAIL_MASS_LIMIT:
        raise TruncationError(
            f"coherent state at (q={q}, p={p}) has tail mass {tail:.3e} beyond "
            f"dim_N={N}; enlarge the truncation (limit {TAIL_MASS_LIMIT:.0e})"
        )
    n = np.arange(N, dtype=float)
    log_mag = n * math.log(abs(alpha)) - 0.5 * abs(alpha) ** 2 - 0.5 * gammaln(n + 1.0)
    phase = n * np.angle(alpha)
    amps = np.exp(log_mag) * np.exp(1j * phase)
    amps /= np.linalg.norm(amps)
    return amps


def microscopic_map(mp: MicroscopicParams) -> dict[str, float]:
    """Effective (K, epsilon2, xi) from microscopic circuit parameters.

    K        = -(3/2) g4 + 20 g3^2 / (3 omega_d)
    epsilon2 = 4 g3 Omega_d / (3 omega_d)
    xi       = epsilon2 / K

    Raises KerrFreePointError when the g3 and g4 contributions cancel (K = 0),
    where xi diverges and the reduced model does not apply.
    """
    K = -1.5 * mp.g4 + 20.0 * mp.g3**2 / (3.0 * mp.omega_d)
    epsilon2 = 4.0 * mp.g3 * mp.Omega_d / (3.0 * mp.omega_d)
    if K == 0.0:
        raise KerrFreePointError(
            "Kerr-free point: g3/g4 contributions cancel, xi = epsilon2/K undefined"
        )
    return {"K": K, "epsilon2": epsilon2, "xi": epsilon2 / K}


@dataclass(frozen=True)
class ConvergenceReport:
    """Result of a truncation doubling check."""

    dim_low: int
    dim_high: int
    drift: float
    converged: bool
    detail: str


def _replace_dim(params: ModelParams, dim: int) -> ModelParams:
    return ModelParams(
        xi=params.xi,
        dim_N=dim,
        kerr_K=params.kerr_K,
        n_eff=params.n_eff,
        sign_convention=params.sign_convention,
    )


def truncation_check(
    params: ModelParams,
    levels: int | None = None,
    coherent: tuple[float, float] | None = None,
) -> ConvergenceReport:
    """Check whether dim_N is large enough for a spectral or state request.

    For ``levels=k`` the lowest k eigenvalues are recomputed at
    dim_N + max(32, dim_N // 8) and the maximum relative drift is reported.
    For ``coherent=(q, p)`` the report carries the untruncated tail mass
    beyond dim_N.  Either way the request is flagged non-converged when the
    drift exceeds 1e-8.
    """
    if (levels is None) == (coherent is None):
        raise ValueError("pass exactly one of levels= or coherent=")
    delta = max(32, params.dim_N // 8)
    dim_high = params.dim_N + delta
    if coherent is not None:
        qc, pc = coherent
        tail = coherent_tail_mass(qc, pc, params)
        return ConvergenceReport(
            dim_low=params.dim_N,
            dim_high=dim_high,
            drift=tail,
            converged=tail <= TAIL_MASS_LIMIT,
            detail=f"coherent ({qc}, {pc}): tail mass {tail:.3e} beyond dim_N",
        )
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    if 2 * levels > params.dim_N:
        raise TruncationError(
            f"cannot converge {levels} levels with dim_N={params.dim_N}"
        )
    from .spectral import diagonalize  # deferred to avoid an import cycle

    lo = diagonalize(_replace_dim(params, params.dim_N))
    hi = diagonalize(_replace_dim(params, dim_high))
    e_lo = lo.eigenvalues[:levels]
    e_hi = hi.eigenvalues[:levels]
    denom = np.maximum(np.abs(e_hi), params.kerr_K)
    drift = float(np.max(np.abs(e_lo - e_hi) / denom))
    return ConvergenceReport(
        dim_low=params.dim_N,
        dim_high=dim_high,
        drift=drift,
        converged=drift <= 1e-8,
        detail=f"lowest {levels} levels: max relative drift {drift:.3e}",
    )


def is_hermitian(M: np.ndarray, rtol: float = 1e-12) -> bool:
    """True when max|M - M^dag| <= rtol * max(1, max|M|)."""
    M = np.asarray(M)
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    return float(np.max(np.abs(M - M.conj().T))) <= rtol * scale
