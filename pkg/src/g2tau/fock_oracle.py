"""Truncated Fock-space ground truth for the amplifier photon statistics.

Everything the closed forms in :mod:`g2tau.gaussian_core` predict is rebuilt
here by brute force: dense matrices on the lowest `dim` number states, the
state as an explicit density matrix, the evolution as a matrix exponential,
and every expectation as a trace.  Nothing is shared with the closed-form
path beyond the parameter dataclasses (the closed-form displacement is only
consulted to *size* the working space, never for the evolved values), so
agreement between the two is a real cross-check rather than a tautology.

All matrix exponentials go through eigendecompositions so the resulting
operators are unitary to roundoff.  The state preparation and the evolved
operator are both built in a working space enlarged enough that squeeze
stretch and displacement stay inside the basis, then cropped to the
requested dimension; the remaining error is set by the state's own Fock
tail, which is what convergence_check measures.  The
heavy intermediates (ladder pair, density matrix, Hamiltonian eigensystem,
evolved annihilation operator) are memoized on the frozen parameter
dataclasses; the public functions return defensive copies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gaussian_core import (
    GaussianStateParams,
    UndefinedCoherenceError,
    alpha_of_tau,
    r_of_tau,
)
from .param_map import HamiltonianParams

__all__ = [
    "TruncationReport",
    "ladder_operators",
    "displacement",
    "squeeze",
    "thermal_rho",
    "gaussian_rho",
    "hamiltonian_matrix",
    "heisenberg_a_matrix",
    "mean_n_oracle",
    "g2_oracle",
    "convergence_check",
]

# Tolerated imaginary residue on traces that are real by Hermiticity.
_IMAG_TOL = 1e-8


@dataclass(frozen=True)
class TruncationReport:
    """Outcome of a dimension-doubling convergence probe.

    dim is the base truncation; g2_rel_change is |g2(2*dim) - g2(dim)| / |g2(2*dim)|;
    tail_mass is the population of the top 10% of the base-dim number basis.
    """

    dim: int
    tail_mass: float
    converged: bool
    g2_rel_change: float


def _require_dim(dim: int) -> None:
    if dim < 2:
        raise ValueError(f"truncation dimension must be >= 2, got {dim}")


@lru_cache(maxsize=64)
def _ladder(dim: int) -> tuple[np.ndarray, np.ndarray]:
    _require_dim(dim)
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)
    adag = a.conj().T
    a.setflags(write=False)
    adag.setflags(write=False)
    return a, adag


def ladder_operators(dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Annihilation and creation matrices on the lowest `dim` number states."""
    a, adag = _ladder(dim)
    return a.copy(), adag.copy()


def _expi_hermitian(h: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """exp(1j * scale * h) for Hermitian h, via eigendecomposition."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * scale * w)) @ v.conj().T


# Dense eigensystems above this size cost minutes, not seconds.  The working
# dimension is clipped here; whatever truncation error that leaves behind is
# reported by convergence_check rather than silently absorbed.
_WORKING_DIM_CAP = 3072


def _working_dim(dim: int, stretch_r: float, shift_mag: float) -> int:
    """Fock dimension needed to build accurately before cropping to `dim`.

    A squeeze stretches the occupied phase-space radius (~sqrt(dim)) by
    e^{stretch_r} and a displacement shifts it, so the lowest-dim block of
    the squeezed-and-displaced object draws on roughly
    (sqrt(dim) e^{stretch_r} + |shift|)² number states; a few vacuum widths
    of margin absorb the Gaussian edges.  Stretch and shift are quantized
    upward so nearby parameters reuse one cached build.
    """
    stretch = math.exp(min(0.4 * math.ceil(stretch_r / 0.4 - 1e-9), 1.2))
    pad = 4.0 + 2.0 * min(math.ceil(shift_mag / 2.0 - 1e-9), 6)
    radius = math.sqrt(dim) * stretch + pad
    working = 32 * math.ceil(radius * radius / 32.0)
    return max(dim, min(working, max(_WORKING_DIM_CAP, dim)))


@lru_cache(maxsize=16)
def _displacement(alpha: complex, dim: int) -> np.ndarray:
    a, adag = _ladder(dim)
    gen = alpha * adag - np.conjugate(alpha) * a  # anti-Hermitian
    out = _expi_hermitian(-1j * gen)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=16)
def _squeeze(xi: complex, dim: int) -> np.ndarray:
    a, adag = _ladder(dim)
    gen = 0.5 * np.conjugate(xi) * (a @ a) - 0.5 * xi * (adag @ adag)
    out = _expi_hermitian(-1j * gen)
    out.setflags(write=False)
    return out


def displacement(alpha: complex, dim: int) -> np.ndarray:
    """Displacement matrix D(alpha) = exp(alpha a† - alpha* a)."""
    return _displacement(complex(alpha), dim).copy()


def squeeze(xi: complex, dim: int) -> np.ndarray:
    """Squeeze matrix S(xi) = exp((xi*/2) a² - (xi/2) a†²)."""
    return _squeeze(complex(xi), dim).copy()


def _thermal_weights(nbar: float, dim: int) -> np.ndarray:
    _require_dim(dim)
    if nbar < 0.0:
        raise ValueError(f"nbar must be >= 0, got {nbar}")
    weights = (nbar / (nbar + 1.0)) ** np.arange(dim)
    return weights / weights.sum()


def thermal_rho(nbar: float, dim: int) -> np.ndarray:
    """Truncated-and-renormalized thermal density matrix with mean occupation nbar."""
    return np.diag(_thermal_weights(nbar, dim)).astype(complex)


@lru_cache(maxsize=32)
def _gaussian_rho(state: GaussianStateParams, dim: int) -> np.ndarray:
    # Prepare in a working space wide enough for the squeeze stretch and the
    # displacement, then keep the lowest-dim block: the same D S rho S† D†
    # product built directly at `dim` has its edge rows corrupted by the
    # truncated operator products.
    big = _working_dim(dim, state.xi.r, abs(state.alpha))
    prep_top = _displacement(state.alpha, big)[:dim, :] @ _squeeze(state.xi.xi, big)
    rho = (prep_top * _thermal_weights(state.nbar, big)) @ prep_top.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    rho.setflags(write=False)
    return rho


def gaussian_rho(state: GaussianStateParams, dim: int) -> np.ndarray:
    """Density matrix D S rho_thermal S† D†, re-hermitized and renormalized.

    Computed as the lowest-dim block of a wider build, so the entries agree
    with the infinite-dimensional state up to its own tail mass rather than
    being polluted by truncated operator products.
    """
    return _gaussian_rho(state, dim).copy()


def hamiltonian_matrix(params: HamiltonianParams, dim: int) -> np.ndarray:
    """Amplifier Hamiltonian c a†² + c* a² + b a + b* a† as a dense matrix."""
    _require_dim(dim)
    n = np.arange(dim)
    h = np.zeros((dim, dim), dtype=complex)
    # b a + b* a†: entries sqrt(n+1) on the first off-diagonals.
    single = np.sqrt(n[1:].astype(float))
    h[n[:-1], n[1:]] = params.b * single
    h[n[1:], n[:-1]] = np.conjugate(params.b) * single
    # c a†² + c* a²: entries sqrt((n+1)(n+2)) on the second off-diagonals.
    pair = np.sqrt((n[:-2] + 1.0) * (n[:-2] + 2.0))
    h[n[2:], n[:-2]] = params.c * pair
    h[n[:-2], n[2:]] = np.conjugate(params.c) * pair
    return h


@lru_cache(maxsize=8)
def _hamiltonian_eig(params: HamiltonianParams, dim: int) -> tuple[np.ndarray, np.ndarray]:
    w, v = np.linalg.eigh(hamiltonian_matrix(params, dim))
    w.setflags(write=False)
    v.setflags(write=False)
    return w, v


@lru_cache(maxsize=16)
def _a_of_tau(params: HamiltonianParams, tau: float, dim: int) -> np.ndarray:
    if tau < 0.0:
        raise ValueError(f"delay must be >= 0, got {tau}")
    big = _working_dim(
        dim,
        r_of_tau(params.c, tau),
        abs(alpha_of_tau(params.b, params.c, tau)),
    )
    w, v = _hamiltonian_eig(params, big)
    # Rows 0..dim of U = V e^{i tau w} V†; the crop of U a U† only needs them.
    u_top = (v[:dim, :] * np.exp(1j * tau * w)) @ v.conj().T
    # u_top @ a: the annihilation matrix shifts columns and scales by sqrt(n).
    ua = np.zeros_like(u_top)
    ua[:, 1:] = u_top[:, :-1] * np.sqrt(np.arange(1.0, big))
    a_tau = ua @ u_top.conj().T
    a_tau.setflags(write=False)
    return a_tau


def heisenberg_a_matrix(params: HamiltonianParams, tau: float, dim: int) -> np.ndarray:
    """Evolved annihilation operator e^{iH tau} a e^{-iH tau} on the lowest `dim` states.

    The conjugation runs in an enlarged working space sized so the squeeze
    stretch and displacement of the flow stay inside the basis, and the
    result is cropped back to `dim`; without the headroom the top of the
    block would be corrupted by truncation.
    """
    return _a_of_tau(params, tau, dim).copy()


def _real_trace(value: complex, what: str) -> float:
    if abs(value.imag) > _IMAG_TOL:
        raise ArithmeticError(
            f"{what} should be real, got imaginary residue {value.imag:g}"
        )
    return value.real


def mean_n_oracle(
    state: GaussianStateParams, params: HamiltonianParams, tau: float, dim: int
) -> float:
    """Tr[rho a†(tau) a(tau)] on the truncated space."""
    rho = _gaussian_rho(state, dim)
    a_tau = _a_of_tau(params, tau, dim)
    value = np.einsum("ij,ji->", rho, a_tau.conj().T @ a_tau)
    return _real_trace(complex(value), "mean photon number")


def g2_oracle(
    state: GaussianStateParams, params: HamiltonianParams, tau: float, dim: int
) -> float:
    """Tr[rho a† a†(tau) a(tau) a] / (Tr[rho a† a] Tr[rho a†(tau) a(tau)])."""
    if state.is_vacuum:
        raise UndefinedCoherenceError(
            "g2 is undefined for the vacuum state (zero mean photon number)"
        )
    rho = _gaussian_rho(state, dim)
    a, adag = _ladder(dim)
    a_tau = _a_of_tau(params, tau, dim)
    n_tau_op = a_tau.conj().T @ a_tau

    numerator = _real_trace(
        complex(np.einsum("ij,ji->", rho, adag @ n_tau_op @ a)),
        "g2 numerator",
    )
    mean_0 = _real_trace(
        complex(np.einsum("ij,ji->", rho, adag @ a)), "initial photon number"
    )
    mean_tau = _real_trace(
        complex(np.einsum("ij,ji->", rho, n_tau_op)), "delayed photon number"
    )
    if mean_0 == 0.0 or mean_tau == 0.0:
        # a state indistinguishable from vacuum at this precision
        raise UndefinedCoherenceError(
            "g2 is undefined for the vacuum state (zero mean photon number)"
        )
    return numerator / (mean_0 * mean_tau)


def _tail_mass(rho: np.ndarray) -> float:
    start = math.ceil(0.9 * rho.shape[0])
    return float(np.sum(np.diagonal(rho)[start:]).real)


def convergence_check(
    state: GaussianStateParams, params: HamiltonianParams, tau: float, dim: int
) -> TruncationReport:
    """Probe truncation adequacy by doubling the dimension.

    Converged means the relative g2 change under doubling stays below 1e-6
    and the top 10% of the base-dim number basis holds less than 1e-8 of the
    population.
    """
    g2_base = g2_oracle(state, params, tau, dim)
    g2_doubled = g2_oracle(state, params, tau, 2 * dim)
    rel_change = abs(g2_doubled - g2_base) / abs(g2_doubled)
    tail = _tail_mass(_gaussian_rho(state, dim))
    return TruncationReport(
        dim=dim,
        tail_mass=tail,
        converged=(rel_change < 1e-6 and tail < 1e-8),
        g2_rel_change=rel_change,
    )
