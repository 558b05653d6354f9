"""Return amplitudes, spectral form factors and Krylov Gram matrices.

Time evolution is exact phase evolution in the eigenbasis of H_B.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidDimensionError,
    InvalidParameterError,
    MalformedInputError,
    PairingError,
)
from .spectra import Spectrum, heisenberg_time
from .states import StateProfile

HERMITIAN_TOL = 1e-12
DIAGONAL_TOL = 1e-12
PSD_TOL = 1e-10


def _check_pair(s: Spectrum, phi: StateProfile):
    if s.d_B != phi.d_B:
        raise PairingError(f"spectrum has {s.d_B} levels but profile has {phi.d_B}")


def _amplitudes(energies, weights, times):
    times = np.asarray(times, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(times, energies))
    a = phases @ weights
    # normalized weights: the t = 0 value is exactly one, not a rounded sum
    return np.where(times == 0, 1.0 + 0j, a)


def return_amplitude(s: Spectrum, phi: StateProfile, t):
    """<phi| exp(-i H_B t) |phi> = sum_n |phi_n|^2 exp(-i E_n t).

    Accepts a scalar or an array of times.
    """
    _check_pair(s, phi)
    a = _amplitudes(s.energies, phi.weights, t)
    return complex(a) if np.ndim(a) == 0 else a


def return_probability(s: Spectrum, phi: StateProfile, t):
    a = return_amplitude(s, phi, t)
    return float(abs(a) ** 2) if np.ndim(a) == 0 else np.abs(a) ** 2


def sff(s: Spectrum, t):
    """Spectral form factor |sum_n exp(-i E_n t)|^2 / d_B^2."""
    w = np.full(s.d_B, 1.0 / s.d_B)
    a = _amplitudes(s.energies, w, t)
    return float(abs(a) ** 2) if np.ndim(a) == 0 else np.abs(a) ** 2


@dataclass(frozen=True)
class ReturnSeries:
    times: np.ndarray
    amplitudes: np.ndarray
    probabilities: np.ndarray


def return_series(s: Spectrum, phi: StateProfile, times) -> ReturnSeries:
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0):
        raise InvalidParameterError("times must be non-negative")
    a = np.atleast_1d(return_amplitude(s, phi, times))
    return ReturnSeries(times, a, np.clip(np.abs(a) ** 2, 0.0, 1.0))


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Overlaps G_jk = <K_j|K_k> of d_A unit vectors.

    ``toeplitz`` records whether G_jk depends only on k - j, which holds for
    the single-charge protocol. Construction validates Hermiticity, the unit
    diagonal (then stored exactly) and positive semidefiniteness.
    """

    entries: np.ndarray
    t0: float = float("nan")
    toeplitz: bool = False

    def __post_init__(self):
        G = np.array(self.entries, dtype=complex)
        validate_gram(G, toeplitz=self.toeplitz)
        # unit vectors: store the diagonal exactly so Tr(G - 1) vanishes identically
        np.fill_diagonal(G, 1.0)
        G.flags.writeable = False
        object.__setattr__(self, "entries", G)

    @property
    def d_A(self) -> int:
        return int(self.entries.shape[0])

    def eigenvalues(self) -> np.ndarray:
        """Sorted eigenvalues, with round-off negatives clipped to zero."""
        return np.clip(np.linalg.eigvalsh(self.entries), 0.0, None)


def validate_gram(G, toeplitz=False):
    G = np.asarray(G)
    if G.ndim != 2 or G.shape[0] != G.shape[1] or G.shape[0] < 1:
        raise MalformedInputError("Gram matrix must be square and non-empty")
    if not np.all(np.isfinite(G)):
        raise MalformedInputError("Gram matrix has non-finite entries")
    if np.max(np.abs(G - G.conj().T)) > HERMITIAN_TOL:
        raise MalformedInputError("Gram matrix is not Hermitian")
    if np.max(np.abs(np.diag(G) - 1.0)) > DIAGONAL_TOL:
        raise MalformedInputError("Gram matrix diagonal is not 1")
    if toeplitz:
        d = G.shape[0]
        for k in range(1, d):
            if np.max(np.abs(np.diagonal(G, k) - G[0, k])) > HERMITIAN_TOL:
                raise MalformedInputError("Gram matrix is not Toeplitz")
    if np.linalg.eigvalsh((G + G.conj().T) / 2)[0] < -PSD_TOL:
        raise MalformedInputError("Gram matrix is not positive semidefinite")


def _check_t0_dA(t0, d_A):
    if not t0 > 0:
        raise InvalidParameterError("t0 must be positive")
    if int(d_A) != d_A or d_A < 1:
        raise InvalidDimensionError("d_A must be a positive integer")


def toeplitz_hermitian(first_row) -> np.ndarray:
    """Hermitian Toeplitz matrix with G[j, k] = first_row[k - j] for k >= j."""
    c = np.asarray(first_row, dtype=complex)
    d = c.size
    idx = np.arange(d)[None, :] - np.arange(d)[:, None]
    G = np.where(idx >= 0, c[np.abs(idx)], np.conj(c[np.abs(idx)]))
    return G


def krylov_gram(s: Spectrum, phi: StateProfile, t0: float, d_A: int) -> GramMatrix:
    """Gram matrix of the Krylov set {U^n phi}, n < d_A, with U = exp(-i H_B t0).

    G_jk = a((k - j) t0) where a is the return amplitude. The d_A amplitudes
    are computed once and the Toeplitz matrix filled from them.
    """
    _check_pair(s, phi)
    _check_t0_dA(t0, d_A)
    a = _amplitudes(s.energies, phi.weights, np.arange(int(d_A)) * t0)
    a[0] = 1.0  # exact: the profile is normalized
    return GramMatrix(toeplitz_hermitian(a), t0=float(t0), toeplitz=True)


def krylov_vectors(s: Spectrum, phi: StateProfile, t0: float, d_A: int) -> np.ndarray:
    """Array of shape (d_A, d_B); row n holds phi_m exp(-i E_m n t0)."""
    _check_pair(s, phi)
    _check_t0_dA(t0, d_A)
    n = np.arange(int(d_A))
    return np.exp(-1j * t0 * np.multiply.outer(n, s.energies)) * phi.amplitudes[None, :]


def gram_from_vectors(vectors, t0: float = float("nan")) -> GramMatrix:
    """Gram matrix <v_j|v_k> of unit vectors given as rows."""
    V = np.asarray(vectors, dtype=complex)
    G = V.conj() @ V.T
    G = (G + G.conj().T) / 2
    return GramMatrix(G, t0=t0, toeplitz=False)


def default_t0(s: Spectrum, d_A: int) -> float:
    """Default evolution step for a d_A-element Krylov set.

    ``2 t_H / d_B``, i.e. two inverse bandwidths: past the initial smooth
    decay of the return probability, with the whole window ``[t0, d_A t0]``
    a small fraction of t_H. When d_A is large enough that this would push
    ``d_A t0`` beyond ``t_H / 2``, the step shrinks to ``t_H / (2 d_A)``.
    """
    _check_t0_dA(1.0, d_A)
    tH = heisenberg_time(s)
    return min(2.0 * tH / s.d_B, 0.5 * tH / d_A)
