"""Eigenvalue spectra for the ergodic, Poisson and regular cases.

All energies are in natural units (hbar = 1). A :class:`Spectrum` is the
only description of the complex system's Hamiltonian that downstream code
needs; the eigenbasis enters only through the initial-state amplitudes.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    DegenerateSpectrumError,
    InvalidDimensionError,
    InvalidParameterError,
    SymmetryViolationError,
)
from .seeds import make_rng

ENSEMBLES = ("gue", "poisson", "picket_fence", "custom")

UNFOLD_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Sorted real eigenvalues plus ensemble metadata."""

    energies: np.ndarray
    ensemble: str = "custom"
    unfolded: bool = False

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        if e.ndim != 1 or e.size < 1:
            raise InvalidDimensionError("energies must be a non-empty 1d array")
        if not np.all(np.isfinite(e)):
            raise InvalidParameterError("energies must be finite")
        if np.any(np.diff(e) < 0):
            raise InvalidParameterError("energies must be sorted non-decreasing")
        if self.ensemble not in ENSEMBLES:
            raise InvalidParameterError(f"unknown ensemble tag {self.ensemble!r}")
        e = e.copy()
        e.flags.writeable = False
        object.__setattr__(self, "energies", e)

    @property
    def d_B(self) -> int:
        return int(self.energies.size)

    @property
    def width(self) -> float:
        return float(self.energies[-1] - self.energies[0])

    @property
    def mean_spacing(self) -> float:
        if self.d_B < 2:
            raise InvalidDimensionError("mean spacing needs at least two levels")
        return self.width / (self.d_B - 1)

    def __len__(self):
        return self.d_B

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return (
            self.ensemble == other.ensemble
            and self.unfolded == other.unfolded
            and np.array_equal(self.energies, other.energies)
        )

    __hash__ = None


def _check_dim(d_B, minimum):
    if int(d_B) != d_B or d_B < minimum:
        raise InvalidDimensionError(f"d_B must be an integer >= {minimum}, got {d_B}")
    return int(d_B)


def gue_matrix(d_B: int, rng: np.random.Generator) -> np.ndarray:
    """One GUE draw with unit-variance entries (semicircle radius 2*sqrt(d_B))."""
    a = rng.standard_normal((d_B, d_B)) + 1j * rng.standard_normal((d_B, d_B))
    # diagonal: Re(a_ii) ~ N(0, 1); off-diagonal: E|h_ij|^2 = (2 + 2) / 4 = 1
    return (a + a.conj().T) / 2


# 200 realizations x 3 sizes of a sweep must fit, so profiles share spectra
@lru_cache(maxsize=2048)
def _gue_eigenvalues(d_B: int, seed: int) -> np.ndarray:
    ev = np.linalg.eigvalsh(gue_matrix(d_B, make_rng(seed)))
    ev.flags.writeable = False
    return ev


def sample_gue_spectrum(d_B: int, rng_seed: int) -> Spectrum:
    """Eigenvalues of one GUE matrix, deterministic in ``rng_seed``.

    Diagonalizations are memoized on ``(d_B, rng_seed)`` because ensemble
    sweeps revisit the same realizations for every profile and d_A.
    """
    d_B = _check_dim(d_B, 2)
    return Spectrum(_gue_eigenvalues(d_B, int(rng_seed)), ensemble="gue")


def sample_poisson_spectrum(d_B: int, mean_spacing: float = 1.0, rng_seed: int = 0) -> Spectrum:
    """Uncorrelated levels: cumulative sum of iid exponential spacings."""
    d_B = _check_dim(d_B, 2)
    if not mean_spacing > 0:
        raise InvalidParameterError("mean_spacing must be positive")
    rng = make_rng(rng_seed)
    energies = np.cumsum(rng.exponential(mean_spacing, size=d_B))
    return Spectrum(energies, ensemble="poisson")


def picket_fence_spectrum(d_B: int, spacing: float = 1.0) -> Spectrum:
    d_B = _check_dim(d_B, 1)
    if not spacing > 0:
        raise InvalidParameterError("spacing must be positive")
    return Spectrum(np.arange(d_B) * float(spacing), ensemble="picket_fence")


def sample_spectrum(ensemble: str, d_B: int, rng_seed: int = 0) -> Spectrum:
    """Dispatch on an ensemble tag; unit mean spacing for the non-GUE cases."""
    if ensemble == "gue":
        return sample_gue_spectrum(d_B, rng_seed)
    if ensemble == "poisson":
        return sample_poisson_spectrum(d_B, 1.0, rng_seed)
    if ensemble == "picket_fence":
        return picket_fence_spectrum(d_B, 1.0)
    raise InvalidParameterError(f"cannot sample ensemble {ensemble!r}")


def semicircle_cdf(x, radius: float):
    """Cumulative distribution of the Wigner semicircle on [-radius, radius]."""
    u = np.clip(np.asarray(x, dtype=float) / radius, -1.0, 1.0)
    return 0.5 + (u * np.sqrt(1.0 - u * u) + np.arcsin(u)) / np.pi


def unfold(s: Spectrum, method: str = "auto") -> Spectrum:
    """Rescale to unit mean nearest-neighbour spacing, starting at zero.

    Parameters
    ----------
    s : Spectrum
    method : {"auto", "affine", "semicircle"}
        ``"semicircle"`` maps levels through the ensemble-averaged GUE
        counting function before the final affine step, which flattens the
        mean density while keeping the local level correlations.
        ``"auto"`` uses it for GUE spectra that are not yet unfolded and the
        purely affine map otherwise.

    Returns
    -------
    Spectrum
        Same ensemble tag, ``unfolded=True``. Rank order is preserved, and
        unfolding an unfolded spectrum returns it unchanged.
    """
    if s.d_B < 2:
        raise InvalidDimensionError("unfolding needs at least two levels")
    if s.width <= 0:
        raise DegenerateSpectrumError("all energies are equal")
    if method == "auto":
        method = "semicircle" if (s.ensemble == "gue" and not s.unfolded) else "affine"
    if (method == "affine" and s.unfolded and s.energies[0] == 0.0
            and abs(s.width - (s.d_B - 1)) <= UNFOLD_TOL * (s.d_B - 1)):
        return s
    e = np.asarray(s.energies, dtype=float)
    if method == "semicircle":
        e = s.d_B * semicircle_cdf(e, 2.0 * np.sqrt(s.d_B))
        if e[-1] - e[0] <= 0:
            raise DegenerateSpectrumError("spectrum collapses under semicircle unfolding")
    elif method != "affine":
        raise InvalidParameterError(f"unknown unfolding method {method!r}")
    e = (e - e[0]) * ((s.d_B - 1) / (e[-1] - e[0]))
    # monotone map; guard against round-off reordering of near-degenerate levels
    e = np.maximum.accumulate(e)
    return Spectrum(e, ensemble=s.ensemble, unfolded=True)


def heisenberg_time(s: Spectrum) -> float:
    """2*pi times the mean density of states, (d_B - 1) / (E_max - E_min)."""
    if s.d_B < 2:
        raise InvalidDimensionError("Heisenberg time needs at least two levels")
    if s.width <= 0:
        raise DegenerateSpectrumError("all energies are equal")
    return 2.0 * np.pi * (s.d_B - 1) / s.width


def spacing_ratios(s: Spectrum) -> np.ndarray:
    """min/max ratios of consecutive spacings; a zero numerator or 0/0 counts as 0."""
    if s.d_B < 3:
        raise InvalidDimensionError("spacing ratios need at least three levels")
    d = np.diff(s.energies)
    lo = np.minimum(d[:-1], d[1:])
    hi = np.maximum(d[:-1], d[1:])
    out = np.zeros_like(lo)
    np.divide(lo, hi, out=out, where=hi > 0)
    return out


def spacing_ratio_statistic(s: Spectrum) -> float:
    """Mean consecutive-spacing ratio: 1 for a picket fence, ~0.386 Poisson, ~0.600 GUE."""
    return float(np.mean(spacing_ratios(s)))


def diagonalize_hermitian(H, atol: float = 1e-10):
    """Eigen-decompose a user-supplied Hamiltonian.

    Returns ``(spectrum, basis)`` where column ``n`` of ``basis`` is the
    eigenvector for ``spectrum.energies[n]``, so that
    ``H = basis @ diag(E) @ basis.conj().T`` and a state ``psi`` has
    eigenbasis amplitudes ``basis.conj().T @ psi``.
    """
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] < 1:
        raise InvalidDimensionError("H must be a non-empty square matrix")
    if not np.allclose(H, H.conj().T, rtol=0.0, atol=atol):
        raise SymmetryViolationError("H is not Hermitian within tolerance")
    H = (H + H.conj().T) / 2
    energies, basis = np.linalg.eigh(H)
    return Spectrum(energies, ensemble="custom"), basis
