"""Initial-state amplitude profiles over a spectrum's eigenbasis.

"Smooth" profiles (flat, gaussian, gibbs) vary slowly with energy and are
real and non-negative; the "generic" profile is a Haar-random vector.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateProfileError, InvalidDimensionError, InvalidParameterError
from .seeds import make_rng
from .spectra import Spectrum

PROFILES = ("flat", "gaussian", "gibbs", "haar_random", "custom")
SMOOTH_PROFILES = ("flat", "gaussian", "gibbs")

NORM_TOL = 1e-10
LOAD_WARN_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class StateProfile:
    amplitudes: np.ndarray
    tag: str = "custom"

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).copy()
        if a.ndim != 1 or a.size < 1:
            raise InvalidDimensionError("amplitudes must be a non-empty 1d array")
        if self.tag not in PROFILES:
            raise InvalidParameterError(f"unknown profile tag {self.tag!r}")
        norm = float(np.sum(np.abs(a) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidParameterError(f"profile is not normalized (norm^2 = {norm!r})")
        a.flags.writeable = False
        object.__setattr__(self, "amplitudes", a)

    @property
    def d_B(self) -> int:
        return int(self.amplitudes.size)

    @property
    def weights(self) -> np.ndarray:
        """Populations |phi_n|^2."""
        return np.abs(self.amplitudes) ** 2

    def __len__(self):
        return self.d_B


def _normalized(a, tag):
    a = np.asarray(a, dtype=complex)
    norm = np.sqrt(np.sum(np.abs(a) ** 2))
    if not norm > 0 or not np.isfinite(norm):
        raise DegenerateProfileError(f"{tag} profile vanishes before normalization")
    return StateProfile(a / norm, tag)


def flat_state(d_B: int) -> StateProfile:
    if int(d_B) != d_B or d_B < 1:
        raise InvalidDimensionError("d_B must be a positive integer")
    # amplitude 1/sqrt(d_B) so that the populations sum to one
    return StateProfile(np.full(int(d_B), 1.0 / np.sqrt(d_B), dtype=complex), "flat")


def gaussian_wavepacket(s: Spectrum, E0: float, sigma: float) -> StateProfile:
    """Amplitudes proportional to exp(-(E_n - E0)^2 / (4 sigma^2))."""
    if not sigma > 0:
        raise InvalidParameterError("sigma must be positive")
    return _normalized(np.exp(-((s.energies - E0) ** 2) / (4.0 * sigma**2)), "gaussian")


def coherent_gibbs_state(s: Spectrum, beta: float) -> StateProfile:
    """Amplitudes proportional to exp(-beta E_n / 2).

    The largest exponent is subtracted first, so any finite beta works.
    """
    if not beta >= 0:
        raise InvalidParameterError("beta must be non-negative")
    if beta == 0:
        return StateProfile(flat_state(s.d_B).amplitudes, "gibbs")
    x = -0.5 * beta * s.energies
    return _normalized(np.exp(x - x.max()), "gibbs")


def haar_random_state(d_B: int, rng_seed: int) -> StateProfile:
    if int(d_B) != d_B or d_B < 1:
        raise InvalidDimensionError("d_B must be a positive integer")
    rng = make_rng(rng_seed)
    z = rng.standard_normal(int(d_B)) + 1j * rng.standard_normal(int(d_B))
    return _normalized(z, "haar_random")


def custom_state(amplitudes) -> StateProfile:
    """Wrap user amplitudes, normalizing them.

    Warns if the input norm is off by more than 1e-6, which usually means
    the data are wrong rather than rounded.
    """
    a = np.asarray(amplitudes, dtype=complex)
    norm2 = float(np.sum(np.abs(a) ** 2))
    if abs(norm2 - 1.0) > LOAD_WARN_TOL:
        warnings.warn(
            f"custom profile has squared norm {norm2:.9g}; renormalizing", stacklevel=2
        )
    return _normalized(a, "custom")


def profile_in_eigenbasis(psi, basis) -> StateProfile:
    """Amplitudes of a computational-basis state in the eigenbasis from
    :func:`~ergodic_epr.spectra.diagonalize_hermitian`."""
    psi = np.asarray(psi, dtype=complex)
    basis = np.asarray(basis)
    if psi.shape != (basis.shape[0],):
        raise InvalidDimensionError("state length does not match the basis")
    return custom_state(basis.conj().T @ psi)


def make_profile(tag: str, s: Spectrum, rng_seed: int = 0, *, sigma_frac: float = 0.125,
                 beta_width: float = 2.0) -> StateProfile:
    """Build a profile by tag, with defaults scaled to the spectral width.

    ``gaussian`` is centred on the middle of the spectrum with
    ``sigma = sigma_frac * width``; ``gibbs`` uses ``beta = beta_width / width``.
    """
    if tag == "flat":
        return flat_state(s.d_B)
    if tag == "haar_random":
        return haar_random_state(s.d_B, rng_seed)
    width = s.width if s.width > 0 else 1.0
    if tag == "gaussian":
        E0 = 0.5 * (s.energies[0] + s.energies[-1])
        return gaussian_wavepacket(s, E0, sigma_frac * width)
    if tag == "gibbs":
        return coherent_gibbs_state(s, beta_width / width)
    raise InvalidParameterError(f"cannot construct profile {tag!r} without data")
