"""Bipartite purity of the protocol state by three independent routes.

The protocol: A starts in an equal superposition of its number eigenstates
|n>, n < d_A, B in |phi>, and the coupling N_A (x) H_B acts for a time t0.
The resulting state is (1/sqrt(d_A)) sum_n |n> (x) U^n |phi>.

* :func:`purity_from_return_prob` sums return probabilities at multiples of t0.
* :func:`purity_direct` builds the joint state and traces out B.
* :func:`purity_from_gram` uses the Krylov Gram matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import GramMatrix, krylov_gram, return_probability, sff
from .errors import (
    ConfigurationError,
    InvalidDimensionError,
    InvalidParameterError,
    OutOfRegimeError,
    PairingError,
    ResourceLimitError,
)
from .seeds import make_rng
from .spectra import Spectrum
from .states import StateProfile

MAX_DIRECT_ENTRIES = 2**22


@dataclass(frozen=True)
class ProtocolConfig:
    d_A: int
    t0: float
    spectrum: Spectrum
    profile: StateProfile

    def __post_init__(self):
        if int(self.d_A) != self.d_A or self.d_A < 1:
            raise ConfigurationError("d_A must be a positive integer")
        if not self.t0 > 0:
            raise ConfigurationError("t0 must be positive")
        if self.spectrum.d_B != self.profile.d_B:
            raise PairingError("profile length does not match the spectrum")

    @property
    def d_B(self) -> int:
        return self.spectrum.d_B


def _triangle_sum(values, d_A):
    taus = np.arange(1, d_A)
    return 1.0 / d_A + (2.0 / d_A) * math.fsum((1.0 - taus / d_A) * values)


def purity_from_return_prob(cfg: ProtocolConfig) -> float:
    """1/d_A + (2/d_A) sum_{tau=1}^{d_A-1} (1 - tau/d_A) p_phi(tau t0)."""
    if cfg.d_A == 1:
        return 1.0
    taus = np.arange(1, cfg.d_A)
    p = return_probability(cfg.spectrum, cfg.profile, taus * cfg.t0)
    return _triangle_sum(p, cfg.d_A)


def mixed_state_purity(s: Spectrum, t0: float, d_A: int) -> float:
    """Purity when B starts maximally mixed: p_phi is replaced by the SFF."""
    if int(d_A) != d_A or d_A < 1:
        raise ConfigurationError("d_A must be a positive integer")
    if not t0 > 0:
        raise ConfigurationError("t0 must be positive")
    if d_A == 1:
        return 1.0
    taus = np.arange(1, int(d_A))
    return _triangle_sum(sff(s, taus * t0), int(d_A))


def _check_cap(n, max_entries):
    cap = MAX_DIRECT_ENTRIES if max_entries is None else max_entries
    if n > cap:
        raise ResourceLimitError(f"state of {n} amplitudes exceeds the cap of {cap}")


def protocol_state(cfg: ProtocolConfig, local_unitaries=None, max_entries=None) -> np.ndarray:
    """Joint state as a (d_A, d_B) coefficient matrix in the |n> (x) |E_m> basis.

    U = exp(-i H_B t0) is applied by repeated multiplication, not through the
    closed-form phases. ``local_unitaries=(V_A, V_B)`` post-multiplies by a
    product of local unitaries, which must leave every purity unchanged.
    """
    d_A, d_B = cfg.d_A, cfg.d_B
    _check_cap(d_A * d_B, max_entries)
    U = np.exp(-1j * cfg.t0 * cfg.spectrum.energies)
    psi = np.empty((d_A, d_B), dtype=complex)
    v = np.array(cfg.profile.amplitudes, dtype=complex)
    for n in range(d_A):
        psi[n] = v
        v = U * v
    psi /= np.sqrt(d_A)
    if local_unitaries is not None:
        V_A, V_B = local_unitaries
        psi = np.asarray(V_A) @ psi @ np.asarray(V_B).T
    return psi


def reduced_density_matrix(psi) -> np.ndarray:
    """rho_A = Tr_B |psi><psi| for a (d_A, d_B) coefficient matrix."""
    psi = np.asarray(psi)
    return np.einsum("ib,jb->ij", psi, psi.conj())


def purity_direct(cfg: ProtocolConfig, local_unitaries=None, max_entries=None) -> float:
    """Brute-force Tr(rho_A^2) from the explicitly constructed joint state."""
    rho = reduced_density_matrix(protocol_state(cfg, local_unitaries, max_entries))
    return float(np.real(np.einsum("ij,ji->", rho, rho)))


def purity_from_gram(G: GramMatrix) -> float:
    """Tr(G^2) / d_A^2 = (1 + eta2) / d_A."""
    _require_gram(G)
    return float(np.sum(np.abs(G.entries) ** 2)) / G.d_A**2


def eta2(G: GramMatrix) -> float:
    """Krylov-ergodicity measure Tr(G^2)/d_A - 1; zero iff the Krylov set is orthonormal."""
    _require_gram(G)
    return float(np.sum(np.abs(G.entries) ** 2)) / G.d_A - 1.0


def higher_purity(G: GramMatrix, alpha: int) -> float:
    """Tr(rho_A^alpha) = Tr(G^alpha) / d_A^alpha from the clipped Gram spectrum."""
    _require_gram(G)
    if int(alpha) != alpha or alpha < 2:
        raise InvalidParameterError("alpha must be an integer >= 2")
    r = G.eigenvalues() / G.d_A
    return float(math.fsum(r ** int(alpha)))


def _require_gram(G):
    if not isinstance(G, GramMatrix):
        raise ConfigurationError("expected a GramMatrix")


def haar_unitary(d: int, rng_seed: int) -> np.ndarray:
    """Haar-random d x d unitary: QR of a complex Ginibre matrix with the
    phases of R's diagonal moved into Q."""
    rng = make_rng(rng_seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph[None, :]


def haar_scrambler_purity(d_A: int, d_B: int, rng_seed: int, max_entries=None) -> float:
    """Purity of A after a Haar-random unitary on A (x) B acts on |0>|0>."""
    for d in (d_A, d_B):
        if int(d) != d or d < 1:
            raise InvalidDimensionError("dimensions must be positive integers")
    n = int(d_A) * int(d_B)
    _check_cap(n * n, max_entries)
    U = haar_unitary(n, rng_seed)
    psi = U[:, 0].reshape(int(d_A), int(d_B))
    rho = reduced_density_matrix(psi)
    return float(np.real(np.einsum("ij,ji->", rho, rho)))


def thermal_scrambler_purity(d_A: int, beta: float, c: float) -> float:
    """Finite-temperature local-scrambler baseline d_A^(-1 + c beta^2)."""
    if int(d_A) != d_A or d_A < 1:
        raise InvalidDimensionError("d_A must be a positive integer")
    if not c > 0 or not beta >= 0:
        raise InvalidParameterError("need c > 0 and beta >= 0")
    if c * beta**2 >= 1:
        raise OutOfRegimeError("c beta^2 >= 1: purity does not decay with d_A")
    return float(d_A ** (-1.0 + c * beta**2))


@dataclass
class PurityReport:
    purity_formula: float
    purity_direct: float
    purity_gram: float
    eta2: float
    higher_purities: dict = field(default_factory=dict)
    max_discrepancy: float = 0.0

    def as_dict(self):
        return {
            "purity_formula": self.purity_formula,
            "purity_direct": self.purity_direct,
            "purity_gram": self.purity_gram,
            "eta2": self.eta2,
            "higher_purities": {str(k): v for k, v in sorted(self.higher_purities.items())},
            "max_discrepancy": self.max_discrepancy,
        }


def purity_report(cfg: ProtocolConfig, alphas=(3, 4), direct=True, max_entries=None) -> PurityReport:
    """Evaluate all purity routes on one configuration.

    With ``direct=False`` (or when the brute-force state would exceed the
    memory cap) ``purity_direct`` is NaN and the discrepancy covers the two
    remaining routes.
    """
    G = krylov_gram(cfg.spectrum, cfg.profile, cfg.t0, cfg.d_A)
    p_formula = purity_from_return_prob(cfg)
    p_gram = purity_from_gram(G)
    p_direct = float("nan")
    if direct:
        try:
            p_direct = purity_direct(cfg, max_entries=max_entries)
        except ResourceLimitError:
            pass
    routes = [p for p in (p_formula, p_gram, p_direct) if not math.isnan(p)]
    disc = max(routes) - min(routes)
    higher = {2: p_gram}
    higher.update({int(a): higher_purity(G, a) for a in alphas})
    return PurityReport(p_formula, p_direct, p_gram, eta2(G), higher, float(disc))
