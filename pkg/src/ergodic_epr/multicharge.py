"""Non-demolition coupling through several commuting conserved charges.

Charges are given by their joint eigenvalues: ``qA[n, k]`` for charge k on
A's basis state |n>, ``QB[m, k]`` for charge k on B's joint eigenstate m.
The Krylov vectors are K_n = prod_k exp(-i t0 qA[n, k] Q_Bk) |phi>.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import GramMatrix
from .entanglement import eta2, purity_from_gram
from .errors import InvalidParameterError, PairingError
from .states import StateProfile


@dataclass(frozen=True, eq=False)
class ChargeSet:
    qA: np.ndarray
    QB: np.ndarray

    def __post_init__(self):
        qA = np.atleast_2d(np.asarray(self.qA, dtype=float))
        QB = np.atleast_2d(np.asarray(self.QB, dtype=float))
        if qA.ndim != 2 or QB.ndim != 2:
            raise PairingError("charge tables must be 2d")
        if qA.shape[1] != QB.shape[1]:
            raise PairingError(
                f"qA has {qA.shape[1]} charges but QB has {QB.shape[1]}"
            )
        if qA.shape[0] < 1 or QB.shape[0] < 1 or qA.shape[1] < 1:
            raise PairingError("charge tables must be non-empty")
        object.__setattr__(self, "qA", qA)
        object.__setattr__(self, "QB", QB)

    @property
    def d_A(self) -> int:
        return self.qA.shape[0]

    @property
    def d_B(self) -> int:
        return self.QB.shape[0]

    @property
    def num_charges(self) -> int:
        return self.qA.shape[1]

    @classmethod
    def single(cls, d_A, energies):
        """The single-charge protocol: q_n = n, Q_m = E_m."""
        return cls(np.arange(d_A, dtype=float)[:, None], np.asarray(energies, float)[:, None])


def multicharge_gram(charges: ChargeSet, phi: StateProfile, t0: float) -> GramMatrix:
    """G_nm = sum_mu |phi_mu|^2 exp(-i t0 sum_k (qA[m,k] - qA[n,k]) QB[mu,k]).

    Hermitian, unit diagonal and PSD, but in general not Toeplitz.
    """
    if phi.d_B != charges.d_B:
        raise PairingError(f"profile has {phi.d_B} entries, charges have d_B={charges.d_B}")
    if not t0 > 0:
        raise InvalidParameterError("t0 must be positive")
    # phase of K_n on level mu is -t0 * <qA[n], QB[mu]>
    theta = charges.qA @ charges.QB.T  # (d_A, d_B)
    V = np.exp(-1j * t0 * theta) * phi.amplitudes[None, :]
    G = V.conj() @ V.T
    G = (G + G.conj().T) / 2
    np.fill_diagonal(G, 1.0)
    return GramMatrix(G, t0=float(t0), toeplitz=False)


def multicharge_purity(charges: ChargeSet, phi: StateProfile, t0: float):
    """Return ``(purity, eta2)`` of the multicharge protocol state."""
    G = multicharge_gram(charges, phi, t0)
    return purity_from_gram(G), eta2(G)
