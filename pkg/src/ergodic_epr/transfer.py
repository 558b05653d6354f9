"""Operator-transfer diagnostics for the generated entangled state.

Everything here is computed from the Gram matrix G = R^dagger R of the
Krylov set; the linear map R itself is never formed.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .dynamics import GramMatrix
from .errors import (
    ConfigurationError,
    InvalidDimensionError,
    InvalidParameterError,
    MalformedInputError,
)

CASES = ("ergodic_smooth", "generic_or_infiniteT", "poisson_generic")
_DEFAULT_VARPHI = {"ergodic_smooth": 1.0, "generic_or_infiniteT": 1.0, "poisson_generic": 2.0}

BD_TOL = 1e-10


@dataclass(frozen=True)
class TransferDiagnostics:
    gram_eigenvalues: np.ndarray
    r_max: float
    r_min: float
    worst_case_error: float
    eta2: float
    bd_product: float

    @property
    def d_A(self) -> int:
        return int(self.gram_eigenvalues.size)

    def as_dict(self):
        d = asdict(self)
        d["gram_eigenvalues"] = [float(x) for x in self.gram_eigenvalues]
        return d


def transfer_diagnostics(G: GramMatrix) -> TransferDiagnostics:
    """Eigenvalues r_k of G and the quantities derived from them.

    ``worst_case_error = max_k |r_k - 1|`` is the largest relative error in
    transferred operator norms over all operators. Zero eigenvalues (a
    degenerate Krylov set) are kept as r_k = 0.
    """
    if not isinstance(G, GramMatrix):
        raise MalformedInputError("expected a GramMatrix")
    raw = np.linalg.eigvalsh(G.entries)
    if raw[0] < -1e-10:
        raise MalformedInputError("Gram matrix has a negative eigenvalue")
    r = np.clip(raw, 0.0, None)
    r_max, r_min = float(r[-1]), float(r[0])
    return TransferDiagnostics(
        gram_eigenvalues=r,
        r_max=r_max,
        r_min=r_min,
        worst_case_error=float(np.max(np.abs(r - 1.0))),
        eta2=float(np.mean((r - 1.0) ** 2)),
        bd_product=(r_max - 1.0) * (1.0 - r_min),
    )


def bhatia_davis_check(diag: TransferDiagnostics):
    """Return ``(holds, slack)`` for eta2 <= (r_max - 1)(1 - r_min)."""
    slack = diag.bd_product - diag.eta2
    return bool(slack >= -BD_TOL), float(slack)


def gaussian_tail_ratio(diag: TransferDiagnostics):
    """(r_max - 1) and (1 - r_min) relative to sqrt(2 eta2 ln d_A).

    For Gaussian-distributed r_k both ratios sit near 1. This is a measured
    diagnostic only; NaN when eta2 = 0 or d_A = 1.
    """
    scale = math.sqrt(2.0 * diag.eta2 * math.log(diag.d_A)) if diag.d_A > 1 else 0.0
    if scale == 0.0:
        return float("nan"), float("nan")
    return (diag.r_max - 1.0) / scale, (1.0 - diag.r_min) / scale


def transfer_error(G: GramMatrix, O, P) -> float:
    """Relative inner-product error Delta_2(O, P) of the encoded operators.

    |Tr[(G - 1) O^T conj(P)]| / sqrt(Tr[O O^dag] Tr[P P^dag])
    """
    O = np.asarray(O, dtype=complex)
    P = np.asarray(P, dtype=complex)
    d = G.d_A
    if O.shape != (d, d) or P.shape != (d, d):
        raise InvalidDimensionError(f"operators must be {d} x {d}")
    norm = math.sqrt(np.sum(np.abs(O) ** 2) * np.sum(np.abs(P) ** 2))
    if norm == 0.0:
        raise InvalidParameterError("zero operator: Delta_2 is undefined")
    M = (G.entries - np.eye(d)) @ (O.T @ P.conj())
    return float(abs(np.trace(M)) / norm)


def epr_state(d: int) -> np.ndarray:
    """(1/sqrt(d)) sum_k |k> (x) |k> as a length d^2 vector."""
    if int(d) != d or d < 1:
        raise InvalidDimensionError("d must be a positive integer")
    return np.eye(int(d), dtype=complex).reshape(-1) / np.sqrt(d)


def epr_transfer_residual(d: int, O, R_B=None) -> float:
    """|| (O (x) 1) R|EPR> - R (1 (x) O^T)|EPR> || with R = 1 (x) R_B.

    With ``R_B=None`` this checks the plain EPR identity; any R_B acting
    only on the second system must also give zero.
    """
    O = np.asarray(O, dtype=complex)
    if O.shape != (d, d):
        raise InvalidDimensionError(f"operator must be {d} x {d}")
    I = np.eye(d)
    R = I if R_B is None else np.asarray(R_B, dtype=complex)
    if R.shape != (d, d):
        raise InvalidDimensionError(f"R_B must be {d} x {d}")
    epr = epr_state(d)
    R_full = np.kron(I, R)
    lhs = np.kron(O, I) @ (R_full @ epr)
    rhs = R_full @ (np.kron(I, O.T) @ epr)
    return float(np.linalg.norm(lhs - rhs))


@dataclass(frozen=True)
class CapacityCase:
    """Parameters of the purity criterion and the d_B capacity bound.

    gamma = 1, kappa = 0 is the strict necessary condition; gamma = 2,
    kappa = 0 the sufficient one; gamma = 1, kappa = 1 the "typical" one.
    ``varphi`` defaults from the tag (2 for Poisson, else 1).
    """

    case_tag: str
    epsilon: float
    gamma: float = 1.0
    kappa: float = 0.0
    varphi: float | None = None

    def __post_init__(self):
        if self.case_tag not in CASES:
            raise ConfigurationError(f"unknown case {self.case_tag!r}")
        if not 0.0 < self.epsilon < 1.0:
            raise ConfigurationError("epsilon must lie in (0, 1)")
        if not self.gamma >= 1.0:
            raise ConfigurationError("gamma must be >= 1")
        if not self.kappa >= 0.0:
            raise ConfigurationError("kappa must be >= 0")
        if self.varphi is None:
            object.__setattr__(self, "varphi", _DEFAULT_VARPHI[self.case_tag])
        elif self.varphi not in (1, 2):
            raise ConfigurationError("varphi must be 1 or 2")

    @classmethod
    def typical(cls, case_tag, epsilon):
        return cls(case_tag, epsilon, gamma=1.0, kappa=1.0)


def _log_factor(d_A, kappa):
    # real d_A accepted so the bounds can be tabulated as smooth functions
    if not d_A > 1:
        raise InvalidDimensionError("d_A must exceed 1 (ln d_A appears in the bound)")
    return math.log(d_A) ** kappa if kappa else 1.0


def purity_threshold(d_A: int, case: CapacityCase) -> float:
    """Largest purity compatible with transfer error epsilon:
    1/d_A + eps^2 / (d_A^gamma (ln d_A)^kappa)."""
    lf = _log_factor(d_A, case.kappa)
    return 1.0 / d_A + case.epsilon**2 / (d_A**case.gamma * lf)


def min_dB_bound(d_A: int, case: CapacityCase) -> float:
    """Smallest d_B able to carry d_A-dimensional operators with error epsilon."""
    lf = _log_factor(d_A, case.kappa)
    if case.case_tag == "ergodic_smooth":
        return d_A ** ((1.0 + case.gamma) / 2.0) * math.sqrt(lf) / case.epsilon
    # divide twice: eps**2 rounds badly for decimal eps such as 0.1
    return case.varphi * d_A**case.gamma * lf / case.epsilon / case.epsilon
