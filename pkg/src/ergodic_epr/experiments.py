"""Ensemble-averaged sweeps over spectra, profiles and dimensions."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import default_t0, return_probability, sff
from .entanglement import ProtocolConfig, purity_direct, purity_from_return_prob
from .errors import (
    ConfigurationError,
    ErgodicEPRError,
    FitError,
    InvalidParameterError,
    InvalidWindowError,
    InvariantViolationError,
)
from .seeds import derive_seed
from .spectra import heisenberg_time, sample_spectrum, unfold
from .states import PROFILES, flat_state, make_profile
from .transfer import CASES, CapacityCase, min_dB_bound

SWEEP_COLUMNS = (
    "ensemble", "profile", "d_A", "d_B", "t0", "n_real",
    "mean_purity", "sem_purity", "mean_eta2", "excess_times_dB",
)
SAMPLED_ENSEMBLES = ("gue", "poisson", "picket_fence")
ROUTE_TOL = 1e-8

# stream offset for profile draws, keeps them independent of the spectrum draw
_PROFILE_STREAM = 1


def realization(ensemble, profile, d_B, base_seed, index, **profile_params):
    """Unfolded spectrum and profile for realization ``index`` of a sweep.

    The spectrum seed depends only on ``(base_seed, index)``, so every
    profile and d_A in a sweep sees the same spectra.
    """
    s = unfold(sample_spectrum(ensemble, d_B, derive_seed(base_seed, index)))
    phi = make_profile(
        profile, s, derive_seed(base_seed, index, _PROFILE_STREAM), **profile_params
    )
    return s, phi


@dataclass
class SweepSpec:
    ensembles: list
    profiles: list
    d_A_list: list
    d_B_list: list
    t0_policy: object = "ramp_window"
    n_realizations: int = 100
    base_seed: int = 0
    direct_oracle: bool = False
    profile_params: dict = field(default_factory=dict)

    def __post_init__(self):
        for e in self.ensembles:
            if e not in SAMPLED_ENSEMBLES:
                raise ConfigurationError(f"unknown ensemble {e!r}")
        for p in self.profiles:
            if p not in PROFILES or p == "custom":
                raise ConfigurationError(f"unknown profile {p!r}")
        for name in ("d_A_list", "d_B_list"):
            vals = getattr(self, name)
            if not vals or any(int(v) != v or v < 1 for v in vals):
                raise ConfigurationError(f"{name} must hold positive integers")
        if any(d < 2 for d in self.d_B_list):
            raise ConfigurationError("d_B must be at least 2")
        if int(self.n_realizations) != self.n_realizations or self.n_realizations < 1:
            raise ConfigurationError("n_realizations must be a positive integer")
        if isinstance(self.t0_policy, str):
            if self.t0_policy != "ramp_window":
                raise ConfigurationError("t0_policy must be 'ramp_window' or a positive number")
        elif not (isinstance(self.t0_policy, (int, float)) and self.t0_policy > 0):
            raise ConfigurationError("t0_policy must be 'ramp_window' or a positive number")
        unknown = set(self.profile_params) - {"sigma_frac", "beta_width"}
        if unknown:
            raise ConfigurationError(f"unknown profile parameters {sorted(unknown)}")

    def grid(self):
        for e in self.ensembles:
            for p in self.profiles:
                for d_A in self.d_A_list:
                    for d_B in self.d_B_list:
                        yield e, p, int(d_A), int(d_B)


@dataclass
class SweepRow:
    ensemble: str
    profile: str
    d_A: int
    d_B: int
    t0: float
    n_real: int
    mean_purity: float
    sem_purity: float
    mean_eta2: float
    excess_times_dB: float
    error: str | None = None

    def values(self):
        return tuple(getattr(self, c) for c in SWEEP_COLUMNS)


@dataclass
class SweepResult:
    rows: list

    def row(self, ensemble, profile, d_A, d_B) -> SweepRow:
        for r in self.rows:
            if (r.ensemble, r.profile, r.d_A, r.d_B) == (ensemble, profile, d_A, d_B):
                return r
        raise KeyError((ensemble, profile, d_A, d_B))


def resolve_t0(policy, s, d_A):
    if policy == "ramp_window":
        return default_t0(s, d_A)
    return float(policy)


def _mean_sem(values):
    n = len(values)
    mean = math.fsum(values) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)


def _sweep_row(spec: SweepSpec, ensemble, profile, d_A, d_B) -> SweepRow:
    purities = []
    t0 = float("nan")
    try:
        for i in range(spec.n_realizations):
            s, phi = realization(ensemble, profile, d_B, spec.base_seed, i, **spec.profile_params)
            t0 = resolve_t0(spec.t0_policy, s, d_A)
            cfg = ProtocolConfig(d_A, t0, s, phi)
            p = purity_from_return_prob(cfg)
            if spec.direct_oracle:
                q = purity_direct(cfg)
                if abs(p - q) > ROUTE_TOL:
                    raise InvariantViolationError(
                        f"purity routes disagree by {abs(p - q):.3g} at realization {i}"
                    )
            purities.append(p)
    except ErgodicEPRError as exc:
        nan = float("nan")
        return SweepRow(ensemble, profile, d_A, d_B, t0, spec.n_realizations,
                        nan, nan, nan, nan, error=f"{type(exc).__name__}: {exc}")
    mean, sem = _mean_sem(purities)
    return SweepRow(
        ensemble, profile, d_A, d_B, t0, spec.n_realizations,
        mean, sem, d_A * mean - 1.0, (mean - 1.0 / d_A) * d_B,
    )


def run_purity_sweep(spec: SweepSpec, max_workers: int = 1) -> SweepResult:
    """Average the return-probability purity over realizations at each grid point.

    Spectra are unfolded before use. A grid point that raises a package
    error, including a purity-route disagreement when ``direct_oracle`` is
    set, becomes a row with ``error`` set and NaN statistics; the rest of
    the sweep still runs.
    """
    points = list(spec.grid())
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(lambda g: _sweep_row(spec, *g), points))
    else:
        rows = [_sweep_row(spec, *g) for g in points]
    return SweepResult(rows)


def decompose_fluctuations(ensemble, profile, d_B, times, n_realizations, base_seed,
                           **profile_params):
    """Split the late-time return probability into spectral and state parts.

    f_E is the window-and-ensemble average of the flat-state return
    probability (the SFF); f_phi is the average of p_phi - p_flat.
    ``times`` are in unfolded units (t_H = 2 pi).

    Returns
    -------
    (f_E, f_phi) : tuple of float
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.size == 0:
        raise InvalidWindowError("empty time window")
    if np.any(times <= 0):
        raise InvalidWindowError("window times must be positive")
    fe, fphi = [], []
    for i in range(n_realizations):
        s, phi = realization(ensemble, profile, d_B, base_seed, i, **profile_params)
        p_flat = return_probability(s, flat_state(d_B), times)
        p_phi = return_probability(s, phi, times)
        fe.append(math.fsum(p_flat) / times.size)
        fphi.append(math.fsum(p_phi - p_flat) / times.size)
    return math.fsum(fe) / n_realizations, math.fsum(fphi) / n_realizations


@dataclass(frozen=True)
class RampFit:
    slope: float
    intercept: float
    scaled_slope: float
    n_points: int


@dataclass(frozen=True)
class RampScan:
    times: np.ndarray
    mean_sff: np.ndarray
    sem_sff: np.ndarray
    heisenberg_time: float
    d_B: int
    mean_spacing: float

    def fit(self, t_lo, t_hi) -> RampFit:
        """Least-squares line through the mean SFF on ``[t_lo, t_hi]``.

        ``scaled_slope`` is the slope of d_B^2 K against time measured in
        units where the mean level spacing is 1/d_B; the random-matrix
        reference value is 1/(2 pi).
        """
        sel = (self.times >= t_lo) & (self.times <= t_hi)
        if np.count_nonzero(sel) < 3:
            raise FitError("need at least 3 grid points in the fit window")
        slope, intercept = np.polyfit(self.times[sel], self.mean_sff[sel], 1)
        return RampFit(float(slope), float(intercept),
                       float(slope * self.d_B / self.mean_spacing), int(np.count_nonzero(sel)))

    def rows(self):
        return [(float(t), float(k)) for t, k in zip(self.times, self.mean_sff)]


def ramp_scan(ensemble, d_B, t_grid, n_realizations, base_seed) -> RampScan:
    """Ensemble-averaged SFF of unfolded spectra on a time grid."""
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise InvalidParameterError("t_grid must be a non-empty 1d array")
    if np.any(t < 0) or np.any(np.diff(t) <= 0):
        raise InvalidParameterError("t_grid must be ascending and non-negative")
    acc = np.zeros((n_realizations, t.size))
    tH = spacing = float("nan")
    for i in range(n_realizations):
        s = unfold(sample_spectrum(ensemble, d_B, derive_seed(base_seed, i)))
        acc[i] = sff(s, t)
        tH, spacing = heisenberg_time(s), s.mean_spacing
    mean = acc.mean(axis=0)
    sem = acc.std(axis=0, ddof=1) / np.sqrt(n_realizations) if n_realizations > 1 else np.zeros_like(mean)
    return RampScan(t, mean, sem, tH, int(d_B), spacing)


@dataclass(frozen=True)
class CapacityRow:
    case: str
    d_A: int
    epsilon: float
    gamma: float
    kappa: float
    min_dB: float
    ratio_to_ergodic_smooth: float


def capacity_comparison(d_A_list, epsilon, gamma=1.0, kappa=0.0):
    """min_dB_bound for every case and d_A, with each row's ratio to the
    ergodic-smooth bound at the same d_A."""
    rows = []
    for d_A in d_A_list:
        base = min_dB_bound(d_A, CapacityCase("ergodic_smooth", epsilon, gamma, kappa))
        for case in CASES:
            b = min_dB_bound(d_A, CapacityCase(case, epsilon, gamma, kappa))
            rows.append(CapacityRow(case, d_A, epsilon, gamma, kappa, b, b / base))
    return rows
