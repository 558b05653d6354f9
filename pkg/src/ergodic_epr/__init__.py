"""Entanglement generated by non-demolition coupling to an ergodic bath.

A d_A-level register drives a conserved charge of a d_B-level system. The
package computes the resulting purity from return probabilities, Gram
matrices and brute-force states, and diagnoses how faithfully the
entangled state transfers operators.
"""
from .dynamics import (
    GramMatrix,
    ReturnSeries,
    default_t0,
    gram_from_vectors,
    krylov_gram,
    krylov_vectors,
    return_amplitude,
    return_probability,
    return_series,
    sff,
    toeplitz_hermitian,
    validate_gram,
)
from .entanglement import (
    ProtocolConfig,
    PurityReport,
    eta2,
    haar_scrambler_purity,
    haar_unitary,
    higher_purity,
    mixed_state_purity,
    protocol_state,
    purity_direct,
    purity_from_gram,
    purity_from_return_prob,
    purity_report,
    reduced_density_matrix,
    thermal_scrambler_purity,
)
from .errors import *  # noqa: F401,F403
from .experiments import (
    RampScan,
    SweepResult,
    SweepSpec,
    capacity_comparison,
    decompose_fluctuations,
    ramp_scan,
    realization,
    run_purity_sweep,
)
from .multicharge import ChargeSet, multicharge_gram, multicharge_purity
from .seeds import derive_seed, make_rng
from .spectra import (
    Spectrum,
    diagonalize_hermitian,
    heisenberg_time,
    picket_fence_spectrum,
    sample_gue_spectrum,
    sample_poisson_spectrum,
    sample_spectrum,
    spacing_ratio_statistic,
    spacing_ratios,
    unfold,
)
from .states import (
    StateProfile,
    coherent_gibbs_state,
    custom_state,
    flat_state,
    gaussian_wavepacket,
    haar_random_state,
    make_profile,
    profile_in_eigenbasis,
)
from .svg import emit_svg
from .transfer import (
    CapacityCase,
    TransferDiagnostics,
    bhatia_davis_check,
    epr_state,
    epr_transfer_residual,
    gaussian_tail_ratio,
    min_dB_bound,
    purity_threshold,
    transfer_diagnostics,
    transfer_error,
)

__version__ = "0.1.0"
