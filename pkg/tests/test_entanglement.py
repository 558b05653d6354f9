import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ergodic_epr import (
    GramMatrix,
    ProtocolConfig,
    custom_state,
    eta2,
    flat_state,
    haar_scrambler_purity,
    haar_unitary,
    higher_purity,
    krylov_gram,
    make_profile,
    mixed_state_purity,
    picket_fence_spectrum,
    protocol_state,
    purity_direct,
    purity_from_gram,
    purity_from_return_prob,
    purity_report,
    reduced_density_matrix,
    sample_spectrum,
    thermal_scrambler_purity,
)
from ergodic_epr.errors import (
    ConfigurationError,
    InvalidParameterError,
    OutOfRegimeError,
    PairingError,
    ResourceLimitError,
)
from ergodic_epr.experiments import realization
from ergodic_epr.dynamics import default_t0
from ergodic_epr.seeds import derive_seed

from conftest import BASE_SEED, random_gram
from oracles import dense_purity


def cfg_for(ens, prof, d_A, d_B, seed, t0=None):
    s = sample_spectrum(ens, d_B, seed)
    phi = make_profile(prof, s, seed + 1)
    return ProtocolConfig(d_A, t0 if t0 is not None else 0.37, s, phi)


def test_d_A_one():
    cfg = cfg_for("gue", "haar_random", 1, 16, 3)
    assert purity_from_return_prob(cfg) == 1
    assert purity_direct(cfg) == pytest.approx(1, abs=1e-14)
    assert purity_from_gram(krylov_gram(cfg.spectrum, cfg.profile, cfg.t0, 1)) == 1
    assert mixed_state_purity(cfg.spectrum, 0.5, 1) == 1


def test_picket_fence_exact():
    for d_A in (2, 5, 16):
        s = picket_fence_spectrum(16)
        cfg = ProtocolConfig(d_A, 2 * np.pi / 16, s, flat_state(16))
        assert abs(purity_from_return_prob(cfg) - 1 / d_A) < 1e-12
        assert abs(purity_direct(cfg) - 1 / d_A) < 1e-12


def test_eigenstate_is_product():
    a = np.zeros(12)
    a[4] = 1
    cfg = ProtocolConfig(6, 0.8, sample_spectrum("gue", 12, 2), custom_state(a))
    assert purity_from_return_prob(cfg) == pytest.approx(1, abs=1e-12)
    assert purity_direct(cfg) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("ens", ["gue", "poisson", "picket_fence"])
@pytest.mark.parametrize("prof", ["flat", "gaussian", "gibbs", "haar_random"])
def test_routes_agree_with_dense_oracle(ens, prof):
    cfg = cfg_for(ens, prof, 5, 20, 4, t0=0.61)
    p = dense_purity(cfg)
    assert abs(purity_from_return_prob(cfg) - p) < 1e-10
    assert abs(purity_direct(cfg) - p) < 1e-10
    G = krylov_gram(cfg.spectrum, cfg.profile, cfg.t0, cfg.d_A)
    assert abs(purity_from_gram(G) - p) < 1e-10


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["gue", "poisson", "picket_fence"]),
       st.sampled_from(["flat", "gaussian", "gibbs", "haar_random"]),
       st.integers(2, 8), st.integers(8, 64), st.floats(0.01, 3.0), st.integers(0, 10**6))
def test_routes_agree(ens, prof, d_A, d_B, t0, seed):
    cfg = cfg_for(ens, prof, d_A, d_B, seed, t0)
    a = purity_from_return_prob(cfg)
    b = purity_direct(cfg)
    G = krylov_gram(cfg.spectrum, cfg.profile, t0, d_A)
    assert abs(a - b) < 1e-10
    assert abs(a - purity_from_gram(G)) < 1e-12
    assert abs(eta2(G) - (d_A * a - 1)) < 1e-10
    assert 1 / d_A - 1e-12 <= a <= 1 + 1e-12


def test_local_unitaries_leave_purity_unchanged():
    cfg = cfg_for("gue", "haar_random", 6, 30, 8)
    p = purity_direct(cfg)
    q = purity_direct(cfg, local_unitaries=(haar_unitary(6, 1), haar_unitary(30, 2)))
    assert abs(p - q) < 1e-12


def test_state_normalized():
    psi = protocol_state(cfg_for("poisson", "gibbs", 7, 25, 3))
    assert abs(np.sum(np.abs(psi) ** 2) - 1) < 1e-12
    assert abs(np.trace(reduced_density_matrix(psi)) - 1) < 1e-12


def test_gram_purity_trivial():
    assert purity_from_gram(GramMatrix(np.eye(5))) == pytest.approx(0.2)
    assert eta2(GramMatrix(np.eye(5))) == 0
    ones = GramMatrix(np.ones((2, 2)))
    assert purity_from_gram(ones) == 1
    assert eta2(ones) == 1


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 10), st.integers(1, 30), st.integers(0, 10**6),
       st.sampled_from(["krylov", "rank1", "near_identity"]))
def test_eta2_nonnegative(d_A, d_B, seed, kind):
    assert eta2(random_gram(d_A, max(d_B, d_A), seed, kind)) >= -1e-10


def test_higher_purity():
    cfg = cfg_for("gue", "haar_random", 6, 24, 5)
    G = krylov_gram(cfg.spectrum, cfg.profile, cfg.t0, 6)
    assert higher_purity(G, 2) == pytest.approx(purity_from_gram(G), abs=1e-12)
    rho = reduced_density_matrix(protocol_state(cfg))
    assert abs(higher_purity(G, 3) - np.real(np.trace(rho @ rho @ rho))) < 1e-10
    for alpha in (2, 3, 5):
        assert higher_purity(GramMatrix(np.eye(4)), alpha) == pytest.approx(4.0 ** (1 - alpha))
    with pytest.raises(InvalidParameterError):
        higher_purity(G, 1)


def test_haar_unitary_is_unitary():
    U = haar_unitary(20, 4)
    assert np.allclose(U @ U.conj().T, np.eye(20), atol=1e-12)


def test_haar_scrambler_limits():
    assert haar_scrambler_purity(1, 16, 3) == pytest.approx(1, abs=1e-12)
    assert haar_scrambler_purity(8, 1, 3) == pytest.approx(1, abs=1e-12)
    with pytest.raises(ResourceLimitError):
        haar_scrambler_purity(64, 64, 0, max_entries=10**6)


def test_haar_scrambler_mean():
    vals = [haar_scrambler_purity(4, 64, derive_seed(BASE_SEED, i, 3)) for i in range(200)]
    assert abs(np.mean(vals) - (1 / 4 + 1 / 64)) < 0.01


def test_thermal_baseline():
    assert thermal_scrambler_purity(16, 0.0, 0.5) == pytest.approx(1 / 16)
    assert thermal_scrambler_purity(16, 1.0, 0.5) == pytest.approx(0.25)
    vals = [thermal_scrambler_purity(16, b, 0.5) for b in np.linspace(0, 1.3, 10)]
    assert np.all(np.diff(vals) > 0)
    with pytest.raises(OutOfRegimeError):
        thermal_scrambler_purity(16, 2.0, 0.5)


def test_mixed_state_equals_flat_profile():
    s = sample_spectrum("poisson", 40, 6)
    cfg = ProtocolConfig(7, 0.43, s, flat_state(40))
    assert abs(mixed_state_purity(s, 0.43, 7) - purity_from_return_prob(cfg)) < 1e-12


def test_mixed_state_gue_excess():
    d_A, d_B = 8, 1024
    ex = []
    for i in range(100):
        s, _ = realization("gue", "flat", d_B, BASE_SEED, i)
        ex.append(mixed_state_purity(s, default_t0(s, d_A), d_A) - 1 / d_A)
    assert np.mean(ex) * d_B**2 / d_A < 3


def test_config_validation():
    s = picket_fence_spectrum(4)
    with pytest.raises(ConfigurationError):
        ProtocolConfig(0, 1.0, s, flat_state(4))
    with pytest.raises(ConfigurationError):
        ProtocolConfig(2, -1.0, s, flat_state(4))
    with pytest.raises(PairingError):
        ProtocolConfig(2, 1.0, s, flat_state(5))


def test_purity_report():
    cfg = cfg_for("gue", "gaussian", 6, 32, 2)
    rep = purity_report(cfg)
    assert rep.max_discrepancy < 1e-10
    assert set(rep.higher_purities) == {2, 3, 4}
    skipped = purity_report(cfg, max_entries=10)
    assert np.isnan(skipped.purity_direct)
    assert skipped.purity_formula == rep.purity_formula
