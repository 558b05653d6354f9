import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ergodic_epr import (
    GramMatrix,
    custom_state,
    default_t0,
    flat_state,
    gram_from_vectors,
    haar_random_state,
    heisenberg_time,
    krylov_gram,
    krylov_vectors,
    make_profile,
    picket_fence_spectrum,
    return_amplitude,
    return_probability,
    return_series,
    sample_spectrum,
    sff,
    toeplitz_hermitian,
    unfold,
)
from ergodic_epr.errors import InvalidDimensionError, InvalidParameterError, MalformedInputError, PairingError
from ergodic_epr.experiments import realization

from conftest import BASE_SEED


def eigenstate(d_B, k):
    a = np.zeros(d_B)
    a[k] = 1
    return custom_state(a)


def test_return_amplitude_trivial_values():
    pf = picket_fence_spectrum(16)
    phi = flat_state(16)
    assert return_amplitude(pf, phi, 0.0) == 1
    assert abs(return_amplitude(pf, phi, 2 * np.pi) - 1) < 1e-12
    assert abs(return_amplitude(picket_fence_spectrum(4), flat_state(4), np.pi / 2)) < 1e-12


def test_return_amplitude_oracle():
    # explicit <phi| exp(-i H t) |phi> with H diagonal in a rotated basis
    s = sample_spectrum("gue", 12, 4)
    phi = haar_random_state(12, 5)
    rng = np.random.default_rng(1)
    Q, _ = np.linalg.qr(rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12)))
    psi = Q @ phi.amplitudes
    for t in (0.3, 1.7, 11.0):
        U = Q @ np.diag(np.exp(-1j * s.energies * t)) @ Q.conj().T
        assert abs(return_amplitude(s, phi, t) - psi.conj() @ U @ psi) < 1e-12


def test_return_probability_eigenstate():
    s = sample_spectrum("poisson", 10, 2)
    p = return_probability(s, eigenstate(10, 3), np.linspace(0, 50, 11))
    assert np.allclose(p, 1, atol=1e-14)
    assert return_probability(s, haar_random_state(10, 1), 0.0) == pytest.approx(1, abs=1e-14)


def test_sff_matches_flat_return_probability():
    s = sample_spectrum("gue", 64, 8)
    t = np.linspace(0, 30, 50)
    assert sff(s, 0.0) == pytest.approx(1, abs=1e-14)
    assert np.allclose(sff(s, t), return_probability(s, flat_state(64), t), atol=1e-12, rtol=0)


def test_flat_return_equals_sff_ensemble():
    t = 2 * np.pi * np.linspace(0.1, 0.5, 9)
    p, k = [], []
    for i in range(50):
        s, phi = realization("gue", "flat", 512, BASE_SEED, i)
        p.append(return_probability(s, phi, t))
        k.append(sff(s, t))
    assert np.max(np.abs(np.mean(p, 0) - np.mean(k, 0))) < 1e-12


def test_sff_plateau():
    t = 2 * np.pi * np.linspace(5, 20, 200)
    vals = [np.mean(sff(realization("gue", "flat", 1024, BASE_SEED, i)[0], t)) for i in range(100)]
    assert abs(np.mean(vals) * 1024 - 1) < 0.3


def test_pairing_error():
    with pytest.raises(PairingError):
        return_amplitude(picket_fence_spectrum(4), flat_state(5), 1.0)


def test_return_series():
    s = picket_fence_spectrum(8)
    r = return_series(s, flat_state(8), [0.0, 1.0, 2 * np.pi])
    assert np.allclose(r.probabilities, np.abs(r.amplitudes) ** 2)
    assert r.probabilities[0] == 1 and abs(r.probabilities[2] - 1) < 1e-12


def test_krylov_gram_trivial_cases():
    pf = picket_fence_spectrum(16)
    assert np.array_equal(krylov_gram(pf, flat_state(16), 0.4, 1).entries, [[1]])
    G = krylov_gram(pf, flat_state(16), 2 * np.pi / 16, 16)
    assert np.max(np.abs(G.entries - np.eye(16))) < 1e-12
    assert G.toeplitz
    G = krylov_gram(sample_spectrum("gue", 16, 1), eigenstate(16, 5), 0.9, 4)
    assert np.allclose(np.abs(G.entries), 1, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["gue", "poisson", "picket_fence"]),
       st.sampled_from(["flat", "gaussian", "gibbs", "haar_random"]),
       st.integers(1, 10), st.integers(2, 48), st.floats(0.01, 5.0), st.integers(0, 10**6))
def test_krylov_gram_matches_explicit_vectors(ens, prof, d_A, d_B, t0, seed):
    s = sample_spectrum(ens, d_B, seed)
    phi = make_profile(prof, s, seed + 1)
    V = krylov_vectors(s, phi, t0, d_A)
    assert np.allclose(np.linalg.norm(V, axis=1), 1, atol=1e-12)
    assert np.allclose(V[0], phi.amplitudes)
    G = krylov_gram(s, phi, t0, d_A)
    assert np.max(np.abs(G.entries - gram_from_vectors(V).entries)) < 1e-12


def test_gram_validation():
    with pytest.raises(MalformedInputError):
        GramMatrix(np.array([[1, 2], [0, 1]]))
    with pytest.raises(MalformedInputError):
        GramMatrix(np.array([[2, 0], [0, 1]]))
    with pytest.raises(MalformedInputError):
        GramMatrix(np.array([[1, 2], [2, 1]]))  # eigenvalue -1
    with pytest.raises(MalformedInputError):
        GramMatrix(np.eye(3) + 0.1 * (np.eye(3, k=1) + np.eye(3, k=-1)) - 0.1 * np.eye(3, k=2)
                   - 0.1 * np.eye(3, k=-2) + 0.2 * np.eye(3, k=1), toeplitz=True)
    with pytest.raises(InvalidParameterError):
        krylov_gram(picket_fence_spectrum(4), flat_state(4), 0.0, 2)
    with pytest.raises(InvalidDimensionError):
        krylov_gram(picket_fence_spectrum(4), flat_state(4), 1.0, 0)


def test_toeplitz_hermitian():
    G = toeplitz_hermitian([1, 0.5j, 0.1])
    assert np.allclose(G, G.conj().T)
    assert G[0, 1] == 0.5j and G[1, 0] == -0.5j and G[1, 2] == 0.5j and G[2, 0] == 0.1


def test_default_t0():
    s = unfold(sample_spectrum("gue", 256, 3))
    tH = heisenberg_time(s)
    assert default_t0(s, 8) == pytest.approx(2 * tH / 256)
    assert default_t0(s, 200) == pytest.approx(0.5 * tH / 200)
    assert 8 * default_t0(s, 8) <= 0.5 * tH
