import numpy as np
import pytest

from ergodic_epr import GramMatrix, gram_from_vectors, make_rng

# Shared by every Monte Carlo test so cached GUE spectra are reused across modules.
BASE_SEED = 11


def random_gram(d_A, d_B, seed, kind="krylov"):
    """A valid Gram matrix: unit-diagonal PSD from random unit vectors.

    ``kind="krylov"`` uses random unit vectors in C^d_B; ``"rank1"`` gives
    the degenerate all-phases case; ``"near_identity"`` a weak perturbation.
    """
    rng = make_rng(seed)
    if kind == "rank1":
        v = np.exp(1j * rng.uniform(0, 2 * np.pi, d_A))
        M = np.outer(v.conj(), v)
        return GramMatrix((M + M.conj().T) / 2)
    V = rng.standard_normal((d_A, d_B)) + 1j * rng.standard_normal((d_A, d_B))
    if kind == "near_identity":
        V = np.eye(d_A, d_B) + 0.05 * V
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    return gram_from_vectors(V)


def random_operator(d, rng):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


@pytest.fixture
def rng():
    return make_rng(BASE_SEED)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k])
