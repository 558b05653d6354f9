"""Deterministic seed derivation for ensemble sweeps."""
import numpy as np


def derive_seed(base_seed: int, *keys: int) -> int:
    """Return a 64-bit seed that is a pure function of ``base_seed`` and ``keys``.

    Realization ``i`` of a sweep uses ``derive_seed(base_seed, i)``, so the
    draw does not depend on execution order or worker count.
    """
    entropy = [int(base_seed) & 0xFFFFFFFFFFFFFFFF] + [int(k) for k in keys]
    state = np.random.SeedSequence(entropy).generate_state(2, np.uint32)
    return (int(state[0]) << 32) | int(state[1])


def make_rng(seed) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF))
