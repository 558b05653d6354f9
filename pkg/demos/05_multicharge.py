"""Coupling through two commuting charges.

With a single charge q_n = n the general Gram matrix reduces to the
Toeplitz one; with two independent charges it is no longer Toeplitz but
the purity is still fixed by it.
"""
import numpy as np

from ergodic_epr import (
    ChargeSet,
    krylov_gram,
    multicharge_gram,
    multicharge_purity,
    haar_random_state,
    make_rng,
    sample_spectrum,
)

s = sample_spectrum("gue", 64, 7)
phi = haar_random_state(64, 8)
single = ChargeSet.single(6, s.energies)
diff = np.abs(multicharge_gram(single, phi, 0.4).entries - krylov_gram(s, phi, 0.4, 6).entries).max()
print(f"single charge vs Krylov Gram: max difference {diff:.1e}")

rng = make_rng(9)
two = ChargeSet(np.stack([np.arange(6.0), rng.integers(0, 3, 6)], axis=1),
                np.stack([s.energies, rng.standard_normal(64) * 5], axis=1))
p, e = multicharge_purity(two, phi, 0.4)
print(f"two charges: purity {p:.5f} (1/d_A = {1 / 6:.5f}), eta2 {e:.4f}, "
      f"Toeplitz: {multicharge_gram(two, phi, 0.4).toeplitz}")
