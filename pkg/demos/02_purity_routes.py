"""Three ways to compute the same purity.

The protocol state is built explicitly and traced, the purity is
recomputed from return probabilities alone, and once more from the Gram
matrix of the Krylov vectors. The three agree to machine precision.
"""
from ergodic_epr import (
    ProtocolConfig,
    default_t0,
    haar_random_state,
    krylov_gram,
    purity_direct,
    purity_from_gram,
    purity_from_return_prob,
    sample_spectrum,
    unfold,
)

s = unfold(sample_spectrum("gue", 256, 1))
phi = haar_random_state(256, 2)
for d_A in (2, 4, 8, 16):
    cfg = ProtocolConfig(d_A, default_t0(s, d_A), s, phi)
    a = purity_from_return_prob(cfg)
    b = purity_direct(cfg)
    c = purity_from_gram(krylov_gram(s, phi, cfg.t0, d_A))
    print(f"d_A={d_A:2d}  return-prob {a:.12f}  direct {b:.12f}  gram {c:.12f}  "
          f"1/d_A {1 / d_A:.6f}")
