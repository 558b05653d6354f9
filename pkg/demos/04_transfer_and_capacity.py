"""Operator transfer through the generated state and the d_B it requires.

Compares the Gram spectrum of an ergodic (GUE, flat) state with a
Poisson, Haar-random one, checks the worst-case transfer error bound on
random operators, and tabulates the minimal d_B for transfer error 0.1.
"""
import numpy as np

from ergodic_epr import (
    bhatia_davis_check,
    capacity_comparison,
    default_t0,
    flat_state,
    haar_random_state,
    krylov_gram,
    make_rng,
    sample_spectrum,
    transfer_diagnostics,
    transfer_error,
    unfold,
)

d_A, d_B = 8, 512
rng = make_rng(3)
for ens, phi in (("gue", flat_state(d_B)), ("poisson", haar_random_state(d_B, 4))):
    s = unfold(sample_spectrum(ens, d_B, 5))
    G = krylov_gram(s, phi, default_t0(s, d_A), d_A)
    diag = transfer_diagnostics(G)
    O = rng.standard_normal((d_A, d_A)) + 1j * rng.standard_normal((d_A, d_A))
    print(f"{ens:>8}: r_k in [{diag.r_min:.3f}, {diag.r_max:.3f}], eta2 {diag.eta2:.2e}, "
          f"Delta_2(O,O) {transfer_error(G, O, O):.2e} <= {diag.worst_case_error:.2e}, "
          f"Bhatia-Davis holds: {bhatia_davis_check(diag)[0]}")

print()
print(f"{'case':>22} {'d_A':>5} {'min d_B':>12}")
for row in capacity_comparison([4, 16, 64], 0.1):
    print(f"{row.case:>22} {row.d_A:5d} {row.min_dB:12.1f}")
