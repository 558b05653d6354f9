"""Level statistics and the spectral form factor of three model spectra.

Samples GUE, Poisson and picket-fence spectra, compares their mean
spacing ratios, and writes the ensemble-averaged form factor of the GUE
case (ramp, then plateau at 1/d_B) to ``sff_gue.svg``.
"""
import sys
from pathlib import Path

import numpy as np

from ergodic_epr import emit_svg, ramp_scan, sample_spectrum, spacing_ratio_statistic
from ergodic_epr.seeds import derive_seed

out_dir = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
d_B, n_real = 512, 30

for ens in ("gue", "poisson", "picket_fence"):
    r = np.mean([spacing_ratio_statistic(sample_spectrum(ens, d_B, derive_seed(0, i)))
                 for i in range(n_real)])
    print(f"{ens:>13}: <r> = {r:.3f}")

# unfolded units: t_H = 2 pi for every ensemble
t = np.linspace(0.05, 2 * np.pi * 4, 400)
scans = {e: ramp_scan(e, d_B, t, n_real, 0) for e in ("gue", "poisson")}
for e, sc in scans.items():
    late = sc.mean_sff[t > 2 * sc.heisenberg_time].mean() * d_B
    print(f"{e:>13}: late-time d_B K = {late:.3f}")

fit = scans["gue"].fit(0.1 * 2 * np.pi, 0.5 * 2 * np.pi)
print(f"GUE ramp: scaled slope {fit.scaled_slope:.3f}, reference 1/(2 pi) = {1 / (2 * np.pi):.3f}")

svg = emit_svg([scans["gue"].rows(), scans["poisson"].rows()], ["GUE", "Poisson"],
               logx=True, logy=True, xlabel="t (unfolded)", ylabel="K(t)",
               vlines=[(scans["gue"].heisenberg_time, "t_H")])
(out_dir / "sff_gue.svg").write_text(svg)
