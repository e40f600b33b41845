# coding: utf-8
# Transmit-side spatial correlation between the end patches of a linear array
# (the three spacings of Fig. 3 style sweeps). The exact value reduces to
# sinc(k0 d) once normalized; the printed small-d expansion grows instead.
from trihmimo import Wavenumber, corr_sweep

k = Wavenumber(1.0)
rows = corr_sweep([0.1, 0.2, 0.4], 50, k)

print("spacing  N   d [m]   exact/ref   expansion/ref")
for r in rows:
    if r.n_antennas in (2, 3, 5, 10, 20, 50):
        print(f"{r.spacing_over_lambda:5.1f} {r.n_antennas:4d} {r.distance_m:7.2f} "
              f"{r.corr_exact_norm:+10.4f} {r.corr_taylor_paper_norm:12.4f}")
