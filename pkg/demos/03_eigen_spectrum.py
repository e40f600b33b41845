# coding: utf-8
# Co- and cross-polarized eigen-spectra for a 225-patch surface pair with the
# user one wavelength away.
import numpy as np

from trihmimo import SurfaceSpec, UserLayout, Wavenumber, assemble, eigen_spectrum

k = Wavenumber(1.0)
tx = SurfaceSpec(15, 15, 0.4, 0.4, 0.4, 0.4)
user = SurfaceSpec(15, 15, 0.4, 0.4, 0.4, 0.4, (0, 0, 1.0))
H = assemble(tx, UserLayout((user,)), k)
print(H)

print("\nblock  ||H_pq||_F   #eig > 1e-6 max   top 3 eigenvalues")
for p in "xyz":
    for q in "xyz":
        rep = eigen_spectrum(H.block(p, q))
        top = ", ".join(f"{v:.3e}" for v in rep.eigenvalues[:3])
        print(f"  {p}{q}   {np.linalg.norm(H.block(p, q)):.4e}   {rep.significant:5d}   {top}")
