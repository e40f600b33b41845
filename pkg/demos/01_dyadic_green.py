# coding: utf-8
# The dyadic Green's function and how its radial/transverse weights behave
# with distance. Near the source the c2 r r^T term is as large as the identity
# term, which is what gives the z polarization any gain at all.
import numpy as np

from trihmimo import Wavenumber, dyadic_coeffs, dyadic_green, scalar_green

k = Wavenumber(1.0)

print(" k0 R      |c1|      |c1+c2|   ratio")
for k0R in (0.5, 1.0, np.pi, 10.0, 100.0, 1000.0):
    c = dyadic_coeffs(k0R)
    print(f"{k0R:8.2f}  {abs(c.c1):8.4f}  {abs(c.c1 + c.c2):8.4f}  {abs(c.c1 + c.c2) / abs(c.c1):.4f}")

# trace of G / g is 2 at every distance
r = np.random.default_rng(0).normal(size=(5, 3))
G = dyadic_green(r, np.zeros(3), k)
print("\ntrace(G)/g at random points:",
      np.round(G.trace(axis1=1, axis2=2) / scalar_green(r, np.zeros(3), k), 12))

# on boresight the dyad is diagonal
print("\nG at (0, 0, lambda) / g:")
print(np.round(dyadic_green((0, 0, 1.0), (0, 0, 0), k) * 4 * np.pi, 6))
