# coding: utf-8
# Distance-sorted round-robin clustering and what the selection precoders do
# to the received signal.
import numpy as np

from trihmimo import SurfaceSpec, UserLayout, Wavenumber, assemble
from trihmimo.precoding import build_precoders, cluster_channels, cluster_users, precoded_output

distances = [3.2, 0.5, 10.0, 1.0, 7.5, 2.0]
a = cluster_users(distances)
for q in "xyz":
    print(f"{q}-cluster: users {a.users(q)} at {[distances[u] for u in a.users(q)]}")

# a square instance (N_s == N_r) so that H_pq P_q x_q is defined
k = Wavenumber(1.0)
tx = SurfaceSpec(3, 2, 0.4, 0.4, 0.4, 0.4)
users = UserLayout(tuple(SurfaceSpec(2, 1, 0.4, 0.4, 0.4, 0.4, (0, 0, z)) for z in (0.5, 1.0, 10.0)))
H = assemble(tx, users, k)
a = cluster_users(users.distances)
P = build_precoders(a, users.nbar_r)
print("\nP_x + P_y + P_z == I:", np.array_equal(P.P_x + P.P_y + P.P_z, np.eye(H.n_r, dtype=int)))

rng = np.random.default_rng(1)
x = rng.normal(size=3 * H.n_r) + 1j * rng.normal(size=3 * H.n_r)
y = precoded_output(H, P, x, np.zeros(3 * H.n_r))
print("received power per polarization:", np.round([np.linalg.norm(y[i * 6:(i + 1) * 6]) ** 2 for i in range(3)], 8))

cc = cluster_channels(H, a)
for q, Hq in cc.items():
    print(f"cluster {q} sub-channel {Hq.shape}")
