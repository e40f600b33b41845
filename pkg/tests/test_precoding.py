import numpy as np
import pytest
from hypothesis import given, strategies as st

from trihmimo import SurfaceSpec, UserLayout, Wavenumber
from trihmimo.channel import POLS, assemble
from trihmimo.precoding import build_precoders, cluster_channels, cluster_users, precoded_output


def two_patch_instance(zs=(10.0, 0.5, 1.0)):
    k = Wavenumber(1.0)
    tx = SurfaceSpec(3, 2, 0.4, 0.4, 0.4, 0.4)
    users = UserLayout(tuple(SurfaceSpec(2, 1, 0.4, 0.4, 0.4, 0.4, (0.05 * i, 0, z))
                             for i, z in enumerate(zs)))
    return assemble(tx, users, k), users


def test_cluster_fig5():
    a = cluster_users([0.5, 1.0, 10.0])
    assert a.labels == ("x", "y", "z")
    assert a.users("x") == (0,) and a.users("y") == (1,) and a.users("z") == (2,)


def test_cluster_sorts_by_distance():
    a = cluster_users([10.0, 0.5, 1.0])
    assert a.labels == ("z", "x", "y")


def test_cluster_six_users():
    a = cluster_users([1, 2, 3, 4, 5, 6])
    assert a.users("x") == (0, 3) and a.users("y") == (1, 4) and a.users("z") == (2, 5)


def test_cluster_single_user():
    a = cluster_users([2.0])
    assert a.users("x") == (0,) and a.users("y") == () and a.users("z") == ()


def test_cluster_ties_stable():
    a = cluster_users([1.0, 1.0, 1.0, 0.5])
    assert a.labels == ("y", "z", "x", "x")


def test_cluster_validation():
    with pytest.raises(ValueError):
        cluster_users([])
    with pytest.raises(ValueError):
        cluster_users([1.0, 0.0])


@given(st.lists(st.floats(0.01, 100.0), min_size=1, max_size=40))
def test_cluster_partition_property(dists):
    a = cluster_users(dists)
    members = sorted(u for q in POLS for u in a.users(q))
    assert members == list(range(len(dists)))
    sizes = [len(a.users(q)) for q in POLS]
    assert max(sizes) - min(sizes) <= 1
    if len(dists) % 3 == 0:
        assert sizes == [len(dists) // 3] * 3
    for q in POLS:
        ds = [dists[u] for u in a.users(q)]
        assert ds == sorted(ds)


def test_precoders_fig5():
    P = build_precoders(cluster_users([0.5, 1.0, 10.0]), 9)
    ones, zeros = np.ones(9, dtype=int), np.zeros(9, dtype=int)
    assert np.array_equal(np.diag(P.P_x), np.concatenate([ones, zeros, zeros]))
    assert np.array_equal(np.diag(P.P_y), np.concatenate([zeros, ones, zeros]))
    assert np.array_equal(np.diag(P.P_z), np.concatenate([zeros, zeros, ones]))
    assert np.array_equal(P.P_x + P.P_y + P.P_z, np.eye(27, dtype=int))


def test_precoders_single_user():
    P = build_precoders(cluster_users([1.0]), 4)
    assert np.array_equal(P.P_x, np.eye(4, dtype=int))
    assert not P.P_y.any() and not P.P_z.any()


@given(st.lists(st.floats(0.01, 100.0), min_size=1, max_size=15), st.integers(1, 6))
def test_precoders_partition_property(dists, nbar):
    P = build_precoders(cluster_users(dists), nbar)
    total = P.P_x + P.P_y + P.P_z
    assert np.array_equal(total, np.eye(len(dists) * nbar, dtype=total.dtype))
    for M in (P.P_x, P.P_y, P.P_z):
        assert set(np.unique(M)) <= {0, 1}
        assert np.count_nonzero(M - np.diag(np.diag(M))) == 0


def test_cluster_channels_fig5(fig5_geometry):
    H = assemble(*fig5_geometry, Wavenumber(1.0))
    cc = cluster_channels(H, cluster_users(fig5_geometry[1].distances))
    for q in POLS:
        assert cc[q].shape == (9, 36)
    # user 1 sits in the y cluster: its rows of H_yy
    assert np.array_equal(cc["y"], H.block("y", "y")[9:18])
    assert np.array_equal(cc["x"], H.block("x", "x")[0:9])
    assert np.array_equal(cc["z"], H.block("z", "z")[18:27])


def test_cluster_channels_reordered_users():
    H, users = two_patch_instance()
    cc = cluster_channels(H, cluster_users(users.distances))
    # user order (10, 0.5, 1): x <- user 1, y <- user 2, z <- user 0
    assert np.array_equal(cc["x"], H.block("x", "x")[2:4])
    assert np.array_equal(cc["y"], H.block("y", "y")[4:6])
    assert np.array_equal(cc["z"], H.block("z", "z")[0:2])


def test_cluster_channels_single_user():
    k = Wavenumber(1.0)
    tx = SurfaceSpec(2, 2, 0.4, 0.4, 0.4, 0.4)
    H = assemble(tx, UserLayout((SurfaceSpec(2, 1, 0.4, 0.4, 0.4, 0.4, (0, 0, 1)),)), k)
    cc = cluster_channels(H, cluster_users(H.n_users * [1.0]))
    assert np.array_equal(cc["x"], H.block("x", "x"))
    assert cc["y"].shape == (0, 4) and cc["z"].shape == (0, 4)


def test_cluster_channels_mismatch(fig5_geometry):
    H = assemble(*fig5_geometry, Wavenumber(1.0))
    with pytest.raises(ValueError):
        cluster_channels(H, cluster_users([1.0, 2.0]))


def brute_force_output(H, assignment, nbar, x, n):
    """Zero the stream entries of users outside each cluster, then y = H x + n."""
    x = x.copy()
    n_r = H.n_r
    for i, q in enumerate(POLS):
        for user, label in enumerate(assignment.labels):
            if label != q:
                x[i * n_r + user * nbar:i * n_r + (user + 1) * nbar] = 0
    return H.matrix @ x + n


def test_precoded_output_matches_brute_force():
    H, users = two_patch_instance()
    a = cluster_users(users.distances)
    P = build_precoders(a, users.nbar_r)
    rng = np.random.default_rng(5)
    for _ in range(20):
        x = rng.normal(size=18) + 1j * rng.normal(size=18)
        n = rng.normal(size=18) + 1j * rng.normal(size=18)
        assert np.array_equal(precoded_output(H, P, x, n), brute_force_output(H, a, 2, x, n))


def test_precoded_output_structural_zeros():
    H, users = two_patch_instance()
    a = cluster_users(users.distances)
    P = build_precoders(a, users.nbar_r)
    n_r = H.n_r
    zero = np.zeros(3 * n_r, dtype=complex)
    for i, q in enumerate(POLS):
        for user, label in enumerate(a.labels):
            if label == q:
                continue
            for j in range(users.nbar_r):
                x = zero.copy()
                x[i * n_r + user * users.nbar_r + j] = 1.0 + 2.0j
                assert not precoded_output(H, P, x, zero).any()


def test_precoded_output_only_x_streams():
    H, users = two_patch_instance()
    n_r = H.n_r
    P = build_precoders(cluster_users([1.0, 2.0, 3.0]), users.nbar_r)
    P_only_x = type(P)(np.eye(n_r, dtype=int), 0 * P.P_y, 0 * P.P_z)
    rng = np.random.default_rng(6)
    x = rng.normal(size=3 * n_r) + 1j * rng.normal(size=3 * n_r)
    y = precoded_output(H, P_only_x, x, np.zeros(3 * n_r))
    for i, p in enumerate(POLS):
        assert np.allclose(y[i * n_r:(i + 1) * n_r], H.block(p, "x") @ x[:n_r], rtol=1e-14, atol=0)


def test_precoded_output_zero_streams_gives_noise():
    H, users = two_patch_instance()
    P = build_precoders(cluster_users(users.distances), users.nbar_r)
    n = np.arange(18) * (1 + 1j)
    assert np.array_equal(precoded_output(H, P, np.zeros(18), n), n)


def test_precoded_output_linear():
    H, users = two_patch_instance()
    P = build_precoders(cluster_users(users.distances), users.nbar_r)
    rng = np.random.default_rng(7)
    x1, x2, n1, n2 = (rng.normal(size=18) + 1j * rng.normal(size=18) for _ in range(4))
    a, b = 0.7 - 0.2j, -1.3 + 0.5j
    lhs = precoded_output(H, P, a * x1 + b * x2, a * n1 + b * n2)
    rhs = a * precoded_output(H, P, x1, n1) + b * precoded_output(H, P, x2, n2)
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-18)


def test_precoded_output_dimension_errors(fig5_geometry):
    H, users = two_patch_instance()
    P = build_precoders(cluster_users(users.distances), users.nbar_r)
    with pytest.raises(ValueError):
        precoded_output(H, P, np.zeros(17), np.zeros(18))
    H5 = assemble(*fig5_geometry, Wavenumber(1.0))
    P5 = build_precoders(cluster_users(fig5_geometry[1].distances), 9)
    with pytest.raises(ValueError, match="N_s == N_r"):
        precoded_output(H5, P5, np.zeros(81), np.zeros(81))
