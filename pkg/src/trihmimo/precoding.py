"""User-cluster precoding: each user is served on exactly one polarization.

Users are ranked by distance to the transmitter and dealt round-robin onto
``x, y, z``. The selection precoders are 0/1 diagonal matrices over the
user-major receive-antenna index. User indices are 0-based throughout.
"""

from dataclasses import dataclass

import numpy as np

from .channel import POLS, PolarizedChannel


@dataclass(frozen=True)
class ClusterAssignment:
    """Disjoint user subsets per polarization, each in ascending-distance order."""

    subsets: dict
    labels: tuple

    @property
    def K(self) -> int:
        return len(self.labels)

    def users(self, q) -> tuple:
        return self.subsets[q]


def cluster_users(distances) -> ClusterAssignment:
    """Sort users by distance and assign ranks 1, 2, 3, 4, ... to x, y, z, x, ...

    Ties keep the original user order.
    """
    d = np.asarray(distances, dtype=float).ravel()
    if d.size < 1:
        raise ValueError("at least one user is required")
    if np.any(~(d > 0)):
        raise ValueError("distances must be positive")
    order = np.argsort(d, kind="stable")
    labels = [None] * d.size
    subsets = {q: [] for q in POLS}
    for rank, user in enumerate(order):
        q = POLS[rank % 3]
        labels[user] = q
        subsets[q].append(int(user))
    return ClusterAssignment({q: tuple(v) for q, v in subsets.items()}, tuple(labels))


@dataclass(frozen=True)
class SelectionPrecoders:
    P_x: np.ndarray
    P_y: np.ndarray
    P_z: np.ndarray

    def __getitem__(self, q) -> np.ndarray:
        return {"x": self.P_x, "y": self.P_y, "z": self.P_z}[q]


def build_precoders(a: ClusterAssignment, nbar_r: int) -> SelectionPrecoders:
    """Diagonal selection matrices of size ``K * nbar_r``.

    Entry ``(k * nbar_r + i)`` of ``P_q`` is 1 exactly when user ``k`` is in
    cluster ``q``, so the three matrices sum to the identity.
    """
    if nbar_r < 1:
        raise ValueError("nbar_r must be >= 1")
    mats = []
    for q in POLS:
        sel = np.array([lab == q for lab in a.labels], dtype=np.int64)
        P = np.diag(np.repeat(sel, nbar_r))
        P.setflags(write=False)
        mats.append(P)
    return SelectionPrecoders(*mats)


@dataclass(frozen=True)
class ClusterChannels:
    H_x: np.ndarray
    H_y: np.ndarray
    H_z: np.ndarray

    def __getitem__(self, q) -> np.ndarray:
        return {"x": self.H_x, "y": self.H_y, "z": self.H_z}[q]

    def items(self):
        return [(q, self[q]) for q in POLS]


def cluster_channels(H: PolarizedChannel, a: ClusterAssignment) -> ClusterChannels:
    """Stack, per cluster ``q``, the ``H_qq`` rows of the users assigned to ``q``."""
    if H.pols != POLS:
        raise ValueError(f"cluster channels need a tri-polarized channel, got {H.pols}")
    if H.nbar_r is None or H.n_users != a.K:
        raise ValueError(f"channel has {H.n_users} users, assignment has {a.K}")
    nbar = H.nbar_r
    out = []
    for q in POLS:
        Hqq = H.block(q, q)
        rows = np.concatenate([np.arange(u * nbar, (u + 1) * nbar) for u in a.users(q)] or
                              [np.zeros(0, dtype=int)])
        out.append(Hqq[rows].copy())
    return ClusterChannels(*out)


def precoded_output(H: PolarizedChannel, P: SelectionPrecoders, x_streams, noise) -> np.ndarray:
    """Received vector ``y_p = sum_q H_pq P_q x_q + n_p`` for ``p`` in ``x, y, z``.

    ``x_streams`` and ``noise`` are stacked ``[x_x; x_y; x_z]`` vectors. With
    the selection precoders sized by the receive index, each ``H_pq P_q``
    product is only defined when ``N_s == N_r``; other shapes raise.
    """
    if H.pols != POLS:
        raise ValueError(f"precoded relation needs a tri-polarized channel, got {H.pols}")
    n_r, n_s = H.n_r, H.n_s
    if P.P_x.shape != (n_r, n_r):
        raise ValueError(f"precoders are {P.P_x.shape[0]}-dimensional, channel has N_r={n_r}")
    if n_s != n_r:
        raise ValueError(f"H_pq P_q requires N_s == N_r, got N_s={n_s}, N_r={n_r}")
    x = np.asarray(x_streams, dtype=complex).ravel()
    n = np.asarray(noise, dtype=complex).ravel()
    if x.size != 3 * n_r or n.size != 3 * n_r:
        raise ValueError(f"streams and noise must have length {3 * n_r}, got {x.size} and {n.size}")
    precoded = np.concatenate([P[q] @ x[i * n_r:(i + 1) * n_r] for i, q in enumerate(POLS)])
    return H.matrix @ precoded + n
