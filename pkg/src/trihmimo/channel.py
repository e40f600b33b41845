"""Tri-polarized near-field channel between a transmit surface and its users.

The full channel is stored polarization-major: row block ``p`` holds the
receive field component ``p`` and column block ``q`` the transmit current
orientation ``q``, with ``p, q`` running over ``x, y, z``. Inside each block,
receive patches are ordered user-major and patches follow the geometry
ordering (x fastest).
"""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .em_core import SingularityError, Wavenumber, radial_coeffs, sinc
from .geometry import SurfaceSpec, UserLayout, patch_centers

POLS = ("x", "y", "z")
MODES = {"TP": ("x", "y", "z"), "DP": ("x", "y"), "SP": ("x",)}


def _pair_blocks(rx_pts, tx_pts, tx_area, tx_wx, tx_wy, rx_area, k0):
    """3x3 blocks for every (rx, tx) pair, shape ``(M, N, 3, 3)``.

    ``rx_area`` is broadcast against the rx axis so users may carry
    different patch areas.
    """
    diff = rx_pts[:, None, :] - tx_pts[None, :, :]
    R = np.linalg.norm(diff, axis=-1)
    rhat = diff / R[..., None]
    x = k0 * R
    c1, c2 = radial_coeffs(x)
    amp = (tx_area * np.asarray(rx_area, dtype=float).reshape(-1, 1)
           * np.exp(1j * x) / (4.0 * np.pi * R)
           * sinc(k0 * diff[..., 0] * tx_wx / (2.0 * R))
           * sinc(k0 * diff[..., 1] * tx_wy / (2.0 * R)))
    C = c1[..., None, None] * np.eye(3) + c2[..., None, None] * (rhat[..., :, None] * rhat[..., None, :])
    return amp[..., None, None] * C


@dataclass(frozen=True)
class PatchBlock:
    matrix: np.ndarray
    tx_index: int
    rx_index: int
    separation: float


def patch_block(tx_center, rx_center, tx: SurfaceSpec, rx: SurfaceSpec, k: Wavenumber,
                tx_index: int = 0, rx_index: int = 0) -> PatchBlock:
    """Channel block between one transmit and one receive patch.

    The transmit patch widths enter the two sinc factors; the receiver only
    contributes its patch area as a scalar gain.
    """
    a = np.asarray(tx_center, dtype=float)
    b = np.asarray(rx_center, dtype=float)
    R = float(np.linalg.norm(b - a))
    if R == 0:
        raise SingularityError(f"coincident centers for rx patch {rx_index} and tx patch {tx_index}")
    blk = _pair_blocks(b[None], a[None], tx.patch_area, tx.patch_wx, tx.patch_wy,
                       rx.patch_area, k.k0)[0, 0]
    blk.setflags(write=False)
    return PatchBlock(blk, tx_index, rx_index, R)


class PolarizedChannel:
    """Immutable block channel matrix with access to its polarization blocks.

    Parameters
    ----------
    matrix : ndarray, shape (P * n_r, Q * n_s)
    n_r, n_s : int
        Receive and transmit patch counts.
    pols : tuple of str
        Polarizations present on both sides, in block order.
    nbar_r : int, optional
        Receive patches per user; ``n_r // nbar_r`` is the user count.
    """

    def __init__(self, matrix, n_r, n_s, pols=POLS, nbar_r=None):
        matrix = np.array(matrix, dtype=complex)
        pols = tuple(pols)
        if matrix.shape != (len(pols) * n_r, len(pols) * n_s):
            raise ValueError(f"matrix shape {matrix.shape} does not match "
                             f"{len(pols)} polarizations, n_r={n_r}, n_s={n_s}")
        if nbar_r is not None and n_r % nbar_r:
            raise ValueError(f"n_r={n_r} is not a multiple of nbar_r={nbar_r}")
        matrix.setflags(write=False)
        self.matrix = matrix
        self.n_r = int(n_r)
        self.n_s = int(n_s)
        self.pols = pols
        self.nbar_r = None if nbar_r is None else int(nbar_r)

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def n_users(self):
        return None if self.nbar_r is None else self.n_r // self.nbar_r

    def _index(self, p):
        try:
            return self.pols.index(p)
        except ValueError:
            raise KeyError(f"polarization {p!r} not in channel {self.pols}") from None

    def block(self, p, q) -> np.ndarray:
        """Block ``H_pq``: receive polarization ``p``, transmit polarization ``q``."""
        i, j = self._index(p), self._index(q)
        return self.matrix[i * self.n_r:(i + 1) * self.n_r, j * self.n_s:(j + 1) * self.n_s]

    def blocks(self) -> dict:
        return {(p, q): self.block(p, q).copy() for p in self.pols for q in self.pols}

    @classmethod
    def from_blocks(cls, blocks: dict, pols=POLS, nbar_r=None) -> "PolarizedChannel":
        rows = [np.hstack([blocks[(p, q)] for q in pols]) for p in pols]
        n_r, n_s = blocks[(pols[0], pols[0])].shape
        return cls(np.vstack(rows), n_r, n_s, pols, nbar_r)

    def __repr__(self):
        return (f"PolarizedChannel(pols={''.join(self.pols)}, n_r={self.n_r}, "
                f"n_s={self.n_s}, shape={self.shape})")


def _locate_singular(R, nbar_r):
    m, n = np.argwhere(R == 0)[0]
    return (f"receive patch {m} (user {m // nbar_r}, patch {m % nbar_r}) "
            f"coincides with transmit patch {n}")


def assemble(tx: SurfaceSpec, users: UserLayout, k: Wavenumber, workers: int = 1) -> PolarizedChannel:
    """Full ``3 N_r x 3 N_s`` tri-polarized channel for all users.

    Receive patches are split into contiguous chunks evaluated on a thread
    pool when ``workers > 1``; each chunk fills a disjoint slice of the
    result, so the output does not depend on the worker count.
    """
    tx_pts = patch_centers(tx)
    rx_pts = users.centers()
    nbar = users.nbar_r
    rx_area = np.repeat([u.patch_area for u in users.users], nbar)
    n_r, n_s = len(rx_pts), len(tx_pts)

    R = np.linalg.norm(rx_pts[:, None, :] - tx_pts[None, :, :], axis=-1)
    if np.any(R == 0):
        raise SingularityError(_locate_singular(R, nbar))

    out = np.empty((n_r, n_s, 3, 3), dtype=complex)

    def fill(sl):
        out[sl] = _pair_blocks(rx_pts[sl], tx_pts, tx.patch_area, tx.patch_wx, tx.patch_wy,
                               rx_area[sl], k.k0)

    workers = max(1, int(workers))
    if workers == 1:
        fill(slice(0, n_r))
    else:
        edges = np.linspace(0, n_r, min(workers, n_r) + 1).astype(int)
        chunks = [slice(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, chunks))

    # (m, n, p, q) -> (p, m, q, n)
    H = out.transpose(2, 0, 3, 1).reshape(3 * n_r, 3 * n_s)
    return PolarizedChannel(H, n_r, n_s, POLS, nbar)


def reduce_polarization(H: PolarizedChannel, mode: str) -> PolarizedChannel:
    """Restrict ``H`` to the polarizations of ``mode`` (``TP``, ``DP`` or ``SP``)."""
    try:
        keep = MODES[mode]
    except KeyError:
        raise ValueError(f"unknown polarization mode {mode!r}; expected one of {sorted(MODES)}") from None
    if keep == H.pols:
        return H
    blocks = {(p, q): H.block(p, q) for p in keep for q in keep}
    return PolarizedChannel.from_blocks(blocks, keep, H.nbar_r)


@dataclass(frozen=True)
class SurfaceConfiguration:
    """Per-patch amplitude and phase of each transmit polarization port.

    ``amplitudes`` and ``phases`` have shape ``(N_s, 3)`` with columns in
    ``x, y, z`` order.
    """

    amplitudes: np.ndarray
    phases: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=float)
        ph = np.asarray(self.phases, dtype=float)
        if amp.ndim != 2 or amp.shape[1] != 3 or amp.shape != ph.shape:
            raise ValueError(f"amplitudes and phases must both be (N_s, 3), got {amp.shape} and {ph.shape}")
        if np.any(amp < 0) or np.any(amp > 1) or not np.all(np.isfinite(amp)):
            raise ValueError("amplitudes must lie in [0, 1]")
        if not np.all(np.isfinite(ph)):
            raise ValueError("phases must be finite")
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "phases", ph)

    @classmethod
    def identity(cls, n_s: int) -> "SurfaceConfiguration":
        return cls(np.ones((n_s, 3)), np.zeros((n_s, 3)))

    def weights(self) -> np.ndarray:
        return self.amplitudes * np.exp(1j * self.phases)


def apply_configuration(H: PolarizedChannel, cfg: SurfaceConfiguration) -> PolarizedChannel:
    """Right-multiply ``H`` by the block-diagonal surface configuration."""
    if cfg.amplitudes.shape[0] != H.n_s:
        raise ValueError(f"configuration has {cfg.amplitudes.shape[0]} patches, channel has {H.n_s}")
    w = cfg.weights()[:, [POLS.index(q) for q in H.pols]]
    col_scale = w.T.reshape(-1)  # polarization-major, patch-minor
    return PolarizedChannel(H.matrix * col_scale[None, :], H.n_r, H.n_s, H.pols, H.nbar_r)


def write_channel(H: PolarizedChannel, path) -> tuple:
    """Write ``H`` as ``row_index,col_index,re,im`` CSV plus a JSON sidecar.

    Returns the CSV and sidecar paths. Values use 17 significant digits so
    that :func:`read_channel` reproduces the matrix exactly.
    """
    path = Path(path)
    rows, cols = np.indices(H.shape)
    with open(path, "w") as f:
        f.write("row_index,col_index,re,im\n")
        for r, c, v in zip(rows.ravel(), cols.ravel(), H.matrix.ravel()):
            f.write(f"{r},{c},{v.real:.17g},{v.imag:.17g}\n")
    meta = {
        "shape": list(H.shape),
        "n_r": H.n_r,
        "n_s": H.n_s,
        "nbar_r": H.nbar_r,
        "polarizations": list(H.pols),
        "layout": "polarization-major blocks; rows (rx pol, rx patch user-major), "
                  "cols (tx pol, tx patch); patches row-major x fastest",
    }
    sidecar = path.with_suffix(".json")
    sidecar.write_text(json.dumps(meta, indent=2) + "\n")
    return path, sidecar


def read_channel(path) -> PolarizedChannel:
    path = Path(path)
    meta = json.loads(path.with_suffix(".json").read_text())
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    M = np.zeros(tuple(meta["shape"]), dtype=complex)
    M[data[:, 0].astype(int), data[:, 1].astype(int)] = data[:, 2] + 1j * data[:, 3]
    return PolarizedChannel(M, meta["n_r"], meta["n_s"], tuple(meta["polarizations"]), meta["nbar_r"])
