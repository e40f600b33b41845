"""Eigen-spectra of polarization blocks and log-det capacities."""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import MODES, assemble, reduce_polarization
from .em_core import Wavenumber
from .geometry import SurfaceSpec, UserLayout
from .precoding import cluster_channels, cluster_users

SIGNIFICANT_REL = 1e-6
CLUSTERED_MODE = "TP_clustered"
CAPACITY_FORMULA = "C = log2 det(I + (snr/N_t) H H^H), N_t = number of columns of H"


@dataclass(frozen=True)
class EigenReport:
    label: str
    eigenvalues: np.ndarray
    significant: int
    n_clamped: int


def eigen_spectrum(H_block, label: str = "") -> EigenReport:
    """Eigenvalues of ``H^H H`` sorted descending, negatives clamped to zero.

    ``significant`` counts eigenvalues above ``1e-6`` times the largest one.
    """
    H = np.asarray(H_block, dtype=complex)
    if H.size == 0:
        return EigenReport(label, np.zeros(0), 0, 0)
    if not np.all(np.isfinite(H)):
        raise ValueError("channel block has non-finite entries")
    ev = np.linalg.eigvalsh(H.conj().T @ H)[::-1]
    n_clamped = int(np.sum(ev < 0))
    ev = np.clip(ev, 0.0, None)
    top = ev[0]
    sig = int(np.sum(ev > SIGNIFICANT_REL * top)) if top > 0 else 0
    return EigenReport(label, ev, sig, n_clamped)


def capacity(H_eff, snr_linear: float) -> float:
    """Equal-power MIMO capacity in bits/s/Hz.

    Parameters
    ----------
    H_eff : array_like, shape (n_rx, n_tx)
    snr_linear : float
        Total transmit SNR, split evenly over the ``n_tx`` columns.
    """
    if snr_linear < 0:
        raise ValueError("snr must be nonnegative")
    H = np.asarray(H_eff, dtype=complex)
    if not np.all(np.isfinite(H)):
        raise ValueError("channel has non-finite entries")
    if H.size == 0 or snr_linear == 0:
        return 0.0
    n_t = H.shape[1]
    gram = H.conj().T @ H if H.shape[0] >= n_t else H @ H.conj().T
    ev = np.clip(np.linalg.eigvalsh(gram), 0.0, None)
    return float(np.sum(np.log1p(snr_linear / n_t * ev)) / np.log(2.0))


class CapacityRow(NamedTuple):
    mode: str
    snr_db: float
    capacity_bps_hz: float


def capacity_sweep(tx: SurfaceSpec, users: UserLayout, k: Wavenumber, snr_db_grid,
                   modes=("TP", "DP", "SP"), workers: int = 1, H=None) -> list:
    """Capacity of each polarization mode over an SNR grid.

    ``TP_clustered`` sums the capacities of the three user-cluster sub-channels.
    Rows come out mode-major in the order of ``modes``.
    """
    if H is None:
        H = assemble(tx, users, k, workers=workers)
    effective = {}
    for mode in modes:
        if mode == CLUSTERED_MODE:
            cc = cluster_channels(H, cluster_users(users.distances))
            effective[mode] = [m for _, m in cc.items()]
        elif mode in MODES:
            effective[mode] = [reduce_polarization(H, mode).matrix]
        else:
            raise ValueError(f"unknown mode {mode!r}")
    rows = []
    for mode in modes:
        for snr_db in snr_db_grid:
            rho = 10.0 ** (float(snr_db) / 10.0)
            c = sum(capacity(m, rho) for m in effective[mode])
            rows.append(CapacityRow(mode, float(snr_db), c))
    return rows
