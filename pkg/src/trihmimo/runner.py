"""Experiment dispatch and file output.

Each experiment writes its CSV/JSON products plus ``run_summary.json`` into
the output directory. CSV floats use 12 significant digits so that repeated
runs of the same config produce byte-identical files.
"""

import csv
import json
import logging
import time
from pathlib import Path

import numpy as np

from . import correlation as corr
from .channel import POLS, assemble, write_channel
from .config import ConfigError, ExperimentConfig
from .em_core import radial_coeffs
from .geometry import aperture, near_field_boundary, patch_size_feasible
from .metrics import CAPACITY_FORMULA, capacity_sweep, eigen_spectrum
from .precoding import build_precoders, cluster_users

log = logging.getLogger(__name__)


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".12g")
    return str(v)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def _write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _channel_checks(H) -> dict:
    n_r, n_s = H.n_r, H.n_s
    blocks = H.matrix.reshape(3, n_r, 3, n_s).transpose(1, 3, 0, 2)
    asym = float(np.max(np.abs(blocks - blocks.transpose(0, 1, 3, 2)))) if blocks.size else 0.0
    return {
        "patch_block_max_asymmetry": asym,
        "patch_blocks_symmetric": asym <= 1e-13,
        "finite": bool(np.all(np.isfinite(H.matrix))),
    }


def _trace_identity_check() -> dict:
    x = np.logspace(-3, 6, 1000)
    c1, c2 = radial_coeffs(x)
    err = float(np.max(np.abs(3 * c1 + c2 - 2)))
    return {"trace_identity_max_error": err, "trace_identity_ok": err <= 1e-12}


def run_feasibility(cfg, out, **_):
    k = cfg.wavenumber
    tx = cfg.tx_spec()
    layout = cfg.layout()
    margin = cfg.feasibility_margin
    users = []
    for i, (u, R) in enumerate(zip(layout.users, layout.distances)):
        try:
            nf = near_field_boundary(tx, u, k)
        except ValueError:
            nf = None
        rep = patch_size_feasible(tx, R, k, margin)
        users.append({
            "user": i,
            "distance_m": float(R),
            "aperture_m": aperture(u),
            "near_field_boundary_m": nf,
            "in_near_field": None if nf is None else bool(R <= nf),
            "tx_patch": rep.as_dict(),
            "rx_patch": patch_size_feasible(u, R, k, margin).as_dict(),
            "rx_not_larger_than_tx": bool(u.patch_wx <= tx.patch_wx and u.patch_wy <= tx.patch_wy),
        })
    report = {
        "wavelength_m": k.wavelength,
        "margin": margin,
        "tx_aperture_m": aperture(tx),
        "tx_patches": tx.n_patches,
        "users": users,
        "all_feasible": all(u["tx_patch"]["feasible"] and u["rx_patch"]["feasible"] for u in users),
    }
    _write_json(out / "feasibility.json", report)
    return {"files": ["feasibility.json"], "checks": {"all_feasible": report["all_feasible"]}}


def run_correlation_sweep(cfg, out, **_):
    k = cfg.wavenumber
    spacings = [s * k.wavelength for s in cfg.correlation.spacings_over_lambda]
    rows = corr.corr_sweep(spacings, cfg.correlation.n_max, k)
    write_csv(out / "correlation.csv", corr.SWEEP_COLUMNS, rows)
    checks = {}
    for s in cfg.correlation.spacings_over_lambda:
        vals = [r.corr_exact_norm for r in rows if r.spacing_over_lambda == s]
        checks[f"spacing_{fmt(s)}_last_below_first"] = bool(abs(vals[-1]) < abs(vals[0]))
    checks["values_in_unit_interval"] = bool(all(-1 <= r.corr_exact_norm <= 1 for r in rows))
    return {"files": ["correlation.csv"], "checks": checks}


def _feasibility_warnings(cfg):
    k = cfg.wavenumber
    tx = cfg.tx_spec()
    layout = cfg.layout()
    warnings = []
    for i, R in enumerate(layout.distances):
        rep = patch_size_feasible(tx, R, k, cfg.feasibility_margin)
        if not rep.feasible:
            msg = (f"user {i} at {R:.6g} m: tx patch widths exceed "
                   f"{rep.margin:g} * 2 sqrt(lambda R) = {rep.bound:.6g} m "
                   f"(ratios {rep.ratio_x:.4g}, {rep.ratio_y:.4g})")
            log.warning(msg)
            warnings.append(msg)
    return warnings


def run_eigen_spectrum(cfg, out, H, **_):
    files, counts, clamped, sum_err = [], {}, 0, 0.0
    for p in POLS:
        for q in POLS:
            blk = H.block(p, q)
            rep = eigen_spectrum(blk, label=p + q)
            name = f"eigen_{p}{q}.csv"
            write_csv(out / name, ("rank", "eigenvalue"),
                      ((i + 1, ev) for i, ev in enumerate(rep.eigenvalues)))
            files.append(name)
            counts[p + q] = rep.significant
            clamped += rep.n_clamped
            fro2 = float(np.linalg.norm(blk) ** 2)
            if fro2 > 0:
                sum_err = max(sum_err, abs(rep.eigenvalues.sum() - fro2) / fro2)
    fro = {p + q: float(np.linalg.norm(H.block(p, q))) for p in POLS for q in POLS}
    cross_ratio = {p + q: fro[p + q] / fro[p + p] for p in POLS for q in POLS if p != q}
    checks = {
        "significant_eigenvalues": counts,
        "clamped_negative_eigenvalues": clamped,
        "frobenius_norms": fro,
        "cross_over_co_frobenius": cross_ratio,
        "eigen_sum_vs_frobenius_max_rel_error": sum_err,
    }
    return {"files": files, "checks": checks}


def run_capacity_sweep(cfg, out, H, **_):
    warnings = _feasibility_warnings(cfg)
    rows = capacity_sweep(cfg.tx_spec(), cfg.layout(), cfg.wavenumber, cfg.snr_db_grid,
                          cfg.polarization_modes, H=H)
    write_csv(out / "capacity.csv", ("mode", "snr_db", "capacity_bps_hz"), rows)
    checks = {"capacity_formula": CAPACITY_FORMULA}
    modes = [m for m in ("TP", "DP", "SP") if m in cfg.polarization_modes]
    if len(modes) > 1:
        by = {(r.mode, r.snr_db): r.capacity_bps_hz for r in rows}
        checks["ordering_" + ">=".join(modes)] = bool(all(
            by[(a, s)] >= by[(b, s)] for a, b in zip(modes, modes[1:]) for s in map(float, cfg.snr_db_grid)))
    return {"files": ["capacity.csv"], "checks": checks, "warnings": warnings}


def run_cluster_demo(cfg, out, H, **_):
    layout = cfg.layout()
    a = cluster_users(layout.distances)
    write_csv(out / "clusters.csv", ("user", "distance_m", "polarization"),
              ((i, d, lab) for i, (d, lab) in enumerate(zip(layout.distances, a.labels))))
    P = build_precoders(a, layout.nbar_r)
    partition = bool(np.array_equal(P.P_x + P.P_y + P.P_z, np.eye(layout.n_r, dtype=P.P_x.dtype)))
    checks = {
        "subsets": {q: list(a.users(q)) for q in POLS},
        "precoders_partition_identity": partition,
    }
    return {"files": ["clusters.csv"], "checks": checks}


DISPATCH = {
    "feasibility": run_feasibility,
    "correlation_sweep": run_correlation_sweep,
    "eigen_spectrum": run_eigen_spectrum,
    "capacity_sweep": run_capacity_sweep,
    "cluster_demo": run_cluster_demo,
}
NEEDS_CHANNEL = ("eigen_spectrum", "capacity_sweep", "cluster_demo")


def run(cfg: ExperimentConfig, experiment=None, out_dir=None, dump_channel=False, threads=1) -> dict:
    """Run one experiment and write its outputs; returns the run summary.

    Raises :class:`ConfigError` for unusable configs and
    :class:`~trihmimo.em_core.SingularityError` for coincident patches.
    """
    experiment = experiment or cfg.experiment
    if experiment is None:
        raise ConfigError("no experiment given on the command line or in field 'experiment'")
    cfg.check_for(experiment)
    out_dir = out_dir or cfg.output
    if out_dir is None:
        raise ConfigError("no output directory: pass --out or set field 'output'")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    t0 = time.perf_counter()
    H = None
    files = []
    if experiment in NEEDS_CHANNEL or (dump_channel and experiment == "feasibility"):
        H = assemble(cfg.tx_spec(), cfg.layout(), cfg.wavenumber, workers=threads)
        if dump_channel:
            paths = write_channel(H, out / "channel.csv")
            files.extend(p.name for p in paths)
    result = DISPATCH[experiment](cfg, out, H=H)
    files = result["files"] + files

    checks = dict(result.get("checks", {}))
    checks.update(_trace_identity_check())
    if H is not None:
        checks.update(_channel_checks(H))
        checks["channel_shape"] = list(H.shape)
    summary = {
        "experiment": experiment,
        "config": cfg.echo(),
        "threads": threads,
        "wall_time_s": time.perf_counter() - t0,
        "files": files,
        "invariant_checks": checks,
        "warnings": result.get("warnings", []),
    }
    _write_json(out / "run_summary.json", summary)
    return summary
