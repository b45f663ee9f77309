"""Readers for the run-directory file formats.

These parse the producer's documented formats directly from disk:

  manifest.json   JSON object with at least "snapshots" (list of steps)
  series.csv      header row `step,time,mass_bulk,mass_surf,energy_bulk,
                  energy_surf,energy_total,steady_residual,solver_iterations`
  snap_<k>.csv    two `#` header lines (`N=.. t=.. step=..` and
                  `kappa=.. surface=..`) then (N+1) x (N+1) comma-separated
                  values, row r holding y = r*h and column c holding x = c*h
"""

from __future__ import annotations

import json
import os

import numpy as np

SERIES_COLUMNS = (
    "step",
    "time",
    "mass_bulk",
    "mass_surf",
    "energy_bulk",
    "energy_surf",
    "energy_total",
    "steady_residual",
    "solver_iterations",
)


def read_manifest(run_dir: str) -> dict:
    with open(os.path.join(run_dir, "manifest.json"), encoding="utf-8") as fh:
        return json.load(fh)


def read_series(run_dir: str) -> dict[str, np.ndarray]:
    """Columns of series.csv as arrays, keyed by column name."""
    path = os.path.join(run_dir, "series.csv")
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if tuple(header) != SERIES_COLUMNS:
            raise ValueError(f"{path}: unexpected series header {header}")
        rows = [line.split(",") for line in fh.read().splitlines() if line]
    if not rows:
        return {name: np.empty(0) for name in SERIES_COLUMNS}
    table = np.array(rows, dtype=float)
    if table.shape[1] != len(SERIES_COLUMNS):
        raise ValueError(f"{path}: rows have {table.shape[1]} fields")
    return {name: table[:, k] for k, name in enumerate(SERIES_COLUMNS)}


def snapshot_path(run_dir: str, step: int) -> str:
    return os.path.join(run_dir, f"snap_{step}.csv")


def read_snapshot(run_dir: str, step: int) -> tuple[np.ndarray, dict]:
    """Field values and header metadata of one snapshot."""
    path = snapshot_path(run_dir, step)
    with open(path, encoding="utf-8") as fh:
        line1, line2 = fh.readline(), fh.readline()
        try:
            if not (line1.startswith("#") and line2.startswith("#")):
                raise ValueError("missing '#' header lines")
            fields = dict(
                kv.split("=", 1) for kv in line1[1:].split() + line2[1:].split()
            )
            meta = {
                "N": int(fields["N"]),
                "t": float(fields["t"]),
                "step": int(fields["step"]),
                "kappa": float(fields["kappa"]),
                "surface": fields["surface"],
            }
        except (KeyError, ValueError) as exc:
            raise ValueError(f"{path}: unreadable snapshot header: {exc}") from exc
        values = np.loadtxt(fh, delimiter=",", ndmin=2)
    n = meta["N"]
    if values.shape != (n + 1, n + 1):
        raise ValueError(
            f"{path}: body has shape {values.shape}, expected {(n + 1, n + 1)}"
        )
    return values, meta
