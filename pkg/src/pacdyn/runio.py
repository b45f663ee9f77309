"""On-disk formats of a run directory: manifest, series, snapshots.

A run directory contains

    manifest.json    config echo, grid metadata, timestamps, exit reason
    series.csv       one diagnostic row per step (including step 0)
    snap_<k>.csv     field snapshot at step k

The series file is written append-only with a flush per row, so a killed
run leaves a parseable prefix.  Snapshots are row-major (N+1) x (N+1) CSV
grids of field values preceded by two comment lines

    # N=<n> t=<time> step=<k>
    # kappa=<v> surface=<variant>

where row r holds the values at y = r*h and column c those at x = c*h.
Floats are written with 17 significant digits so round-trips are exact.
"""

from __future__ import annotations

import json

import numpy as np

from .diagnostics import DiagRecord

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

_FMT = "%.17g"


def _fmt(x: float) -> str:
    return _FMT % x


class SeriesWriter:
    """Incremental, flushed-per-row writer for series.csv."""

    def __init__(self, path: str):
        self.path = path
        self._fh = open(path, "w", encoding="utf-8")
        self._fh.write(",".join(SERIES_COLUMNS) + "\n")
        self._fh.flush()

    def append(self, rec: DiagRecord) -> None:
        row = (
            str(rec.step),
            _fmt(rec.time),
            _fmt(rec.mass_bulk),
            _fmt(rec.mass_surf),
            _fmt(rec.energy_bulk),
            _fmt(rec.energy_surf),
            _fmt(rec.energy_total),
            _fmt(rec.steady_residual),
            str(rec.solver_iterations),
        )
        self._fh.write(",".join(row) + "\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_series(path: str, *, allow_partial_tail: bool = False) -> list[DiagRecord]:
    """Parse series.csv back into records.

    With ``allow_partial_tail`` a trailing incomplete line (killed run) is
    ignored instead of raising.
    """
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].split(",") != list(SERIES_COLUMNS):
        raise ValueError(f"{path}: missing or unexpected series header")
    out = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        try:
            if len(parts) != len(SERIES_COLUMNS):
                raise ValueError("wrong field count")
            out.append(
                DiagRecord(
                    step=int(parts[0]),
                    time=float(parts[1]),
                    mass_bulk=float(parts[2]),
                    mass_surf=float(parts[3]),
                    energy_bulk=float(parts[4]),
                    energy_surf=float(parts[5]),
                    energy_total=float(parts[6]),
                    steady_residual=float(parts[7]),
                    solver_iterations=int(parts[8]),
                )
            )
        except ValueError as exc:
            if allow_partial_tail and lineno == len(lines):
                break
            raise ValueError(f"{path}:{lineno}: corrupt series row: {exc}") from exc
    return out


def snapshot_name(step: int) -> str:
    return f"snap_{step}.csv"


def write_snapshot(
    path: str,
    u: np.ndarray,
    *,
    n: int,
    t: float,
    step: int,
    kappa: float,
    surface_variant: str,
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# N={n} t={_fmt(t)} step={step}\n")
        fh.write(f"# kappa={_fmt(kappa)} surface={surface_variant}\n")
        np.savetxt(fh, u, delimiter=",", fmt=_FMT)


def read_snapshot(path: str) -> tuple[np.ndarray, dict]:
    """Load a snapshot; returns (values, header metadata)."""
    with open(path, encoding="utf-8") as fh:
        line1 = fh.readline()
        line2 = fh.readline()
        meta = _parse_snapshot_header(path, line1, line2)
        values = np.loadtxt(fh, delimiter=",", ndmin=2)
    n = meta["N"]
    if values.shape != (n + 1, n + 1):
        raise ValueError(
            f"{path}: snapshot body has shape {values.shape}, expected {(n + 1, n + 1)}"
        )
    return values, meta


def _parse_snapshot_header(path: str, line1: str, line2: str) -> dict:
    try:
        if not line1.startswith("#") or not line2.startswith("#"):
            raise ValueError("missing '#' header lines")
        fields = dict(
            kv.split("=", 1) for kv in (line1[1:].split() + line2[1:].split())
        )
        return {
            "N": int(fields["N"]),
            "t": float(fields["t"]),
            "step": int(fields["step"]),
            "kappa": float(fields["kappa"]),
            "surface": fields["surface"],
        }
    except (ValueError, KeyError) as exc:
        raise ValueError(f"{path}: unreadable snapshot header: {exc}") from exc


def write_manifest(path: str, manifest: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_manifest(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
