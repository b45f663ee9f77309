"""Secondary acceptance: round trip against a real producer run directory.

The run is generated through the producer's command-line interface (its
external surface), never by importing it: the renderer must work from the
files alone.
"""

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from pacviz import RenderJob, render_series, render_snapshots
from pacviz import runfiles
from pacviz.render import MASS_PAD_MIN


@pytest.fixture(scope="module")
def producer_run(tmp_path_factory):
    """The mass-conservation reference run: ex1, N=64, dt=1e-3, 2000 steps."""
    root = tmp_path_factory.mktemp("producer")
    cfg = {
        "example": "ex1",
        "N": 64,
        "dt": 1e-3,
        "max_steps": 2000,
        "linear_tol": 1e-11,
        "snapshot_every": 500,
    }
    cfg_path = root / "config.json"
    cfg_path.write_text(json.dumps(cfg))
    run_dir = root / "run"
    subprocess.run(
        [sys.executable, "-m", "pacdyn.cli", "run",
         "--config", str(cfg_path), "--out", str(run_dir)],
        check=True,
        capture_output=True,
    )
    return str(run_dir)


def test_round_trip_renders_every_snapshot_and_both_series(producer_run, tmp_path):
    manifest = runfiles.read_manifest(producer_run)
    job = RenderJob(run_dir=producer_run, out_dir=str(tmp_path / "img"))
    frames = render_snapshots(job)
    assert len(frames) == len(manifest["snapshots"]) == 5
    mass_path, energy_path = render_series(job)
    assert os.path.exists(mass_path) and os.path.exists(energy_path)
    print(f"\nACCEPTANCE 11a (round trip): PASS - {len(frames)} snapshot images "
          f"plus mass/energy plots from {len(manifest['snapshots'])} snapshots")


def test_mass_curves_horizontal_to_plotting_resolution(producer_run, tmp_path):
    series = runfiles.read_series(producer_run)
    drift = max(
        series["mass_bulk"].max() - series["mass_bulk"].min(),
        series["mass_surf"].max() - series["mass_surf"].min(),
    )
    lo = min(series["mass_bulk"].min(), series["mass_surf"].min())
    hi = max(series["mass_bulk"].max(), series["mass_surf"].max())
    span = (hi - lo) + 2 * max(MASS_PAD_MIN, 0.25 * (hi - lo))
    plot_height_px = 400  # rendered figure height at 100 dpi
    assert drift / span * plot_height_px < 1.0
    render_series(RenderJob(run_dir=producer_run, out_dir=str(tmp_path / "img")))
    print(f"\nACCEPTANCE 11b (horizontal mass curves): PASS - worst drift "
          f"{drift:.2e} spans {drift / span * plot_height_px:.2e} px")


def test_re_render_idempotent(producer_run, tmp_path):
    job_a = RenderJob(run_dir=producer_run, out_dir=str(tmp_path / "a"))
    job_b = RenderJob(run_dir=producer_run, out_dir=str(tmp_path / "b"))
    files_a = render_snapshots(job_a) + list(render_series(job_a))
    files_b = render_snapshots(job_b) + list(render_series(job_b))
    for pa, pb in zip(files_a, files_b):
        with open(pa, "rb") as fa, open(pb, "rb") as fb:
            assert fa.read() == fb.read(), f"{pa} differs from {pb}"
    print("\nACCEPTANCE 11c (idempotent re-render): PASS - byte-identical images")


def test_ex1_final_snapshot_shows_centered_circular_region(producer_run):
    # regression baseline for the visual content: by step 2000 the negative
    # phase forms one centered blob
    values, meta = runfiles.read_snapshot(producer_run, 2000)
    n = meta["N"]
    ys, xs = np.nonzero(values < 0.0)
    assert len(ys) > 0
    cx, cy = xs.mean() / n, ys.mean() / n
    assert abs(cx - 0.5) <= 0.05 and abs(cy - 0.5) <= 0.05
    # boundary stays in the positive phase
    ring = np.concatenate([values[0, :], values[-1, :], values[:, 0], values[:, -1]])
    assert ring.min() > 0.5
