import json
import os

import numpy as np
import pytest

SERIES_HEADER = (
    "step,time,mass_bulk,mass_surf,energy_bulk,energy_surf,energy_total,"
    "steady_residual,solver_iterations"
)


def write_snapshot(path, values, *, n, t, step, kappa=0.25, surface="double_well"):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# N={n} t={t!r} step={step}\n")
        fh.write(f"# kappa={kappa!r} surface={surface}\n")
        np.savetxt(fh, values, delimiter=",", fmt="%.17g")


def make_run_dir(root, fields_by_step, series_rows, n=8):
    """Handcraft a run directory following the documented formats."""
    os.makedirs(root, exist_ok=True)
    for step, values in fields_by_step.items():
        write_snapshot(
            os.path.join(root, f"snap_{step}.csv"),
            values,
            n=n,
            t=step * 1e-3,
            step=step,
        )
    with open(os.path.join(root, "series.csv"), "w", encoding="utf-8") as fh:
        fh.write(SERIES_HEADER + "\n")
        for row in series_rows:
            fh.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    manifest = {
        "snapshots": sorted(fields_by_step),
        "exit_reason": "max_steps",
        "grid": {"N": n, "h": 1.0 / n},
        "config": {"example": "custom"},
    }
    with open(os.path.join(root, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh)
    return root


@pytest.fixture
def tiny_run(tmp_path):
    n = 8
    rng = np.random.default_rng(3)
    fields = {
        0: np.full((n + 1, n + 1), 1.0),
        2: rng.uniform(-1, 1, size=(n + 1, n + 1)),
        4: np.full((n + 1, n + 1), -1.0),
    }
    rows = [
        (0, 0.0, 0.5, 1.0, 1.0, 0.25, 1.25, 1e-2, 0),
        (1, 1e-3, 0.5, 1.0, 0.9, 0.2, 1.1, 1e-3, 7),
        (2, 2e-3, 0.5, 1.0, 0.8, 0.15, 0.95, 1e-4, 6),
        (3, 3e-3, 0.5, 1.0, 0.75, 0.12, 0.87, 1e-5, 6),
        (4, 4e-3, 0.5, 1.0, 0.7, 0.1, 0.8, 1e-6, 5),
    ]
    return make_run_dir(str(tmp_path / "run"), fields, rows, n=n)
