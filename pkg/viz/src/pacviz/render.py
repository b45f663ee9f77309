"""Figure rendering: per-snapshot contour images and mass/energy curves.

Rendering is read-only over the run directory and deterministic, so
re-rendering with the same inputs and library versions reproduces the same
bytes.  All snapshots of a run share a fixed color scale [-1.1, 1.1] so the
phase colors stay comparable over time.
"""

from __future__ import annotations

import os
import warnings
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from . import runfiles

COLOR_SCALE = (-1.1, 1.1)
DPI = 100

# Mass curves get at least this much vertical padding so a conserving run
# draws visually horizontal lines instead of autoscaled noise.
MASS_PAD_MIN = 0.05

# Same color convention as the reference figures: bulk blue, boundary red.
MASS_COLORS = {"mass_bulk": "tab:blue", "mass_surf": "tab:red"}


@dataclass
class RenderJob:
    """What to render from one run directory.

    ``steps`` is either the string "all" or an explicit list of snapshot
    steps; selected steps without a snapshot file are skipped with a
    warning.
    """

    run_dir: str
    out_dir: str
    steps: str | list[int] = "all"
    image_size: int = 640  # pixels, square snapshot figures
    colormap: str = "RdBu_r"
    animate: bool = False

    def selected_steps(self) -> list[int]:
        manifest = runfiles.read_manifest(self.run_dir)
        available = list(manifest.get("snapshots", []))
        if not available:
            raise ValueError(f"{self.run_dir}: manifest lists no snapshots")
        if self.steps == "all":
            return available
        return list(self.steps)


def _figsize(pixels: int) -> tuple[float, float]:
    return pixels / DPI, pixels / DPI


def render_snapshots(job: RenderJob) -> list[str]:
    """One PNG per selected snapshot, named phi_<step>.png.

    Axes are in domain coordinates on [0,1]^2 with y upward; the color
    scale is fixed across the run.
    """
    os.makedirs(job.out_dir, exist_ok=True)
    out_paths = []
    for step in job.selected_steps():
        src = runfiles.snapshot_path(job.run_dir, step)
        if not os.path.exists(src):
            warnings.warn(f"snapshot for step {step} missing, skipping: {src}")
            continue
        values, meta = runfiles.read_snapshot(job.run_dir, step)

        fig, ax = plt.subplots(figsize=_figsize(job.image_size), dpi=DPI)
        im = ax.imshow(
            values,
            origin="lower",
            extent=(0.0, 1.0, 0.0, 1.0),
            vmin=COLOR_SCALE[0],
            vmax=COLOR_SCALE[1],
            cmap=job.colormap,
            interpolation="nearest",
        )
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_title(f"step {meta['step']}, t = {meta['t']:g}")
        fig.colorbar(im, ax=ax, shrink=0.85)
        path = os.path.join(job.out_dir, f"phi_{step}.png")
        fig.savefig(path)
        plt.close(fig)
        out_paths.append(path)
    return out_paths


def render_series(job: RenderJob) -> tuple[str, str]:
    """Mass and energy evolution plots; returns (mass_path, energy_path)."""
    series = runfiles.read_series(job.run_dir)
    if series["time"].size == 0:
        raise ValueError(f"{job.run_dir}: series.csv has no rows")
    os.makedirs(job.out_dir, exist_ok=True)
    t = series["time"]

    fig, ax = plt.subplots(figsize=(6.4, 4.0), dpi=DPI)
    lo = min(series["mass_bulk"].min(), series["mass_surf"].min())
    hi = max(series["mass_bulk"].max(), series["mass_surf"].max())
    pad = max(MASS_PAD_MIN, 0.25 * (hi - lo))
    for name, label in (("mass_bulk", "bulk"), ("mass_surf", "boundary")):
        marker = "o" if t.size == 1 else None
        ax.plot(t, series[name], color=MASS_COLORS[name], label=label, marker=marker)
    ax.set_ylim(lo - pad, hi + pad)
    ax.set_xlabel("t")
    ax.set_ylabel("mass")
    ax.set_title("mass evolution")
    ax.legend()
    fig.tight_layout()
    mass_path = os.path.join(job.out_dir, "mass_evolution.png")
    fig.savefig(mass_path)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6.4, 4.0), dpi=DPI)
    marker = "o" if t.size == 1 else None
    ax.plot(t, series["energy_total"], color="black", marker=marker)
    ax.set_xlabel("t")
    ax.set_ylabel("total energy")
    ax.set_title("energy decay")
    fig.tight_layout()
    energy_path = os.path.join(job.out_dir, "energy_decay.png")
    fig.savefig(energy_path)
    plt.close(fig)
    return mass_path, energy_path


def render_animation(job: RenderJob, frame_paths: list[str]) -> str:
    """Assemble already-rendered snapshot frames into an animated GIF."""
    from PIL import Image

    if not frame_paths:
        raise ValueError("no frames to animate")
    frames = [Image.open(p).convert("P", palette=Image.ADAPTIVE) for p in frame_paths]
    gif_path = os.path.join(job.out_dir, "phi_evolution.gif")
    frames[0].save(
        gif_path,
        save_all=True,
        append_images=frames[1:],
        duration=400,
        loop=0,
    )
    return gif_path
