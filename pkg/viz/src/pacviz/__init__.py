"""Offline renderer for pacdyn run directories.

Consumes only the documented on-disk formats (manifest.json, series.csv,
snap_<step>.csv) and emits PNG figures, optionally assembled into a GIF.
"""

__version__ = "0.1.0"

from .render import RenderJob, render_animation, render_series, render_snapshots

__all__ = ["RenderJob", "render_snapshots", "render_series", "render_animation"]
