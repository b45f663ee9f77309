"""Steady states of a mass-conserving phase-field model with a dynamic
boundary condition, computed by integrating the projected second-order
gradient flow with an unconditionally energy-stable convex-splitting scheme.

Submodules are imported lazily so the command-line entry point can cap
thread counts before numpy loads.
"""

__version__ = "0.1.0"

_SUBMODULES = (
    "grid",
    "model",
    "projection",
    "stepper",
    "diagnostics",
    "experiments",
    "driver",
    "runio",
    "cli",
    "errors",
)

__all__ = list(_SUBMODULES)


def __getattr__(name):
    if name in _SUBMODULES:
        import importlib

        return importlib.import_module(f".{name}", __name__)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
