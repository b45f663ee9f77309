"""Built-in initial conditions and run-configuration parsing.

The five built-ins cover the shipped experiments:

    ex1     zero in the interior, +1 trace on the boundary
    ex2     +1 on the closed rectangle [0.25, 0.75] x [0, 0.5], -1 elsewhere
    ex3     0.3 + 0.01 cos(6 pi x) cos(6 pi y)
    ex4_30  semicircular droplet on the bottom wall, contact-line surface
            potential with static angle 30 degrees
    ex4_150 same droplet, static angle 150 degrees

``custom`` runs a user-supplied initial field in the snapshot file format.
All numeric defaults follow the reference experiment protocol: dt = 0.001,
gamma1 = gamma2 = S1 = S2 = 100, kappa = 2h.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import grid as grid_mod
from . import model, runio
from .errors import ConfigError, InvalidGridError
from .grid import GridSpec
from .model import ModelParams, SurfacePotentialSpec
from .stepper import StepperConfig

EXAMPLE_NAMES = ("ex1", "ex2", "ex3", "ex4_30", "ex4_150")

EXAMPLE_SUMMARIES = {
    "ex1": "uniform 0 bulk with a +1 boundary trace; coarsens to a centered circular region",
    "ex2": "square +1 patch on the bottom wall inside a -1 background",
    "ex3": "near-uniform 0.3 state with a small 6-period cosine modulation",
    "ex4_30": "semicircular droplet on the bottom wall, static contact angle 30 deg",
    "ex4_150": "semicircular droplet on the bottom wall, static contact angle 150 deg",
}

# Droplet geometry for the contact-line examples (the reference experiments
# show it only pictorially): a half-disk centered on the bottom wall.  The
# radius is calibrated so that at N = 64 both static angles reach attached
# steady caps: smaller droplets end up hovering above their own trace
# cushion in the 150-degree case (the conserved trace mass leaves a surplus
# under the droplet), larger ones spread into a wall film in the 30-degree
# case.
DROPLET_RADIUS = 0.30
DROPLET_CENTER = (0.5, 0.0)

# Wall energy scale for the contact-line potential.  The Young balance
# requires the wall energy contrast gamma_tilde * cos(theta_s) to be
# comparable to the diffuse-interface tension (2*sqrt(2)/3) * kappa; with a
# scale of 1 the wall term dominates by orders of magnitude and the trace
# escapes to the next well of the periodic potential (|psi| -> 3).  The
# 0.9 factor keeps both builtin droplets attached at the reference
# resolution while staying within a few degrees of the nominal angles.
INTERFACE_TENSION_FACTOR = 2.0 * math.sqrt(2.0) / 3.0
WALL_ENERGY_CALIBRATION = 0.9


def calibrated_wall_energy(kappa: float) -> float:
    """Wall energy scale matched to the diffuse-interface tension."""
    return WALL_ENERGY_CALIBRATION * INTERFACE_TENSION_FACTOR * kappa


@dataclass(frozen=True)
class KappaSpec:
    """Interface width given either as a multiple of h or absolutely."""

    mode: str = "factor_of_h"  # or "absolute"
    value: float = 2.0

    def resolve(self, h: float) -> float:
        return self.value * h if self.mode == "factor_of_h" else self.value


@dataclass(frozen=True)
class RunConfig:
    example: str = "ex1"
    N: int = 200
    dt: float = 1e-3
    kappa_mode: KappaSpec = field(default_factory=KappaSpec)
    gamma1: float = 100.0
    gamma2: float = 100.0
    S1: float = 100.0
    S2: float = 100.0
    surface: SurfacePotentialSpec | None = None  # None: per-example default
    steady_tol: float = 1e-6
    max_steps: int = 20_000
    snapshot_every: int = 500
    linear_tol: float = 1e-11
    linear_max_iter: int | None = None
    output_dir: str | None = None
    seed: int = 0
    initial_field: str | None = None  # required for example == "custom"


def init_example(name: str, g: GridSpec, kappa: float | None = None) -> np.ndarray:
    """Initial field for a built-in experiment, populated on all nodes.

    ``kappa`` sets the droplet profile width for the contact-line examples
    and defaults to 2h.
    """
    x, y = grid_mod.node_coordinates(g)
    if name == "ex1":
        u = np.zeros((g.n + 1, g.n + 1))
        u[g.chain_rows, g.chain_cols] = 1.0
        return u
    if name == "ex2":
        inside = (x >= 0.25) & (x <= 0.75) & (y <= 0.5)
        return np.where(inside, 1.0, -1.0)
    if name == "ex3":
        return 0.3 + 0.01 * np.cos(6.0 * np.pi * x) * np.cos(6.0 * np.pi * y)
    if name in ("ex4_30", "ex4_150"):
        if kappa is None:
            kappa = 2.0 * g.h
        r = np.hypot(x - DROPLET_CENTER[0], y - DROPLET_CENTER[1])
        return np.tanh((DROPLET_RADIUS - r) / (math.sqrt(2.0) * kappa))
    raise ConfigError("example", f"unknown example {name!r}")


def default_surface(example: str, kappa: float) -> SurfacePotentialSpec:
    """Per-example surface potential used when the config gives none."""
    if example == "ex4_30":
        return SurfacePotentialSpec.moving_contact_line(30.0, calibrated_wall_energy(kappa))
    if example == "ex4_150":
        return SurfacePotentialSpec.moving_contact_line(150.0, calibrated_wall_energy(kappa))
    return SurfacePotentialSpec.double_well()


# --- JSON config parsing ----------------------------------------------------

_TOP_KEYS = {
    "example", "N", "dt", "kappa_mode", "gamma1", "gamma2", "S1", "S2",
    "surface", "steady_tol", "max_steps", "snapshot_every", "linear_tol",
    "linear_max_iter", "output_dir", "seed", "initial_field",
}


def _want_number(doc, key, *, positive=True, default=None):
    if key not in doc:
        return default
    val = doc[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(key, f"expected a number, got {val!r}")
    if positive and val <= 0:
        raise ConfigError(key, f"must be positive, got {val}")
    return float(val)


def _want_int(doc, key, *, minimum, default):
    if key not in doc:
        return default
    val = doc[key]
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(key, f"expected an integer, got {val!r}")
    if val < minimum:
        raise ConfigError(key, f"must be >= {minimum}, got {val}")
    return val


def _parse_kappa(doc) -> KappaSpec:
    if "kappa_mode" not in doc:
        return KappaSpec()
    node = doc["kappa_mode"]
    if not isinstance(node, dict):
        raise ConfigError("kappa_mode", "expected an object with one of "
                          "'factor_of_h' or 'absolute'")
    unknown = set(node) - {"factor_of_h", "absolute"}
    if unknown:
        raise ConfigError(f"kappa_mode.{sorted(unknown)[0]}", "unknown key")
    if len(node) != 1:
        raise ConfigError("kappa_mode", "exactly one of 'factor_of_h' or "
                          "'absolute' must be given")
    mode, value = next(iter(node.items()))
    if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
        raise ConfigError(f"kappa_mode.{mode}", f"must be a positive number, got {value!r}")
    return KappaSpec(mode=mode, value=float(value))


def _parse_surface(doc) -> SurfacePotentialSpec | None:
    if "surface" not in doc:
        return None
    node = doc["surface"]
    if not isinstance(node, dict) or "variant" not in node:
        raise ConfigError("surface", "expected an object with a 'variant' key")
    unknown = set(node) - {"variant", "theta_s", "gamma_tilde"}
    if unknown:
        raise ConfigError(f"surface.{sorted(unknown)[0]}", "unknown key")
    variant = node["variant"]
    if variant == model.SURFACE_DOUBLE_WELL:
        if set(node) - {"variant"}:
            raise ConfigError("surface", "double_well takes no extra keys")
        return SurfacePotentialSpec.double_well()
    if variant == model.SURFACE_MOVING_CONTACT_LINE:
        theta = node.get("theta_s")
        if not isinstance(theta, (int, float)) or isinstance(theta, bool):
            raise ConfigError("surface.theta_s", f"expected a number, got {theta!r}")
        if not 0.0 < theta < 180.0:
            raise ConfigError("surface.theta_s", f"must lie in (0, 180), got {theta}")
        gt = node.get("gamma_tilde", 1.0)
        if isinstance(gt, bool) or not isinstance(gt, (int, float)) or gt <= 0:
            raise ConfigError("surface.gamma_tilde", f"must be a positive number, got {gt!r}")
        return SurfacePotentialSpec.moving_contact_line(float(theta), float(gt))
    raise ConfigError("surface.variant", f"unknown variant {variant!r}")


def parse_config(text: str) -> RunConfig:
    """Parse and validate a UTF-8 JSON configuration document.

    Unknown keys are rejected; every diagnostic names the offending key
    path.  Defaults follow the reference experiment protocol.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("", "top-level JSON value must be an object")

    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown key")

    example = doc.get("example", "ex1")
    if example not in EXAMPLE_NAMES + ("custom",):
        raise ConfigError("example", f"unknown example {example!r}; choose one of "
                          f"{', '.join(EXAMPLE_NAMES + ('custom',))}")

    n = _want_int(doc, "N", minimum=4, default=200)
    try:
        grid_mod.build_grid(n)
    except InvalidGridError as exc:
        raise ConfigError("N", str(exc)) from exc

    linear_tol = _want_number(doc, "linear_tol", default=1e-11)
    if linear_tol >= 1.0:
        raise ConfigError("linear_tol", f"must lie in (0, 1), got {linear_tol}")

    output_dir = doc.get("output_dir")
    if output_dir is not None and not isinstance(output_dir, str):
        raise ConfigError("output_dir", f"expected a string, got {output_dir!r}")
    initial_field = doc.get("initial_field")
    if initial_field is not None and not isinstance(initial_field, str):
        raise ConfigError("initial_field", f"expected a string, got {initial_field!r}")
    if example == "custom" and initial_field is None:
        raise ConfigError("initial_field", "required when example is 'custom'")

    cfg = RunConfig(
        example=example,
        N=n,
        dt=_want_number(doc, "dt", default=1e-3),
        kappa_mode=_parse_kappa(doc),
        gamma1=_want_number(doc, "gamma1", default=100.0),
        gamma2=_want_number(doc, "gamma2", default=100.0),
        S1=_want_number(doc, "S1", default=100.0),
        S2=_want_number(doc, "S2", default=100.0),
        surface=_parse_surface(doc),
        steady_tol=_want_number(doc, "steady_tol", default=1e-6),
        max_steps=_want_int(doc, "max_steps", minimum=0, default=20_000),
        snapshot_every=_want_int(doc, "snapshot_every", minimum=1, default=500),
        linear_tol=linear_tol,
        linear_max_iter=_want_int(doc, "linear_max_iter", minimum=1, default=None),
        output_dir=output_dir,
        seed=_want_int(doc, "seed", minimum=-(2**62), default=0),
        initial_field=initial_field,
    )
    return cfg


def config_to_dict(cfg: RunConfig, surface: SurfacePotentialSpec) -> dict:
    """JSON-serializable echo of a configuration (for the run manifest).

    ``surface`` is the materialized surface potential, so manifests always
    record the resolved per-example defaults.
    """
    out = {
        "example": cfg.example,
        "N": cfg.N,
        "dt": cfg.dt,
        "kappa_mode": {cfg.kappa_mode.mode: cfg.kappa_mode.value},
        "gamma1": cfg.gamma1,
        "gamma2": cfg.gamma2,
        "S1": cfg.S1,
        "S2": cfg.S2,
        "surface": {
            "variant": surface.variant,
            **(
                {"theta_s": surface.theta_s_deg, "gamma_tilde": surface.gamma_tilde}
                if surface.variant == model.SURFACE_MOVING_CONTACT_LINE
                else {}
            ),
        },
        "steady_tol": cfg.steady_tol,
        "max_steps": cfg.max_steps,
        "snapshot_every": cfg.snapshot_every,
        "linear_tol": cfg.linear_tol,
        "linear_max_iter": cfg.linear_max_iter,
        "output_dir": cfg.output_dir,
        "seed": cfg.seed,
        "initial_field": cfg.initial_field,
    }
    return out


def build_setup(
    cfg: RunConfig,
) -> tuple[GridSpec, ModelParams, SurfacePotentialSpec, StepperConfig, np.ndarray]:
    """Materialize a configuration into grid, parameters, and initial field."""
    g = grid_mod.build_grid(cfg.N)
    kappa = cfg.kappa_mode.resolve(g.h)
    p = ModelParams(kappa=kappa, gamma1=cfg.gamma1, gamma2=cfg.gamma2, S1=cfg.S1, S2=cfg.S2)
    s = cfg.surface or default_surface(cfg.example, kappa)

    # Monitor bound: never claim more than the stabilization constants cover.
    bound = min(8.0, model.stability_field_bound(p))
    scfg = StepperConfig(
        dt=cfg.dt,
        linear_tol=cfg.linear_tol,
        linear_max_iter=cfg.linear_max_iter,
        steady_tol=cfg.steady_tol,
        max_steps=cfg.max_steps,
        field_bound=bound,
    )

    if cfg.example == "custom":
        u0, meta = runio.read_snapshot(cfg.initial_field)
        if u0.shape != (g.n + 1, g.n + 1):
            raise ConfigError(
                "initial_field",
                f"field has shape {u0.shape}, expected {(g.n + 1, g.n + 1)} for N={g.n}",
            )
    else:
        u0 = init_example(cfg.example, g, kappa=kappa)
    if not np.all(np.isfinite(u0)):
        raise ConfigError("initial_field", "initial field contains non-finite values")
    return g, p, s, scfg, u0
