"""Command-line entry point: run experiments, verify runs, list built-ins.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 solver failure, 4 I/O error.
"""

from __future__ import annotations

import os

# Cap internal parallelism before numpy is first imported.  All math in
# this package is elementwise, so thread count never changes results.
_threads = os.environ.get("PACDYN_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ.setdefault(_var, _threads)

import argparse
import dataclasses
import datetime
import json
import sys

from . import driver, experiments, runio
from .errors import ConfigError, PacdynError

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4

# Post-hoc audit tolerances used by `verify` (documented in --help): the
# absolute mass drift allowed over a whole run, and the per-step energy
# slack from the decay audit.
VERIFY_MASS_TOL = 1e-8


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def cmd_run(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        cfg = experiments.parse_config(text)
        if args.max_steps is not None:
            if args.max_steps < 0:
                raise ConfigError("max_steps", f"must be >= 0, got {args.max_steps}")
            cfg = dataclasses.replace(cfg, max_steps=args.max_steps)
        if args.snapshot_every is not None:
            if args.snapshot_every < 1:
                raise ConfigError("snapshot_every", f"must be >= 1, got {args.snapshot_every}")
            cfg = dataclasses.replace(cfg, snapshot_every=args.snapshot_every)
        out_dir = args.out or cfg.output_dir
        if not out_dir:
            raise ConfigError("output_dir", "no output directory given "
                              "(use --out or the output_dir key)")
        # Materialize before touching the filesystem so config problems
        # never leave a half-created run directory behind.
        g, p, s, scfg, _ = experiments.build_setup(cfg)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        os.makedirs(out_dir, exist_ok=True)
        series = runio.SeriesWriter(os.path.join(out_dir, "series.csv"))
    except OSError as exc:
        print(f"error: cannot create run directory: {exc}", file=sys.stderr)
        return EXIT_IO

    started = _now()

    def on_snapshot(state):
        runio.write_snapshot(
            os.path.join(out_dir, runio.snapshot_name(state.n)),
            state.u,
            n=g.n,
            t=state.t,
            step=state.n,
            kappa=p.kappa,
            surface_variant=s.variant,
        )

    try:
        result = driver.run(cfg, on_record=series.append, on_snapshot=on_snapshot)
    except OSError as exc:
        print(f"error: I/O failure during run: {exc}", file=sys.stderr)
        series.close()
        return EXIT_IO
    finally:
        series.close()

    manifest = {
        "config": experiments.config_to_dict(cfg, s),
        "grid": {"N": g.n, "h": g.h},
        "started_at": started,
        "finished_at": _now(),
        "exit_reason": result.exit_reason,
        "steps_completed": result.state.n,
        "final_steady_residual": result.records[-1].steady_residual,
        "snapshots": result.snapshot_steps,
        "field_bound_exceeded": result.bound_exceeded,
    }
    try:
        runio.write_manifest(os.path.join(out_dir, "manifest.json"), manifest)
    except OSError as exc:
        print(f"error: cannot write manifest: {exc}", file=sys.stderr)
        return EXIT_IO

    if result.exit_reason == driver.EXIT_ERROR:
        print(f"error: solver: {result.error}", file=sys.stderr)
        print(f"partial output preserved in {out_dir}", file=sys.stderr)
        return EXIT_SOLVER

    last = result.records[-1]
    print(
        f"{cfg.example}: {result.exit_reason} after {result.state.n} steps "
        f"(t={result.state.t:.6g}, residual={last.steady_residual:.3e}, "
        f"energy={last.energy_total:.12g})"
    )
    if result.bound_exceeded:
        print("warning: field bound exceeded during the run; the energy "
              "stability guarantee does not cover it", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import diagnostics

    series_path = os.path.join(args.run, "series.csv")
    manifest_path = os.path.join(args.run, "manifest.json")
    try:
        manifest = runio.read_manifest(manifest_path)
        records = runio.read_series(series_path)
    except OSError as exc:
        print(f"error: missing run file: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: corrupt run file: {exc}", file=sys.stderr)
        return EXIT_IO
    if not records:
        print("error: series.csv has no rows", file=sys.stderr)
        return EXIT_IO

    failures = []
    for name, getter in (("mass_bulk", lambda r: r.mass_bulk),
                         ("mass_surf", lambda r: r.mass_surf)):
        base = getter(records[0])
        worst = max(abs(getter(r) - base) for r in records)
        if worst > VERIFY_MASS_TOL:
            failures.append(f"{name} drifts by {worst:.3e} (> {VERIFY_MASS_TOL:.1e})")

    bad_steps = diagnostics.audit_energy_decay(records)
    for step in bad_steps:
        failures.append(f"energy increases at step {step}")

    reason = manifest.get("exit_reason")
    if reason == driver.EXIT_STEADY:
        tol = manifest.get("config", {}).get("steady_tol", 1e-6)
        if records[-1].steady_residual > tol:
            failures.append(
                f"exit reason 'steady' but final residual "
                f"{records[-1].steady_residual:.3e} > {tol:.1e}"
            )

    if failures:
        print(f"verify: {len(failures)} violation(s) in {args.run}:")
        for f in failures:
            print(f"  - {f}")
        return EXIT_VERIFY_FAILED
    print(f"verify: ok ({len(records)} records, exit reason {reason!r})")
    return EXIT_OK


def cmd_list_examples(args) -> int:
    defaults = experiments.RunConfig()
    for name in experiments.EXAMPLE_NAMES:
        surface = experiments.default_surface(name, kappa=2.0 / defaults.N)
        entry = {
            "name": name,
            "summary": experiments.EXAMPLE_SUMMARIES[name],
            "defaults": {
                "N": defaults.N,
                "dt": defaults.dt,
                "kappa": "2h",
                "gamma1": defaults.gamma1,
                "gamma2": defaults.gamma2,
                "S1": defaults.S1,
                "S2": defaults.S2,
                "surface": surface.variant,
                **(
                    {
                        "theta_s": surface.theta_s_deg,
                        "gamma_tilde": "0.9 * (2*sqrt(2)/3) * kappa",
                    }
                    if surface.variant == "moving_contact_line"
                    else {}
                ),
            },
        }
        if args.json:
            print(json.dumps(entry, sort_keys=True))
        else:
            d = entry["defaults"]
            extras = (
                f", theta_s={d['theta_s']}, gamma_tilde={d['gamma_tilde']}"
                if "theta_s" in d
                else ""
            )
            print(f"{name}: {entry['summary']}")
            print(
                f"    defaults: N={d['N']}, dt={d['dt']}, kappa={d['kappa']}, "
                f"gamma1={d['gamma1']}, gamma2={d['gamma2']}, "
                f"S1={d['S1']}, S2={d['S2']}, surface={d['surface']}{extras}"
            )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pacdyn",
        description="Locate steady states of the mass-conserving phase-field "
        "dynamics with a dynamic boundary condition.",
        epilog="Exit codes: 0 ok, 1 verification failure, 2 config error, "
        "3 solver failure, 4 I/O error. PACDYN_THREADS caps internal "
        "parallelism.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment and write a run directory")
    run_p.add_argument("--config", required=True, help="path to a JSON config")
    run_p.add_argument("--out", help="output directory (overrides config output_dir)")
    run_p.add_argument("--max-steps", type=int, default=None, dest="max_steps")
    run_p.add_argument("--snapshot-every", type=int, default=None, dest="snapshot_every")
    run_p.set_defaults(func=cmd_run)

    ver_p = sub.add_parser(
        "verify",
        help="re-audit mass conservation and energy decay from a run directory",
        description=f"Checks that both masses stay within {VERIFY_MASS_TOL:.0e} of "
        "their initial values and that the energy series never increases beyond "
        "the per-step slack.",
    )
    ver_p.add_argument("--run", required=True, help="run directory to audit")
    ver_p.set_defaults(func=cmd_verify)

    list_p = sub.add_parser("list-examples", help="describe the built-in experiments")
    list_p.add_argument("--json", action="store_true", help="one JSON object per line")
    list_p.set_defaults(func=cmd_list_examples)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: I/O: {exc}", file=sys.stderr)
        return EXIT_IO
    except PacdynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    raise SystemExit(main())
