#!/usr/bin/env python3
"""Quick driver for a single built-in experiment.

Runs in memory (no files unless --out is given) and prints a diagnostic
summary every so often; handy for interactive exploration at small N.

    python3 scripts/run_example.py ex1 --n 32 --dt 1e-2 --max-steps 5000
"""

import argparse
import json
import sys
import tempfile

from pacdyn import cli, driver, experiments


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("example", choices=experiments.EXAMPLE_NAMES)
    ap.add_argument("--n", type=int, default=64)
    ap.add_argument("--dt", type=float, default=1e-2)
    ap.add_argument("--max-steps", type=int, default=50_000)
    ap.add_argument("--steady-tol", type=float, default=1e-6)
    ap.add_argument("--print-every", type=int, default=500)
    ap.add_argument("--out", help="also write a full run directory here")
    args = ap.parse_args()

    doc = {
        "example": args.example,
        "N": args.n,
        "dt": args.dt,
        "max_steps": args.max_steps,
        "steady_tol": args.steady_tol,
    }
    if args.out:
        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
            json.dump(doc, fh)
            cfg_path = fh.name
        return cli.main(["run", "--config", cfg_path, "--out", args.out])

    cfg = experiments.parse_config(json.dumps(doc))

    def on_record(rec):
        if rec.step % args.print_every == 0:
            print(
                f"step {rec.step:7d} t={rec.time:9.3f} E={rec.energy_total:.8f} "
                f"mass=({rec.mass_bulk:+.6f}, {rec.mass_surf:+.6f}) "
                f"residual={rec.steady_residual:.3e}"
            )

    result = driver.run(cfg, on_record=on_record)
    last = result.records[-1]
    print(
        f"done: {result.exit_reason} after {result.state.n} steps, "
        f"residual {last.steady_residual:.3e}, energy {last.energy_total:.8f}"
    )
    return 0 if result.exit_reason != driver.EXIT_ERROR else 3


if __name__ == "__main__":
    sys.exit(main())
