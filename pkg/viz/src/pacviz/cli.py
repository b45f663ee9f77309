"""Command line: render a run directory into figures.

    pacviz render --run RUNDIR --out OUTDIR [--steps 0,500,1000]
                  [--size 640] [--cmap RdBu_r] [--gif]

Exit codes: 0 ok, 2 bad arguments, 4 unreadable run directory.
"""

from __future__ import annotations

import argparse
import sys

from .render import RenderJob, render_animation, render_series, render_snapshots


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pacviz", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    r = sub.add_parser("render", help="render snapshots and series plots")
    r.add_argument("--run", required=True, help="run directory to read")
    r.add_argument("--out", required=True, help="output directory for images")
    r.add_argument("--steps", default="all",
                   help="comma-separated snapshot steps (default: all)")
    r.add_argument("--size", type=int, default=640, help="snapshot image size in px")
    r.add_argument("--cmap", default="RdBu_r", help="matplotlib colormap name")
    r.add_argument("--gif", action="store_true", help="also assemble a GIF")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.steps != "all":
        try:
            steps = [int(tok) for tok in args.steps.split(",") if tok.strip()]
        except ValueError:
            print(f"error: bad --steps list: {args.steps!r}", file=sys.stderr)
            return 2
    else:
        steps = "all"

    job = RenderJob(
        run_dir=args.run,
        out_dir=args.out,
        steps=steps,
        image_size=args.size,
        colormap=args.cmap,
        animate=args.gif,
    )
    try:
        frames = render_snapshots(job)
        mass_path, energy_path = render_series(job)
        if args.gif:
            gif = render_animation(job, frames)
            print(gif)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    for p in frames + [mass_path, energy_path]:
        print(p)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
