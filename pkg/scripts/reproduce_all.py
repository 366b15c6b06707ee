"""Run every figure configuration through the CLI entry point.

    python scripts/reproduce_all.py [--out out] [--format csv,svg,raw]
"""

import argparse
import os
import sys

from dressedlat.cli.main import main

RUNS = [
    ("potentials", "fig1"),
    ("potentials", "fig2"),
    ("map2d", "fig3ab"),
    ("map2d", "fig3c"),
    ("comb", "fig3d"),
    ("regime", "fig4"),
    ("evolve", "fig5"),
    ("spectra", "fig5"),
    ("shaping", "fig6"),
    ("lattice-params", "lattice"),
]

HERE = os.path.dirname(os.path.abspath(__file__))


def cli():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out")
    ap.add_argument("--format", help="override the formats listed in each config")
    args = ap.parse_args()
    failed = []
    for sub, name in RUNS:
        cfg = os.path.join(HERE, "..", "configs", f"{name}.toml")
        argv = [sub, "--config", cfg, "--out", os.path.join(args.out, f"{name}-{sub}")]
        if args.format:
            argv += ["--format", args.format]
        code = main(argv)
        if code:
            failed.append((sub, name, code))
    for sub, name, code in failed:
        print(f"{sub} {name}: exit {code}", file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(cli())
