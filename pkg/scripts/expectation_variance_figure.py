#!/usr/bin/env python3
"""Reproduce the expectation/variance figure for b1 on the circle.

Writes a Monte Carlo curve CSV (with the exact oracle column filled in on
0 < t < 1/3), an exact oracle CSV on a finer grid, and a gnuplot script for
the Monte Carlo file. Render with: gnuplot -p <name>.gp
"""

import argparse
import sys

from betticurve import cli


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=20)
    parser.add_argument("--trials", type=int, default=5000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--steps", type=int, default=24)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--prefix", type=str, default="b1_circle")
    args = parser.parse_args(argv)

    t_lo, t_hi = 0.02, 0.32
    rc = cli.main([
        "curve", "--manifold", "circle", "--complex", "vr",
        "--invariant", "betti1", "--n", str(args.n),
        "--trials", str(args.trials), "--seed", str(args.seed),
        "--t-min", str(t_lo), "--t-max", str(t_hi), "--steps", str(args.steps),
        "--workers", str(args.workers),
        "--output", f"{args.prefix}_mc.csv"])
    if rc:
        return rc
    return cli.main([
        "oracle", "--n", str(args.n), "--seed", str(args.seed),
        "--t-min", str(t_lo), "--t-max", str(t_hi),
        "--steps", str(4 * args.steps),
        "--output", f"{args.prefix}_exact.csv"])


if __name__ == "__main__":
    sys.exit(main())
