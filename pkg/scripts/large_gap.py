"""Normalized gap above 1 for c > pi with theta* close to pi/2."""

import argparse

import numpy as np

from hypergap.spectrum import large_gap_regime, large_gap_threshold


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--c", type=float, nargs="+", default=[4.0, 6.0, 10.0])
    ap.add_argument("--n", type=int, default=6)
    args = ap.parse_args()

    for c in args.c:
        start = large_gap_threshold(c)
        print(f"c = {c}: both conditions hold for theta* >= {start:.6f}")
        for ts in np.linspace(start + 1e-6, np.pi / 2 - 1e-3, args.n):
            v = large_gap_regime(c, ts)
            print(f"  theta*={ts:.5f}  normalized gap={v.report.normalized_gap:.6f}  "
                  f"lower bound={v.sandwich_lower:.6f}  {'>' if v.holds else '<='} 1")


if __name__ == "__main__":
    main()
