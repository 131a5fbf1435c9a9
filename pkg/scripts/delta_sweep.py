"""How far max_t R(t) stays below 1 as c shrinks, for several angular intervals."""

import argparse
import math

from hypergap.spectrum import delta_sweep


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--c", type=float, nargs="+", default=[0.4, 0.2, 0.1, 0.05, 0.02, 0.01])
    ap.add_argument("--nt", type=int, default=33)
    args = ap.parse_args()

    intervals = [(math.pi / 4, 3 * math.pi / 4), (math.pi / 4, 5 * math.pi / 8), (1.0, math.pi - 1.0), (1.3, math.pi - 1.3)]
    for t0, t1 in intervals:
        deltas = delta_sweep(t0, t1, cs=args.c, n_t=args.nt)
        vals = list(deltas.values())
        spread = (max(vals) - min(vals)) / min(vals)
        row = "  ".join(f"{c:g}:{d:.5f}" for c, d in deltas.items())
        print(f"({t0:.4f}, {t1:.4f})  {row}  spread {spread:.2%}")


if __name__ == "__main__":
    main()
