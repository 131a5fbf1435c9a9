"""Gap certificate for the theta0 = pi/4 family and where log u1 fails to be concave.

Writes the Hessian probe grid as CSV for plotting.
"""

import argparse
import csv
import math
import os

from hypergap.spectrum import log_concavity_probe, positive_points, shih_c2_bound, shih_report


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--c", type=float, default=0.2)
    ap.add_argument("--theta1", type=float, default=5 * math.pi / 8)
    ap.add_argument("--out", default="results/shih_hessian.csv")
    args = ap.parse_args()

    cert = shih_report(args.theta1, args.c)
    rep = cert.report
    print(f"c^2 bound {shih_c2_bound():.6f}, c^2 = {args.c ** 2:.6f}")
    print(f"gap {rep.gap:.8f}  D {rep.diameter:.6f}  3pi^2/(2D^2) {cert.half_bound:.8f}  margin {cert.margin:.4f}")
    print(f"normalized gap {rep.normalized_gap:.6f}  certificate {'PASS' if cert.passed else 'FAIL'}")

    lam, probes = log_concavity_probe(rep.domain, 60, 60)
    pos = positive_points(probes)
    print(f"lambda1 {lam:.8f}; Hessian of log u1 has a positive eigenvalue at {len(pos)} of {len(probes)} points")
    if pos:
        top = max(pos, key=lambda p: p.max_eigenvalue)
        print(f"  largest {top.max_eigenvalue:.4e} at log r = {top.r_log:.4f}, theta = {top.theta:.4f}")

    os.makedirs(os.path.dirname(args.out) or ".", exist_ok=True)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["log_r", "theta", "max_eigenvalue"])
        for p in probes:
            if not p.skipped:
                w.writerow([format(p.r_log, ".17g"), format(p.theta, ".17g"), format(p.max_eigenvalue, ".17g")])


if __name__ == "__main__":
    main()
