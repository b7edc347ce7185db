"""Vertex counts of the truncated Lambda hull and where its vertices sit."""

import argparse
import time
from fractions import Fraction

from torusrot.geometry import accumulation_report, lambda_set
from torusrot.numeric import build_param, golden, silver


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cf", default="golden")
    ap.add_argument("--trunc", type=int, nargs="+", default=[10, 25, 50, 100, 200, 400])
    ap.add_argument("--radius", default="1/20")
    args = ap.parse_args()
    if args.cf == "golden":
        param = golden()
    elif args.cf == "silver":
        param = silver()
    else:
        coeffs = [int(c) for c in args.cf.split(",")]
        param = build_param(coeffs, len(coeffs) - 1)
    print("N,vertices,near_0rho,near_rho0,elsewhere,seconds")
    for N in args.trunc:
        t = time.time()
        hull = lambda_set(param, N)
        rep = accumulation_report(param, N, Fraction(args.radius))
        print(f"{N},{len(hull)},{rep.near_0rho},{rep.near_rho0},{len(rep.elsewhere)},{time.time() - t:.2f}")


if __name__ == "__main__":
    main()
