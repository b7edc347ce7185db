"""Markov arcs K_{m,n} and certified rotation vectors for small (m, n)."""

import argparse
import time

from torusrot import skeleton as sk
from torusrot.circlemap import build_denjoy
from torusrot.numeric import golden, is_admissible


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--depth", type=int, default=20)
    ap.add_argument("--upto", type=int, default=8)
    args = ap.parse_args()
    model = build_denjoy(golden(args.depth))
    print("m,n,admissible,arcs,shortest_arc,rho_x,rho_y,seconds")
    for m in range(1, args.upto + 1):
        for n in range(1, args.upto + 1):
            t = time.time()
            arcs = sk.markov_arcs(model, m, n)
            adm = is_admissible(model.param, m, n)
            if arcs:
                v = sk.rotation_vector_exact(model, m, n)
                short = min(b - a for a, b in (x.float_arc() for x in arcs))
                print(f"{m},{n},{adm},{len(arcs)},{short:.3e},{v.x},{v.y},{time.time() - t:.2f}")
            else:
                print(f"{m},{n},{adm},0,,,,{time.time() - t:.2f}")


if __name__ == "__main__":
    main()
