"""Moduli ledger of the collapse family: thinning and how much of eps the Cauchy steps use."""

import argparse
from fractions import Fraction

from torusrot import brown as br
from torusrot.circlemap import build_denjoy
from torusrot.errors import ThinningError
from torusrot.numeric import golden


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--members", type=int, default=200)
    ap.add_argument("--stages", type=int, nargs="+", default=[4, 8, 10, 12])
    ap.add_argument("--grid-bits", type=int, default=10)
    args = ap.parse_args()
    model = build_denjoy(golden(12))
    seq = br.build_collapse_family(model, args.members)
    grid = br.CompactModel(args.grid_bits)
    for k in args.stages:
        try:
            idx = br.thin_subsequence(seq, stages=k)
        except ThinningError as e:
            print(f"stages={k}: thinning failed at stage {e.stage}")
            continue
        led = br.build_ledger(seq.subsequence(idx), k)
        rep = br.cauchy_verify(seq, idx, grid, led)
        use = max(rep.max_usage.values())
        print(f"stages={k}: indices={idx} sum_eps={float(led.prefix_sums[-1]):.4f} max_usage={float(use):.3f}")
    # eps scaling at which the unthinned chain first fails
    sub = seq.subsequence(list(range(1, 11)))
    led = br.build_ledger(sub, 9)
    for f in (1, 2, 4, 8, 16, 64):
        rep = br.cauchy_verify(sub, grid=grid, ledger=led.scaled(Fraction(1, f)), strict=False)
        print(f"eps/{f}: {len(rep.violations)} violations")


if __name__ == "__main__":
    main()
