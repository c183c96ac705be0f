"""Optimal n-copy success for pairs of given overlap, closed form vs explicit."""
import argparse
import math

from infotherm.discrimination import power_distinguishability
from infotherm.qstate import KET0, make_pure


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--overlaps", type=float, nargs="+", default=[0.1, 0.5, 1 / math.sqrt(2), 0.9])
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--explicit-max", type=int, default=6)
    args = ap.parse_args()

    print("overlap,n,closed_form,explicit,abs_diff")
    for c in args.overlaps:
        a, b = KET0, make_pure([c, math.sqrt(1 - c * c)])
        for n in range(1, args.n_max + 1):
            cf = power_distinguishability(a, b, n)
            if n <= args.explicit_max:
                ex = power_distinguishability(a, b, n, explicit=True)
                print(f"{c!r},{n},{cf!r},{ex!r},{abs(cf - ex)!r}")
            else:
                print(f"{c!r},{n},{cf!r},,")


if __name__ == "__main__":
    main()
