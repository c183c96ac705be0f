"""Ledger of the membrane engine over a grid of (n, T), as CSV on stdout."""
import argparse
import csv
import sys

from infotherm.engine import clausius_audit, run_cycle


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=float, nargs="+", default=[1, 2, 5])
    ap.add_argument("--T", type=float, nargs="+", default=[0.5, 1, 2])
    ap.add_argument("--booking", choices=("merge", "erase"), default="merge")
    args = ap.parse_args()

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "T", "net_work", "uncorrected_dS", "corrected_dS",
                "clausius_without_memory", "clausius_with_memory"])
    for n in args.n:
        for T in args.T:
            r = run_cycle(n, T, args.booking)
            w.writerow([n, T, repr(r.net_work), repr(r.uncorrected_dS_universe),
                        repr(r.corrected_dS_universe), repr(clausius_audit(r, False)[0]),
                        repr(clausius_audit(r, True)[0])])


if __name__ == "__main__":
    main()
