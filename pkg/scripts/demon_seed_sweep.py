"""Sorting time, plateau step and post-sorting increments across seeds.

Checks how well the tape-plateau detector tracks the recorded sorting step
for the default 1000-molecule gas.
"""
import argparse

import numpy as np

from infotherm.algoinfo import plateau_detect, prefix_estimates
from infotherm.demon import DemonConfig, run


def summarize(cfg):
    res = run(cfg)
    bits = res.tape.as_array()
    cps = list(range(256, bits.size + 1, 256))
    est = prefix_estimates(bits, cps)
    plateau = plateau_detect(list(zip(cps, est)))
    incr = [e2 - e1 for s1, e1, e2 in zip(cps, est, est[1:]) if s1 >= (res.n_ord or bits.size)]
    return res, plateau, (max(incr) if incr else float("nan")), est[-1]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, nargs="+", default=list(range(1, 21)))
    ap.add_argument("--molecules", type=int, default=1000)
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--tail-steps", type=int, default=2048)
    args = ap.parse_args()

    print("seed,n_ord,plateau,rel_error,max_window_increment,I_final")
    for seed in args.seeds:
        cfg = DemonConfig(molecules=args.molecules, alpha=args.alpha, seed=seed,
                          tail_steps=args.tail_steps)
        res, plateau, inc, last = summarize(cfg)
        rel = (plateau - res.n_ord) / res.n_ord if plateau and res.n_ord else np.nan
        print(f"{seed},{res.n_ord},{plateau},{rel:.4f},{inc:.3f},{last:.1f}")


if __name__ == "__main__":
    main()
