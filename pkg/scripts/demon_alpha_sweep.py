"""Tape information and gas entropy drop as the fast fraction alpha varies.

The demon's tape should store roughly what the gas loses: compare the final
tape estimate against the drop in n * H(chamber, speed).
"""
import argparse

from infotherm.algoinfo import estimate_I
from infotherm.demon import DemonConfig, init_gas, joint_entropy_bits, run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alphas", type=float, nargs="+", default=[0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0])
    ap.add_argument("--molecules", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    print("alpha,n_ord,ones,I_tape_bits,gas_entropy_drop_bits")
    for a in args.alphas:
        cfg = DemonConfig(molecules=args.molecules, alpha=a, seed=args.seed)
        gas0 = init_gas(cfg.molecules, a, cfg.v_L, cfg.v_H, cfg.v_T, cfg.seed)
        h0 = joint_entropy_bits(gas0)
        res = run(cfg)
        drop = cfg.molecules * (h0 - joint_entropy_bits(res.gas))
        bits = res.tape.as_array()
        print(f"{a},{res.n_ord},{int(bits.sum())},{estimate_I(bits):.1f},{drop:.1f}")


if __name__ == "__main__":
    main()
