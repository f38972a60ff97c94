"""Truncations ||T (x) I_N|| for the a1 + theta a2 norm against the closed form, on random tuples."""

import argparse

import numpy as np

from snideal.mcn import MCNConfig, hsharp_kyfan_theta, random_tuple


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--tuples", type=int, default=5)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--theta", type=float, nargs="+", default=[0.25, 0.5, 1.0])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for k in range(args.tuples):
        T = random_tuple(args.m, args.n, np.random.default_rng([args.seed, k]))
        for th in args.theta:
            h = hsharp_kyfan_theta(T, th, (1, 2, 3, 4), MCNConfig(restarts=8, seed=k))
            trunc = "  ".join(f"{v:.6f}" for v in h.values())
            print(f"tuple {k} theta {th:<5} closed {h.closed_form:.6f} | N=1..4: {trunc}")


if __name__ == "__main__":
    main()
