"""Boyd index series log n / log Phi(1_n) for a few norms, raw ratio next to the slope estimate."""

import argparse

from snideal.seqnorm import boyd_estimate, parse_spec


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("specs", nargs="*", default=["binorm:pow:1/2", "binorm:pow:1/3", "binorm:harmonic", "lorentz:3,2", "schatten:3"])
    ap.add_argument("--n-max", type=int, default=10**6)
    args = ap.parse_args()
    for text in args.specs:
        est = boyd_estimate(parse_spec(text), args.n_max)
        print(f"{text:18s} slope {est.p_estimate:.5f}  raw {est.raw_estimate:.5f}  ({est.trend})")
        for n, r in est.series[-4:]:
            print(f"    n={n:<9d} log n / log Phi(1_n) = {r:.5f}")


if __name__ == "__main__":
    main()
