"""Run every registered campaign with its defaults and write one JSON report each.

    python3 scripts/run_all_campaigns.py --out-dir reports --seed 0
"""

import argparse
import json
import os
import time

from snideal.verify import CAMPAIGNS, CampaignSpec, run_campaign


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default="reports")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--only", nargs="*", default=None)
    args = ap.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)
    for name in sorted(args.only or CAMPAIGNS):
        t0 = time.monotonic()
        rep = run_campaign(CampaignSpec(name, seed=args.seed))
        with open(os.path.join(args.out_dir, f"{name}.json"), "w") as fh:
            json.dump(rep.to_dict(with_timing=True), fh, indent=2)
        print(f"{name:28s} {rep.verdict:12s} {rep.cases_passed}/{rep.cases_run}  {time.monotonic() - t0:6.1f}s")


if __name__ == "__main__":
    main()
