"""Print mean MAE/MSE per method and sweep value from a results CSV.

    python3 scripts/summarize.py results/grow_n.csv --by n
"""

import argparse

import numpy as np

from graphon_sba.harness import read_results_csv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv")
    ap.add_argument("--by", default="n", choices=["n", "T", "K_true", "xi"])
    args = ap.parse_args()

    with open(args.csv) as f:
        rows = read_results_csv(f.read())
    groups = {}
    for r in rows:
        groups.setdefault((r["method"], float(r[args.by])), []).append(r)
    print(f"{'method':6s} {args.by:>7s} {'trials':>6s} {'MAE':>8s} {'MSE':>8s} {'K_hat':>6s}")
    for (method, x), rs in sorted(groups.items()):
        k = [int(r["K_estimated"]) for r in rs if r["K_estimated"]]
        kmed = f"{np.median(k):g}" if k else "-"
        print(f"{method:6s} {x:>7g} {len(rs):>6d} {np.mean([float(r['mae']) for r in rs]):8.4f} "
              f"{np.mean([float(r['mse']) for r in rs]):8.4f} {kmed:>6s}")


if __name__ == "__main__":
    main()
