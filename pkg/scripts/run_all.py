"""Run every experiment config in configs/ and write one CSV per config.

    python3 scripts/run_all.py --out results/ [--paper-scale] [--threads 4]
"""

import argparse
import time
from pathlib import Path

from graphon_sba import run_experiment
from graphon_sba.harness import load_config, mean_by, results_csv

ROOT = Path(__file__).resolve().parent.parent


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--configs", default=str(ROOT / "configs"))
    ap.add_argument("--out", default="results")
    ap.add_argument("--paper-scale", action="store_true")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--trials", type=int, default=None)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    overrides = {} if args.trials is None else {"trials": args.trials}
    for path in sorted(Path(args.configs).glob("*.json")):
        if path.name == "blockmodel_4x4.json":  # a graphon, not an experiment
            continue
        cfg = load_config(path, paper_scale=args.paper_scale, **overrides)
        t0 = time.perf_counter()
        rows = run_experiment(cfg, threads=args.threads)
        (out / f"{path.stem}.csv").write_text(results_csv(rows))
        print(f"{path.stem}: {len(rows)} rows in {time.perf_counter() - t0:.1f}s")
        key = {"GrowN": "n", "GrowT": "T", "GrowK": "K_true", "MissingLinks": "xi"}.get(cfg.experiment, "n")
        for (method, x), v in sorted(mean_by(rows, key).items()):
            print(f"  {method:5s} {key}={x:<6g} mean MAE {v:.4f}")


if __name__ == "__main__":
    main()
