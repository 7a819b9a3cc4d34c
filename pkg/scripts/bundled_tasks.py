"""Run all three arms on both bundled tasks and write reports with plots.

    python scripts/bundled_tasks.py --out results --seed 0
"""

import argparse
from pathlib import Path

from gpstrack.cli import _print_summary
from gpstrack.pipeline import run_arms
from gpstrack.report import emit_report
from gpstrack.scenario import BUNDLED, bundled_scenario


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="results")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    for name in BUNDLED:
        cfg = bundled_scenario(name)
        results = run_arms(cfg, seed=args.seed)
        emit_report(results, Path(args.out) / name, scenario=cfg, plots=True)
        print(f"== {name}")
        _print_summary(results, None)


if __name__ == "__main__":
    main()
