#!/usr/bin/env python3
"""Desk-scale benchmark: seeded synthetic months through the full pipeline.

For every preset this runs a number of 30-day months, disaggregates them
day by day, and reports per-month Err1/Err2/MSE plus the aggregated
mean +/- std row.  Runs in seconds; useful for eyeballing regressions
after parameter changes.
"""

import argparse
import time

import numpy as np

from evdisagg import WindowSpec, disaggregate_windows, generate_month, preset
from evdisagg.metrics import evaluate_month, summarize
from evdisagg.synth import MIXED_PRESETS


def run_months(name: str, seeds: range, days: int):
    months = []
    t_start = time.perf_counter()
    for seed in seeds:
        aggregate, truth = generate_month(preset(name, seed), days)
        results = disaggregate_windows(aggregate, WindowSpec(kind="day"))
        estimate = np.concatenate([r.estimated.values for r in results])
        months.append(evaluate_month(f"{name}/seed{seed}", truth["ev"].values, estimate))
    elapsed = time.perf_counter() - t_start
    return months, elapsed


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=10, help="months per preset")
    parser.add_argument("--days", type=int, default=30, help="days per month")
    parser.add_argument("--presets", nargs="*",
                        default=list(MIXED_PRESETS) + ["mixed"])
    args = parser.parse_args()

    print(f"{'preset':14s} {'months':>6s} {'Err1':>16s} {'Err2 (kWh)':>16s} "
          f"{'MSE':>14s} {'time':>8s}")
    for name in args.presets:
        months, elapsed = run_months(name, range(args.seeds), args.days)
        summary = summarize(months)
        print(f"{name:14s} {len(months):6d} "
              f"{summary.err1_mean:7.2f}% ± {summary.err1_std:5.2f}% "
              f"{summary.err2_mean:8.2f} ± {summary.err2_std:5.2f} "
              f"{summary.mse_mean:7.4f} ± {summary.mse_std:6.4f} "
              f"{elapsed:6.2f} s")


if __name__ == "__main__":
    main()
