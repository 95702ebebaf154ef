#!/usr/bin/env python3
"""Validate the closed-form breakdown against the Monte Carlo deployment oracle.

Runs the all-Poisson degenerate scenario and the full clustered default, and
prints the per-term z-score table for each.
"""

import argparse
import time
from dataclasses import replace

from crancost.config import default_scenario
from crancost.geometry import Window
from crancost.simulate import compare_to_closed_form


def run_case(name, scenario, window, reps, seed):
    t0 = time.time()
    report = compare_to_closed_form(scenario, window, reps, seed)
    print(f"\n== {name} ({reps} replications, {time.time() - t0:.0f}s) ==")
    print(f"{'term':24s} {'closed form':>14s} {'empirical':>14s} {'std err':>10s} {'z':>7s}")
    for row in report.rows():
        print(
            f"{row['term']:24s} {row['closed_form']:14.2f} {row['empirical']:14.2f} "
            f"{row['std_error']:10.2f} {row['z']:+7.2f}"
        )
    print(f"verdict: {'PASS' if report.passed else 'FAIL'} (|z| <= {report.threshold})")
    print(report.window_note)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--window", type=float, default=10.0)
    args = parser.parse_args()

    window = Window(args.window, args.window)
    degenerate = replace(
        default_scenario(), lambda_1c=10.0, lambda_1m=0.0, p_mw=1.0, lambda_2_mw=5.0
    )
    run_case("all-Poisson degenerate", degenerate, window, args.reps, args.seed)
    run_case("clustered default", default_scenario(), window, args.reps, args.seed + 1)


if __name__ == "__main__":
    main()
