#!/usr/bin/env python3
"""Produce the plot-ready cost tables: every sweep axis, all architectures.

Writes one CSV per axis into the output directory (default ./results).
"""

import argparse
import pathlib

from crancost.config import default_scenario
from crancost.sweeps import SweepSpec, emit, run_sweep

SWEEPS = {
    "lambda3": [0.5 * k for k in range(1, 13)],
    "alpha": [0.1 * k for k in range(11)],
    "lambda0": [100.0, 120.0, 150.0, 170.0, 200.0, 250.0, 300.0],
    "p": [0.1 * k for k in range(11)],
    "sigma2": [0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5, 2.0],
}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    base = default_scenario()
    for axis, values in SWEEPS.items():
        spec = SweepSpec(axis=axis, values=tuple(values))
        result = run_sweep(spec, base, threads=args.threads)
        target = out_dir / f"cost_vs_{axis}.csv"
        emit(result, "csv", target)
        print(f"wrote {target} ({len(result.rows)} rows)")


if __name__ == "__main__":
    main()
