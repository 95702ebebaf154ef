"""Command-line entry point.

Subcommands:
  evaluate    one scenario -> cost breakdown
  sweep       cost along one axis for several architectures -> table
  simulate    Monte Carlo deployment estimate (optionally dump realizations)
  compare     closed form vs Monte Carlo, z-score per term
  complexity  pooled vs distributed processing-demand table over pool sizes
  dimension   base-station intensity from the rate target
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from .complexity import (
    DecoderParams,
    FrameConstants,
    default_mcs_rates,
    dran_equivalent_demand,
    make_snr_sampler,
    outage_demand,
    servers_required,
    snr_thresholds,
)
from .config import load_scenario, save_scenario, scenario_hash
from .costs import Architecture, total_cost
from .dimensioning import invert_for_bs_intensity, spectral_efficiency_target
from .errors import CrancostError
from .geometry import Window
from .simulate import compare_to_closed_form, estimate_mean_dc_cost, realization_rows, simulate_realization
from .sweeps import ARCHITECTURE_VARIANTS, SweepSpec, TOOL_VERSION, render, run_sweep

_EXIT_CODES = {
    "config": 2,
    "parameter": 3,
    "numerical": 4,
    "assignment": 5,
    "sampler": 6,
    "estimation": 7,
    "internal": 1,
}


def _default_threads() -> int:
    env = os.environ.get("CRANCOST_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="scenario INI file")
    parser.add_argument("--preset", default="paper-default", help="base preset for unset keys")
    parser.add_argument("--out", default=None, help="output path (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="json")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--reps", type=int, default=2000)
    parser.add_argument("--threads", type=int, default=None, help="worker count (env CRANCOST_THREADS)")


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load(args):
    scenario = load_scenario(args.config, preset=args.preset)
    if getattr(args, "architecture", None):
        # late override so a single config file can serve both modes;
        # re-dimension intensity and processing cost for the new mode
        from dataclasses import replace

        from .config import derive_bs_intensity, derive_processing_base

        arch = Architecture(args.architecture)
        gamma = scenario.gamma_offset_db if arch is Architecture.CLOUD_RAN else 0.0
        lambda_1 = derive_bs_intensity(scenario.lambda_0, gamma)
        links = replace(
            scenario.links,
            processing_base=derive_processing_base(arch, gamma, scenario.lambda_0, lambda_1),
        )
        scenario = replace(
            scenario,
            architecture=arch,
            gamma_offset_db=gamma,
            lambda_1c=lambda_1 / (1.0 + scenario.lambda_1m),
            links=links,
        )
    return scenario


def _breakdown_payload(scenario, breakdown) -> dict:
    return {
        "scenario_hash": scenario_hash(scenario),
        "architecture": scenario.architecture.value,
        "gamma_offset_db": scenario.gamma_offset_db,
        "lambda_3": scenario.lambda_3,
        "per_data_center": breakdown.as_dict(),
        "c_phi3": breakdown.c_phi3,
        "total_per_km2": breakdown.total_per_km2,
    }


def cmd_evaluate(args) -> int:
    scenario = _load(args)
    breakdown = total_cost(scenario)
    payload = _breakdown_payload(scenario, breakdown)
    if args.format == "json":
        _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        lines = ["term,per_data_center"]
        for k, v in breakdown.as_dict().items():
            lines.append(f"{k},{v:.6g}")
        lines.append(f"c_phi3,{breakdown.c_phi3:.6g}")
        lines.append(f"total_per_km2,{breakdown.total_per_km2:.6g}")
        _write("\n".join(lines) + "\n", args.out)
    if args.dump_config:
        save_scenario(scenario, args.dump_config)
    return 0


def _parse_values(raw: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in raw.replace(",", " ").split())


def cmd_sweep(args) -> int:
    scenario = _load(args)
    axis, values, architectures = args.axis, args.values, args.architectures
    if (axis is None or values is None) and args.config:
        from .config import load_sweep_section
        from .errors import ConfigError

        section = load_sweep_section(args.config)
        if section is None:
            raise ConfigError("no [sweep] section in config and --axis/--values not given", key="sweep")
        cfg_axis, cfg_values, cfg_archs = section
        axis = axis or cfg_axis
        values = values if values is not None else " ".join(repr(v) for v in cfg_values)
        if architectures is None and cfg_archs:
            architectures = ",".join(cfg_archs)
    if axis is None or values is None:
        from .errors import ConfigError

        raise ConfigError("sweep needs --axis and --values (flags or a [sweep] config section)")
    spec = SweepSpec(
        axis=axis,
        values=_parse_values(values),
        architectures=tuple(architectures.split(",")) if architectures else tuple(ARCHITECTURE_VARIANTS),
    )
    threads = args.threads if args.threads is not None else _default_threads()
    result = run_sweep(spec, scenario, threads=threads)
    text = render(result, args.format)
    _write(text, args.out)
    return 0


def cmd_simulate(args) -> int:
    scenario = _load(args)
    window = Window(args.window, args.window, wrap=not args.no_wrap)
    threads = args.threads if args.threads is not None else _default_threads()
    if args.dump_realization is not None:
        real = simulate_realization(scenario, window, args.seed)
        with open(args.dump_realization, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["layer", "x", "y", "parent_index", "subtree_count"])
            for row in realization_rows(real):
                writer.writerow([row[0], f"{row[1]:.6g}", f"{row[2]:.6g}", row[3], row[4]])
    est = estimate_mean_dc_cost(scenario, window, args.reps, args.seed, threads=threads)
    payload = {
        "scenario_hash": scenario_hash(scenario),
        "window_km": [window.width, window.height],
        "n_reps": est.n_reps,
        "n_discarded": est.n_discarded,
        "mean_per_data_center": est.mean,
        "std_error": est.std_error,
        "per_term_means": est.per_term_means,
        "per_term_std_errors": est.per_term_std_errors,
    }
    _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_compare(args) -> int:
    scenario = _load(args)
    window = Window(args.window, args.window, wrap=not args.no_wrap)
    threads = args.threads if args.threads is not None else _default_threads()
    report = compare_to_closed_form(scenario, window, args.reps, args.seed, threads=threads)
    payload = {
        "scenario_hash": scenario_hash(scenario),
        "passed": report.passed,
        "threshold": report.threshold,
        "discard_rate": report.estimate.discard_rate,
        "window_note": report.window_note,
        "rows": report.rows(),
    }
    if args.format == "json":
        _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        buf = ["term,closed_form,empirical,std_error,z,pass"]
        for row in report.rows():
            buf.append(
                f"{row['term']},{row['closed_form']:.6g},{row['empirical']:.6g},"
                f"{row['std_error']:.6g},{row['z']:.4g},{row['pass']}"
            )
        _write("\n".join(buf) + "\n", args.out)
    return 0


def cmd_complexity(args) -> int:
    from dataclasses import replace

    from .config import load_complexity_settings

    settings = load_complexity_settings(args.config) if args.config else load_complexity_settings(text="")
    pool_sizes = [int(v) for v in _parse_values(args.pool_sizes)]
    offsets = [float(v) for v in _parse_values(args.offsets)]
    eps_comp = args.eps_comp if args.eps_comp is not None else settings.eps_comp
    n_mc = args.n_mc if args.n_mc is not None else settings.n_mc
    frame = FrameConstants()
    rows = []
    for gamma in offsets:
        params = replace(settings.decoder, gamma_offset_db=gamma)
        mcs = snr_thresholds(default_mcs_rates(), params)
        if args.sampler is not None:
            sampler = make_snr_sampler(args.sampler, **json.loads(args.sampler_params))
        else:
            sampler = settings.make_sampler()
        for n in pool_sizes:
            pooled = outage_demand(n, eps_comp, sampler, mcs, params, n_mc=n_mc, seed=args.seed)
            standalone = dran_equivalent_demand(
                n, eps_comp, sampler, mcs, params, n_mc=n_mc, seed=args.seed
            )
            rows.append(
                {
                    "gamma_offset_db": gamma,
                    "n_cloud": n,
                    "pooled_per_station": pooled / n,
                    "distributed_per_station": standalone / n,
                    "pooled_servers": servers_required(pooled, frame).d_unit,
                    "distributed_servers": servers_required(standalone, frame).d_unit,
                }
            )
    if args.format == "json":
        _write(json.dumps({"rows": rows}, indent=2, sort_keys=True) + "\n", args.out)
    else:
        cols = list(rows[0].keys())
        buf = [",".join(cols)]
        for row in rows:
            buf.append(",".join(f"{row[c]:.6g}" if isinstance(row[c], float) else str(row[c]) for c in cols))
        _write("\n".join(buf) + "\n", args.out)
    return 0


def cmd_dimension(args) -> int:
    target = args.target if args.target is not None else spectral_efficiency_target(args.gamma_offset_db)
    lambda_1 = invert_for_bs_intensity(target, args.lambda0)
    payload = {
        "lambda0": args.lambda0,
        "gamma_offset_db": args.gamma_offset_db,
        "spectral_efficiency_target": target,
        "lambda1": lambda_1,
    }
    _write(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crancost",
        description="Deployment-cost analysis of centralized vs distributed radio access networks",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {TOOL_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("evaluate", help="one scenario -> cost breakdown")
    _add_common(p_eval)
    p_eval.add_argument("--architecture", choices=("dran", "cloud_ran"), default=None)
    p_eval.add_argument("--dump-config", default=None, help="write the resolved scenario INI here")
    p_eval.set_defaults(func=cmd_evaluate)

    p_sweep = sub.add_parser("sweep", help="cost along one axis")
    _add_common(p_sweep)
    p_sweep.add_argument("--axis", default=None, choices=("lambda3", "alpha", "lambda0", "p", "sigma2"))
    p_sweep.add_argument("--values", default=None, help="space- or comma-separated numbers")
    p_sweep.add_argument(
        "--architectures",
        default=None,
        help="comma-separated subset of " + ",".join(ARCHITECTURE_VARIANTS),
    )
    p_sweep.set_defaults(func=cmd_sweep)

    p_sim = sub.add_parser("simulate", help="Monte Carlo deployment estimate")
    _add_common(p_sim)
    p_sim.add_argument("--window", type=float, default=10.0, help="square window side, km")
    p_sim.add_argument("--no-wrap", action="store_true", help="bounded window instead of toroidal")
    p_sim.add_argument("--dump-realization", default=None, help="CSV path for one realization's nodes")
    p_sim.set_defaults(func=cmd_simulate)

    p_cmp = sub.add_parser("compare", help="closed form vs Monte Carlo")
    _add_common(p_cmp)
    p_cmp.add_argument("--window", type=float, default=10.0)
    p_cmp.add_argument("--no-wrap", action="store_true")
    p_cmp.set_defaults(func=cmd_compare)

    p_cx = sub.add_parser("complexity", help="pooled vs distributed processing demand")
    _add_common(p_cx)
    p_cx.add_argument("--pool-sizes", default="1 2 5 10 20 50")
    p_cx.add_argument("--offsets", default="0 0.4 0.9")
    p_cx.add_argument("--eps-comp", type=float, default=None, help="outage target (default from config, 0.1)")
    p_cx.add_argument("--n-mc", type=int, default=None, help="Monte Carlo draws (default from config, 20000)")
    p_cx.add_argument("--sampler", default=None, help="override the configured SNR sampler")
    p_cx.add_argument("--sampler-params", default="{}", help="JSON dict of sampler parameters")
    p_cx.set_defaults(func=cmd_complexity)

    p_dim = sub.add_parser("dimension", help="base-station intensity from the rate target")
    _add_common(p_dim)
    p_dim.add_argument("--lambda0", type=float, default=170.0)
    p_dim.add_argument("--gamma-offset-db", type=float, default=0.0)
    p_dim.add_argument("--target", type=float, default=None, help="explicit bps/Hz target")
    p_dim.set_defaults(func=cmd_dimension)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CrancostError as exc:
        sys.stderr.write(json.dumps({"error": exc.category, "message": str(exc)}) + "\n")
        return _EXIT_CODES.get(exc.category, 1)
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": "io", "message": str(exc)}) + "\n")
        return 8


if __name__ == "__main__":
    sys.exit(main())
