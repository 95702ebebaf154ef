"""Parameter sweeps over the closed-form cost and plot-ready table emission."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from .config import derive_bs_intensity, derive_processing_base, scenario_hash
from .costs import Architecture, CostBreakdown, Scenario, total_cost
from .errors import CrancostError, ParameterError
from .spatial_stats import DEFAULT_QUAD, QuadratureSettings

__all__ = [
    "SWEEP_AXES",
    "ARCHITECTURE_VARIANTS",
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "scenario_for_point",
    "run_sweep",
    "emit",
]

TOOL_VERSION = "0.1.0"

SWEEP_AXES = ("lambda3", "alpha", "lambda0", "p", "sigma2")

#: architecture variants a sweep can trace: distributed, and centralized at
#: each supported link-adaptation offset
ARCHITECTURE_VARIANTS: dict[str, tuple[Architecture, float]] = {
    "dran": (Architecture.DRAN, 0.0),
    "cloud_ran@0db": (Architecture.CLOUD_RAN, 0.0),
    "cloud_ran@0.4db": (Architecture.CLOUD_RAN, 0.4),
    "cloud_ran@0.9db": (Architecture.CLOUD_RAN, 0.9),
}

DEFAULT_VARIANTS = ("dran", "cloud_ran@0db", "cloud_ran@0.4db", "cloud_ran@0.9db")


@dataclass(frozen=True)
class SweepSpec:
    """One axis, its values, and the architecture variants to trace."""

    axis: str
    values: tuple[float, ...]
    architectures: tuple[str, ...] = DEFAULT_VARIANTS

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ParameterError(f"axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ParameterError("sweep values must be non-empty")
        if any(not math.isfinite(v) for v in vals):
            raise ParameterError("sweep values must be finite")
        if any(b < a for a, b in zip(vals, vals[1:])):
            raise ParameterError("sweep values must be sorted ascending")
        object.__setattr__(self, "values", vals)
        for name in self.architectures:
            if name not in ARCHITECTURE_VARIANTS:
                raise ParameterError(
                    f"unknown architecture variant {name!r}; available: {sorted(ARCHITECTURE_VARIANTS)}"
                )


@dataclass
class SweepRow:
    axis: str
    value: float
    architecture: str
    gamma_offset_db: float
    breakdown: CostBreakdown | None
    lambda_3: float = 0.0  # data-center intensity at this point (per-km^2 scale)
    error: str | None = None


@dataclass
class SweepResult:
    spec: SweepSpec
    rows: list[SweepRow]
    metadata: dict


def _variant_base(base: Scenario, variant: str) -> Scenario:
    """Re-dimension the base scenario for one architecture variant."""
    architecture, gamma = ARCHITECTURE_VARIANTS[variant]
    lambda_1 = derive_bs_intensity(base.lambda_0, gamma)
    lambda_1c = lambda_1 / (1.0 + base.lambda_1m)
    links = replace(
        base.links,
        processing_base=derive_processing_base(architecture, gamma, base.lambda_0, lambda_1),
    )
    return replace(
        base,
        architecture=architecture,
        gamma_offset_db=gamma,
        lambda_1c=lambda_1c,
        links=links,
    )


def scenario_for_point(base: Scenario, variant: str, axis: str, value: float) -> Scenario:
    """Scenario at one sweep point.

    The alpha axis rewrites the base-station cost scale; the lambda0 axis
    re-derives the base-station intensity (and with it the processing cost)
    before costing; sigma2 rescales the cluster spread; lambda3 and p are
    direct substitutions.
    """
    scen = _variant_base(base, variant)
    if axis == "lambda3":
        return replace(scen, lambda_3=value)
    if axis == "alpha":
        return replace(scen, equipment=replace(scen.equipment, alpha=value))
    if axis == "p":
        return replace(scen, p_mw=value)
    if axis == "sigma2":
        return replace(scen, sigma=math.sqrt(value))
    if axis == "lambda0":
        rebased = replace(scen, lambda_0=value)
        return _variant_base(rebased, variant)
    raise ParameterError(f"unknown axis {axis!r}")


def run_sweep(
    spec: SweepSpec,
    base: Scenario,
    quad: QuadratureSettings = DEFAULT_QUAD,
    threads: int = 1,
) -> SweepResult:
    """Evaluate the total cost at every (value, architecture) point.

    Row evaluation errors are recorded in the row and the sweep continues.
    Output ordering (values outer, architectures inner) is deterministic
    regardless of the thread-pool size.
    """
    points = [(value, variant) for value in spec.values for variant in spec.architectures]

    def evaluate(point) -> SweepRow:
        value, variant = point
        _, gamma = ARCHITECTURE_VARIANTS[variant]
        try:
            scen = scenario_for_point(base, variant, spec.axis, value)
            breakdown = total_cost(scen, quad)
            return SweepRow(spec.axis, value, variant, gamma, breakdown, lambda_3=scen.lambda_3)
        except CrancostError as exc:
            return SweepRow(
                spec.axis, value, variant, gamma, None, lambda_3=base.lambda_3,
                error=f"{exc.category}: {exc}",
            )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(evaluate, points))
    else:
        rows = [evaluate(pt) for pt in points]

    metadata = {
        "tool_version": TOOL_VERSION,
        "axis": spec.axis,
        "architectures": list(spec.architectures),
        "base_scenario_hash": scenario_hash(base),
    }
    return SweepResult(spec=spec, rows=rows, metadata=metadata)


def _fmt(x: float) -> str:
    return f"{x:.6g}"


CSV_COLUMNS = (
    "axis",
    "value",
    "architecture",
    "gamma_offset_db",
    "total_per_km2",
    "equipment",
    "capacity",
    "infrastructure",
    "processing",
)


def _row_cells(row: SweepRow) -> dict[str, str]:
    cells = {
        "axis": row.axis,
        "value": _fmt(row.value),
        "architecture": row.architecture,
        "gamma_offset_db": _fmt(row.gamma_offset_db),
    }
    if row.breakdown is None:
        cells.update({k: "nan" for k in CSV_COLUMNS[4:]})
        return cells
    b = row.breakdown
    scale = row.lambda_3  # per-data-center terms -> per km^2
    cells.update(
        {
            "total_per_km2": _fmt(b.total_per_km2),
            # the data-center equipment share is the remainder of the total
            # over the per-data-center terms
            "equipment": _fmt(scale * b.equipment + (b.total_per_km2 - scale * b.c_phi3)),
            "capacity": _fmt(scale * b.capacity),
            "infrastructure": _fmt(scale * b.infrastructure),
            "processing": _fmt(scale * b.processing),
        }
    )
    return cells


def emit(result: SweepResult, format: str, path) -> None:
    """Write the sweep table as CSV or JSON.

    CSV columns are fixed; grouped cost columns are per km^2 (so they sum to
    the total). JSON mirrors the rows and adds the metadata block. Output is
    byte-identical across runs for the same inputs. Rows that failed evaluate
    to "nan" cells in CSV and carry an "error" entry in JSON.
    """
    if format not in ("csv", "json"):
        raise ParameterError(f"format must be 'csv' or 'json', got {format!r}")
    text = render(result, format)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def render(result: SweepResult, format: str) -> str:
    if format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in result.rows:
            writer.writerow(_row_cells(row))
        return buf.getvalue()

    rows = []
    for row in result.rows:
        entry: dict = {
            "axis": row.axis,
            "value": row.value,
            "architecture": row.architecture,
            "gamma_offset_db": row.gamma_offset_db,
        }
        if row.breakdown is None:
            entry["error"] = row.error
        else:
            entry["total_per_km2"] = float(_fmt(row.breakdown.total_per_km2))
            entry["breakdown"] = {k: float(_fmt(v)) for k, v in row.breakdown.as_dict().items()}
        rows.append(entry)
    return json.dumps({"metadata": result.metadata, "rows": rows}, indent=2, sort_keys=True) + "\n"
