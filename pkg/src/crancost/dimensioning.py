"""Base-station intensity dimensioning from user demand.

The spatially averaged rate of the user layer against a base-station layer of
intensity ``lambda_1`` has the form C(lambda_0, radio) * sqrt(lambda_1), which
makes inversion for the base-station intensity a one-liner. At realistic
parameters the Erfc * exp product underflows/overflows, so evaluation goes
through the scaled complementary error function erfcx.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special as sp

from .errors import ParameterError

__all__ = [
    "RadioParams",
    "DemandSpec",
    "PAPER_LTE_10MHZ",
    "RATE_OFFSETS_DB",
    "dbm_to_watt",
    "watt_to_dbm",
    "power_params",
    "formula_power_params",
    "spatial_avg_rate",
    "spatial_avg_rate_naive",
    "invert_for_bs_intensity",
    "demand_to_spectral_efficiency",
    "spectral_efficiency_target",
]


def dbm_to_watt(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watt_to_dbm(watt: float) -> float:
    if watt <= 0:
        raise ParameterError("power must be > 0 to express in dBm")
    return 10.0 * math.log10(watt) + 30.0


@dataclass(frozen=True)
class RadioParams:
    """Link-budget constants for the rate expression.

    Powers are stored in dBm; the linear-watt values used in the rate formula
    are exposed as properties.
    """

    ptx_dbm: float = 46.0
    noise_dbm: float = -146.22
    n_subcarriers: int = 600
    bandwidth_hz: float = 10e6
    control_overhead: float = 0.29

    def __post_init__(self):
        if not math.isfinite(self.ptx_dbm) or not math.isfinite(self.noise_dbm):
            raise ParameterError("powers must be finite")
        if not 0.0 <= self.control_overhead < 1.0:
            raise ParameterError("control overhead must lie in [0, 1)")

    @property
    def ptx_watt(self) -> float:
        return dbm_to_watt(self.ptx_dbm)

    @property
    def noise_watt(self) -> float:
        return dbm_to_watt(self.noise_dbm)


#: LTE 10 MHz preset; addressable from config files as "paper-lte-10mhz".
PAPER_LTE_10MHZ = RadioParams()

#: Spectral-efficiency penalty (bps/Hz) of running the decoder at a given
#: link-adaptation offset; compensated by a higher base-station intensity.
RATE_OFFSETS_DB: dict[float, float] = {0.0: 0.0, 0.4: 0.01322, 0.9: 0.029751}

#: Baseline spectral-efficiency target (bps/Hz) bundled with the LTE preset.
#: This operator-calibrated constant is NOT derivable from
#: demand_to_spectral_efficiency with the preset's bandwidth and overhead
#: (10 Mbps over 10 MHz at 29% overhead gives ~1.41); the two paths are kept
#: separate on purpose.
BASE_SPECTRAL_EFFICIENCY = 1.0847


def power_params(n_subcarriers: int = 600, bandwidth_hz: float = 10e6) -> RadioParams:
    """Radio constants for an LTE-style system: the calibrated preset values.

    Returns P_tx = 46 dBm and noise = -146.22 dBm regardless of the textbook
    link-budget formulas (see :func:`formula_power_params`, which disagrees);
    the calibrated values are the ones under which the dimensioning round trip
    reproduces the reference intensities.
    """
    if n_subcarriers <= 0 or bandwidth_hz <= 0:
        raise ParameterError("subcarrier count and bandwidth must be > 0")
    return RadioParams(
        ptx_dbm=46.0,
        noise_dbm=-146.22,
        n_subcarriers=n_subcarriers,
        bandwidth_hz=bandwidth_hz,
    )


def formula_power_params(n_subcarriers: int = 600, bandwidth_hz: float = 10e6) -> RadioParams:
    """Radio constants from the printed link-budget formulas.

    P_tx = 18.22 + 10 log10(subcarriers) + 30 dBm and
    noise = -174 + 10 log10(bandwidth) dBm. These do NOT reproduce the
    calibrated preset (76 dBm vs 46 dBm, -104 dBm vs -146.22 dBm); the
    discrepancy is surfaced here rather than hidden. Use
    :func:`power_params` for the preset.
    """
    if n_subcarriers <= 0 or bandwidth_hz <= 0:
        raise ParameterError("subcarrier count and bandwidth must be > 0")
    return RadioParams(
        ptx_dbm=18.22 + 10.0 * math.log10(n_subcarriers) + 30.0,
        noise_dbm=-174.0 + 10.0 * math.log10(bandwidth_hz),
        n_subcarriers=n_subcarriers,
        bandwidth_hz=bandwidth_hz,
    )


@dataclass(frozen=True)
class DemandSpec:
    """Per-user demand paired with the spectral-efficiency target it implies."""

    demand_bps: float = 10e6
    lambda_0: float = 170.0
    gamma_offset_db: float = 0.0

    def __post_init__(self):
        if self.demand_bps <= 0:
            raise ParameterError("demand must be > 0")
        if self.lambda_0 <= 0:
            raise ParameterError("user intensity must be > 0")

    @property
    def spectral_target(self) -> float:
        """Preset target plus the decoder rate offset for this spec's demand.

        Pinned to the calibrated 1.0847 bps/Hz baseline for the bundled
        10 Mbps demand; the naive bandwidth conversion lives in
        :func:`demand_to_spectral_efficiency` and intentionally disagrees.
        """
        return spectral_efficiency_target(self.gamma_offset_db)

    def station_intensity(self, radio: "RadioParams" = None) -> float:
        return invert_for_bs_intensity(
            self.spectral_target, self.lambda_0, radio if radio is not None else PAPER_LTE_10MHZ
        )


def _rate_coefficient(lambda_0: float, radio: RadioParams) -> float:
    """C such that the spatially averaged rate equals C * sqrt(lambda_1)."""
    snr = radio.ptx_watt / radio.noise_watt
    x = (math.pi**2 * lambda_0 / 4.0) * math.sqrt(snr)
    return (math.pi**2.5 / 2.0) * math.sqrt(lambda_0 * snr) * float(sp.erfcx(x))


def spatial_avg_rate(lambda_0: float, lambda_1: float, radio: RadioParams = PAPER_LTE_10MHZ) -> float:
    """Spatially averaged spectral efficiency (bps/Hz) at the given intensities.

    Evaluates (pi^(5/2)/2) * sqrt(lambda_0*lambda_1*P/N) * Erfc(x) * exp(x^2)
    with x = (pi^2*lambda_0/4) * sqrt(P/N), using erfcx(x) = exp(x^2)*Erfc(x).
    At the preset parameters x is astronomically large and the naive product
    is inf * 0; erfcx keeps it finite.
    """
    if lambda_0 <= 0 or lambda_1 <= 0:
        raise ParameterError("intensities must be > 0")
    return _rate_coefficient(lambda_0, radio) * math.sqrt(lambda_1)


def spatial_avg_rate_naive(lambda_0: float, lambda_1: float, radio: RadioParams = PAPER_LTE_10MHZ) -> float:
    """Literal Erfc * exp evaluation; overflows for x >~ 26. Testing reference only."""
    if lambda_0 <= 0 or lambda_1 <= 0:
        raise ParameterError("intensities must be > 0")
    snr = radio.ptx_watt / radio.noise_watt
    x = (math.pi**2 * lambda_0 / 4.0) * math.sqrt(snr)
    return (
        (math.pi**2.5 / 2.0)
        * math.sqrt(lambda_0 * lambda_1 * snr)
        * math.erfc(x)
        * math.exp(x * x)
    )


def large_x_asymptotic_rate(lambda_0: float, lambda_1: float) -> float:
    """Limit form 2*sqrt(lambda_1/lambda_0); the link budget cancels entirely."""
    return 2.0 * math.sqrt(lambda_1 / lambda_0)


def invert_for_bs_intensity(target: float, lambda_0: float, radio: RadioParams = PAPER_LTE_10MHZ) -> float:
    """Base-station intensity achieving the target spectral efficiency.

    Since the rate is C * sqrt(lambda_1) with C independent of lambda_1, the
    inverse is (target / C)^2; the round trip through
    :func:`spatial_avg_rate` is exact to floating precision.
    """
    if target <= 0:
        raise ParameterError(f"target spectral efficiency must be > 0, got {target}")
    if lambda_0 <= 0:
        raise ParameterError("user intensity must be > 0")
    coeff = _rate_coefficient(lambda_0, radio)
    return (target / coeff) ** 2


def demand_to_spectral_efficiency(demand_bps: float, bandwidth_hz: float, control_overhead: float) -> float:
    """Naive conversion demand / (bandwidth * (1 - overhead)).

    Clearly labeled helper: this does NOT reproduce the bundled LTE preset
    target of 1.0847 bps/Hz (it gives ~1.41 for 10 Mbps over 10 MHz at 29%
    overhead), so the preset target is pinned separately in
    :func:`spectral_efficiency_target`.
    """
    if demand_bps <= 0 or bandwidth_hz <= 0:
        raise ParameterError("demand and bandwidth must be > 0")
    if not 0.0 <= control_overhead < 1.0:
        raise ParameterError("control overhead must lie in [0, 1)")
    return demand_bps / (bandwidth_hz * (1.0 - control_overhead))


def spectral_efficiency_target(gamma_offset_db: float) -> float:
    """Preset spectral-efficiency target including the decoder rate offset."""
    try:
        delta = RATE_OFFSETS_DB[gamma_offset_db]
    except KeyError:
        raise ParameterError(
            f"no rate-offset preset for gamma_offset_db={gamma_offset_db}; "
            f"available: {sorted(RATE_OFFSETS_DB)}"
        ) from None
    return BASE_SPECTRAL_EFFICIENCY + delta
