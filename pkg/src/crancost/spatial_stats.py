"""Distributional quantities of the point-process layers.

Closed-form contact moments for Poisson layers, the mixed-Poisson variant,
and the cluster-process quantities (void probability, J-function,
nearest-neighbor distribution, distance moments) that feed the user-to-base-
station cost terms. The 2D integrals are reduced to 1D radial integrals by
isotropy and evaluated with adaptive quadrature; the inner Gaussian-disc mass
uses the noncentral-chi-squared identity instead of nested quadrature.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy import special as sp

from .errors import ParameterError, QuadratureError

__all__ = [
    "ClusterParams",
    "QuadratureSettings",
    "DEFAULT_QUAD",
    "ppp_contact_moment",
    "mixed_contact_moment",
    "gaussian_disc_mass",
    "void_probability",
    "j_function",
    "nn_distance_cdf",
    "cluster_nn_moment",
]


@dataclass(frozen=True)
class ClusterParams:
    """Thomas-process parameters for the base-station layer.

    lambda_1c: cluster (macro) intensity per km^2
    lambda_1m: expected cluster members (micros) per cluster
    sigma:     Gaussian kernel standard deviation per axis, km
    """

    lambda_1c: float
    lambda_1m: float
    sigma: float

    def __post_init__(self):
        if self.lambda_1c < 0 or self.lambda_1m < 0:
            raise ParameterError("cluster intensities must be >= 0")
        if self.sigma <= 0:
            raise ParameterError("sigma must be > 0")

    @property
    def total_intensity(self) -> float:
        return self.lambda_1c * (1.0 + self.lambda_1m)


@dataclass(frozen=True)
class QuadratureSettings:
    """Tolerances for the adaptive radial integrals.

    These defaults are part of the public contract; every operation accepts an
    override. ``max_radius_factor`` truncates the integration range at that
    multiple of the relevant length scale (mean point spacing for distance
    moments, the kernel width for the cluster integrals).
    """

    abs_tol: float = 1e-8
    rel_tol: float = 1e-6
    max_radius_factor: float = 10.0
    max_subdivisions: int = 200

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ParameterError("quadrature tolerances must be > 0")
        if self.max_subdivisions < 1:
            raise ParameterError("max_subdivisions must be >= 1")


DEFAULT_QUAD = QuadratureSettings()


def _quad(func, lo: float, hi: float, quad: QuadratureSettings, what: str) -> float:
    with warnings.catch_warnings():
        # the warning condition is re-raised as a typed error below
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err = integrate.quad(
            func, lo, hi, epsabs=quad.abs_tol, epsrel=quad.rel_tol, limit=quad.max_subdivisions
        )
    if err > quad.abs_tol + quad.rel_tol * abs(value) and err > 1e3 * quad.abs_tol:
        raise QuadratureError(f"{what} did not converge", achieved_error=err)
    return value


def ppp_contact_moment(beta: float, intensity: float) -> float:
    """E[R^beta] of the distance to the nearest point of a PPP.

    Equals Gamma(beta/2 + 1) / (pi * intensity)^(beta/2).
    """
    if intensity <= 0:
        raise ParameterError(f"intensity must be > 0, got {intensity}")
    if beta < 0:
        raise ParameterError(f"beta must be >= 0, got {beta}")
    return math.gamma(beta / 2.0 + 1.0) / (math.pi * intensity) ** (beta / 2.0)


def mixed_contact_moment(base: float, beta: float, p: float, lambda_mw: float, lambda_of: float) -> float:
    """Contact moment against a two-point mixed-Poisson layer, scaled by a base cost.

    Returns ``base * [p * ppp_contact_moment(beta, lambda_mw)
    + (1-p) * ppp_contact_moment(beta, lambda_of)]``. This single form covers
    both the capacity and the infrastructure cost terms between the
    base-station and backhaul layers.
    """
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    return base * (
        p * ppp_contact_moment(beta, lambda_mw) + (1.0 - p) * ppp_contact_moment(beta, lambda_of)
    )


def gaussian_disc_mass(center_dist, sigma: float, radius: float):
    """Mass a 2D isotropic Gaussian places inside a disc.

    Probability that a Gaussian with standard deviation ``sigma`` per axis,
    centered ``center_dist`` away from the disc center, lands inside the disc
    of the given radius. Evaluated through the noncentral-chi-squared CDF
    (equivalently 1 - MarcumQ1(center_dist/sigma, radius/sigma)); accepts
    array ``center_dist``.
    """
    if sigma <= 0:
        raise ParameterError(f"sigma must be > 0, got {sigma}")
    if radius < 0:
        raise ParameterError(f"radius must be >= 0, got {radius}")
    d = np.asarray(center_dist, dtype=float)
    if np.any(d < 0):
        raise ParameterError("center_dist must be >= 0")
    if radius == 0.0:
        return np.zeros_like(d) if d.ndim else 0.0
    x = np.asarray((radius / sigma) ** 2, dtype=float)
    nc = (d / sigma) ** 2
    with np.errstate(all="ignore"):
        out = sp.chndtr(x, 2.0, nc)
    # chndtr overshoots 1.0 by a few ulp at extreme arguments and yields NaN
    # on subnormal ones; fall back to the sharp asymptotic limit there
    out = np.where(np.isnan(out), np.where(x > nc, 1.0, 0.0), out)
    out = np.clip(out, 0.0, 1.0)
    return out if d.ndim else float(out)


def void_probability(r: float, params: ClusterParams, quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """Probability that the cluster process leaves a ball of radius r empty.

    For the Thomas process this is exact:
    exp(-lambda_1c * Int_R2 [1 - 1(x outside ball) * exp(-lambda_1m * m(|x|, r))] dx)
    with m the Gaussian disc mass. The planar integral reduces to a radial one;
    inside the ball the bracket is 1 and contributes pi r^2 exactly.
    """
    if r < 0:
        raise ParameterError(f"r must be >= 0, got {r}")
    if r == 0.0:
        return 1.0
    lam_m, sigma = params.lambda_1m, params.sigma

    if lam_m == 0.0:
        outer = 0.0
    else:

        def integrand(s: float) -> float:
            return s * (1.0 - math.exp(-lam_m * gaussian_disc_mass(s, sigma, r)))

        upper = r + quad.max_radius_factor * sigma
        outer = _quad(integrand, r, upper, quad, "void probability integral")
    exponent = params.lambda_1c * (math.pi * r * r + 2.0 * math.pi * outer)
    return math.exp(-exponent)


def j_function(r: float, params: ClusterParams, quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """J-function of the combined macro + micro base-station process.

    Mixture of the macro component (a PPP, whose J is identically 1) and the
    cluster-member component, weighted by their intensity shares:
    1/(1+lambda_1m) + lambda_1m/(1+lambda_1m) * Int f(x) exp(-lambda_1m * m(|x|, r)) dx.
    The mixture treats the two components as independent, so it is an
    approximation for strongly clustered parameters (macros and their own
    offspring are not independent); see the package notes.
    """
    if r < 0:
        raise ParameterError(f"r must be >= 0, got {r}")
    lam_m, sigma = params.lambda_1m, params.sigma
    if r == 0.0 or lam_m == 0.0:
        return 1.0

    def integrand(s: float) -> float:
        f_radial = (s / sigma**2) * math.exp(-s * s / (2.0 * sigma**2))
        return f_radial * math.exp(-lam_m * gaussian_disc_mass(s, sigma, r))

    upper = r + quad.max_radius_factor * sigma
    member_term = _quad(integrand, 0.0, upper, quad, "J-function integral")
    w = 1.0 / (1.0 + lam_m)
    return w + (1.0 - w) * member_term


def nn_distance_cdf(r: float, params: ClusterParams, quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """CDF of the distance from a typical base station to its nearest neighbor.

    G(r) = 1 - [void probability at r] * J(r); nondecreasing in r with
    G(0) = 0 and G(r) -> 1.
    """
    return 1.0 - void_probability(r, params, quad) * j_function(r, params, quad)


def _survival(r: float, params: ClusterParams, quad: QuadratureSettings, distance: str) -> float:
    if distance == "palm":
        return void_probability(r, params, quad) * j_function(r, params, quad)
    if distance == "contact":
        return void_probability(r, params, quad)
    raise ParameterError(f"distance must be 'palm' or 'contact', got {distance!r}")


@lru_cache(maxsize=4096)
def _cluster_nn_moment_cached(
    exponent: float,
    lambda_1c: float,
    lambda_1m: float,
    sigma: float,
    quad: QuadratureSettings,
    distance: str,
) -> float:
    params = ClusterParams(lambda_1c, lambda_1m, sigma)
    if params.lambda_1c == 0:
        raise ParameterError("cluster intensity must be > 0 for distance moments")

    def tail_integrand(r: float) -> float:
        return exponent * r ** (exponent - 1.0) * _survival(r, params, quad, distance)

    # the survival function decays on the scale of the sparser of the cluster
    # centers and the kernel spread
    upper = quad.max_radius_factor * max(1.0 / math.sqrt(lambda_1c), sigma)
    return _quad(tail_integrand, 0.0, upper, quad, "nearest-distance moment integral")


def cluster_nn_moment(
    exponent: float,
    params: ClusterParams,
    quad: QuadratureSettings = DEFAULT_QUAD,
    distance: str = "palm",
) -> float:
    """E[R^exponent] of the nearest-base-station distance, via the tail formula.

    ``distance`` selects whose viewpoint the distance is taken from:

    * ``"palm"``: from a typical point of the process itself (nearest-neighbor
      distribution G, through the J-function);
    * ``"contact"``: from an independent uniformly random location, e.g. a
      user (empty-space function F, void probability only). This variant is
      exact for the Thomas process and is what the Monte Carlo deployment
      oracle reproduces.

    Computed as Int_0^inf exponent * r^(exponent-1) * (1 - CDF(r)) dr; the
    degenerate case lambda_1m = 0 reproduces the PPP contact moment either way.
    """
    if exponent < 0:
        raise ParameterError(f"exponent must be >= 0, got {exponent}")
    if exponent == 0:
        return 1.0
    return _cluster_nn_moment_cached(
        float(exponent), params.lambda_1c, params.lambda_1m, params.sigma, quad, distance
    )
