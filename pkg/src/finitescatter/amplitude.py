"""Scattering amplitude at a finite observer distance and its far limit.

The partial-wave series for the scattered wave keeps, at finite radius,
one Bessel-polynomial factor per term:

    f(r, theta) = (1/2ik) sum_l (2l+1) (e^{2i delta_l} - 1) P_l(cos theta) y_l(i/kr)

Sending r to infinity turns every y_l into 1 and recovers the textbook
amplitude f_inf(theta).  Both sums run in fixed ascending-l order so the
results are bitwise reproducible.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SeriesDivergenceError
from .phases import PhaseShiftSet
from .specfun import (
    _check_order,
    bessel_poly,
    bessel_poly_deriv,
    legendre_deriv_table,
    legendre_table,
    sph_bessel_j_table,
)

_IPOW = (1 + 0j, 1j, -1 + 0j, -1j)

# Below this kr the polynomial factors grow so fast in l that the series
# is useless; the guard would fire anyway, but the bound keeps call sites
# honest about the formula's domain.
MIN_KR = 0.1


def _check_theta(theta: float) -> None:
    if not (0.0 <= theta <= math.pi):
        raise DomainError(f"theta must lie in [0, pi], got {theta}")


@dataclass(frozen=True)
class AmplitudeSeries:
    """Truncation metadata for one partial-wave amplitude evaluation."""

    phases: PhaseShiftSet
    l_max_eff: int
    tail_estimate: float

    def __post_init__(self) -> None:
        if not 0 <= self.l_max_eff <= self.phases.l_max:
            raise DomainError(
                f"effective truncation {self.l_max_eff} outside [0, {self.phases.l_max}]"
            )
        if not math.isfinite(self.tail_estimate):
            raise DomainError("tail estimate must be finite")


def expansion_coefficients(phases: PhaseShiftSet, theta: float) -> np.ndarray:
    """Per-l coefficients g_l(theta) multiplying y_l(i/kr) in the series."""
    _check_theta(theta)
    p = legendre_table(phases.l_max, math.cos(theta))
    ls = np.arange(phases.l_max + 1)
    return -(2 * ls + 1) * (1.0 - np.exp(2j * phases.delta)) * p / (2j * phases.k)


def _series_eval(
    phases: PhaseShiftSet, r: float, theta: float, want_derivs: bool
) -> tuple[complex, complex, complex, AmplitudeSeries]:
    """One guarded ascending-l pass; optionally accumulates d/dr and d/dtheta.

    The per-l magnitude |(2l+1)(e^{2i delta_l}-1) y_l(i/kr)|/2k (the term
    envelope at theta = 0) is monitored in the upper half of the sum; five
    consecutive increases mean the polynomial growth has beaten the phase
    shifts' decay and the series is diverging at this kr.
    """
    kr = phases.k * r
    if not (kr >= MIN_KR and math.isfinite(kr)):
        raise DomainError(f"series needs k*r >= {MIN_KR}, got {kr}")
    g = expansion_coefficients(phases, theta)
    if want_derivs:
        sin_t = math.sin(theta)
        dp = legendre_deriv_table(phases.l_max, math.cos(theta), sin_t * sin_t)
        ls = np.arange(phases.l_max + 1)
        # dg_l/dtheta: same prefactor as g_l with dP_l/dtheta = -sin(theta) P_l'(u)
        dg = (
            -(2 * ls + 1)
            * (1.0 - np.exp(2j * phases.delta))
            * (-sin_t * dp)
            / (2j * phases.k)
        )
    z = 1j / kr
    two_k = 2.0 * phases.k
    total = 0.0 + 0.0j
    d_r = 0.0 + 0.0j
    d_theta = 0.0 + 0.0j
    l_max_eff = 0
    tail = 0.0
    growth_run = 0
    prev_envelope = math.inf
    guard_floor = phases.l_max // 2
    for l in range(phases.l_max + 1):
        y = bessel_poly(l, z)
        envelope = (2 * l + 1) * abs(1.0 - np.exp(2j * phases.delta[l])) * abs(y) / two_k
        if l > guard_floor:
            if envelope > prev_envelope:
                growth_run += 1
                if growth_run >= 5:
                    raise SeriesDivergenceError(
                        f"partial-wave terms growing past l={l} at kr={kr:g}; "
                        "the finite-distance series does not converge this close in"
                    )
            else:
                growth_run = 0
        prev_envelope = envelope
        term = g[l] * y
        total += term
        if want_derivs:
            # z = i/kr depends on r through dz/dr = -z/r
            d_r += g[l] * bessel_poly_deriv(l, z) * (-z / r)
            d_theta += dg[l] * y
        if abs(term) > 0.0:
            l_max_eff = l
            tail = abs(term)
    meta = AmplitudeSeries(phases=phases, l_max_eff=l_max_eff, tail_estimate=tail)
    return total, d_r, d_theta, meta


def amplitude_series(
    phases: PhaseShiftSet, r: float, theta: float
) -> tuple[complex, AmplitudeSeries]:
    """Finite-distance amplitude together with its truncation metadata."""
    value, _, _, meta = _series_eval(phases, r, theta, want_derivs=False)
    return value, meta


def amplitude_derivatives(
    phases: PhaseShiftSet, r: float, theta: float
) -> tuple[complex, complex, complex]:
    """(f, df/dr, df/dtheta) at one observation point.

    Derivatives come from the same truncated series as the value itself:
    the radial factor differentiates through the polynomial argument and
    the angular factor through dP_l/dtheta, so downstream flux formulas
    stay exact for the truncated model instead of leaning on finite
    differences.
    """
    value, d_r, d_theta, _ = _series_eval(phases, r, theta, want_derivs=True)
    return value, d_r, d_theta


def amplitude_finite(phases: PhaseShiftSet, r: float, theta: float) -> complex:
    """f(r, theta): the scattering amplitude seen at radius r."""
    value, _ = amplitude_series(phases, r, theta)
    return value


def amplitude_asymptotic(phases: PhaseShiftSet, theta: float) -> complex:
    """f_inf(theta): the conventional amplitude (observer at infinity)."""
    total = 0.0 + 0.0j
    for term in expansion_coefficients(phases, theta):
        total += term
    return total


def plane_wave_exact(kr: float, theta: float, l_max: int) -> complex:
    """Partial sum of the plane-wave expansion e^{i k r cos theta}.

    Summed as (2l+1) i^l j_l(kr) P_l(cos theta); the equivalent shifted-sine
    form with the polynomial modulus and argument is algebraically identical
    but cancels catastrophically once l exceeds kr, so the Bessel route is
    used at every radius.  Converges to the exponential only when l_max
    comfortably exceeds kr; a truncation warning fires below kr + 10.
    """
    if not (kr >= 0.0 and math.isfinite(kr)):
        raise DomainError(f"kr must be nonnegative and finite, got {kr}")
    _check_theta(theta)
    _check_order(l_max)
    if l_max < kr + 10:
        warnings.warn(
            f"plane-wave sum truncated at l_max={l_max} < kr + 10 = {kr + 10:g}; "
            "expect visible truncation error",
            RuntimeWarning,
            stacklevel=2,
        )
    if kr == 0.0:
        return 1.0 + 0.0j
    j = sph_bessel_j_table(l_max, kr)
    p = legendre_table(l_max, math.cos(theta))
    total = 0.0 + 0.0j
    for l in range(l_max + 1):
        total += (2 * l + 1) * _IPOW[l % 4] * j[l] * p[l]
    return total
