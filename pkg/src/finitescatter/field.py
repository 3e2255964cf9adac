"""Total wavefunction and probability current around the scatterer.

The stationary state splits into a unit-amplitude incident plane wave and
an outgoing part f(r, theta) e^{ikr}/r whose amplitude still depends on r.
The probability current j = Im(psi* grad psi) is assembled from exact
derivatives of the truncated partial-wave model, never from finite
differences, so the identities the observables layer relies on hold to
roundoff rather than to a step size.

Two notions of "scattered current" coexist on purpose.  The difference
j - j_in keeps the interference between the incident and outgoing waves;
off axis that interference dominates at large kr and tilts the current to
an angle near -theta/2 from radial.  The outgoing wave's own current
(computed from psi_sc alone) instead turns radial like 1/kr and is the
right normal field for wave-front tracing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

from .amplitude import amplitude_derivatives, amplitude_finite
from .errors import UndefinedAngleError
from .phases import PhaseShiftSet

# |j^sc| below this fraction of k counts as "no scattered current here";
# the obliquity angle is then 0/0 and stays undefined.
UNDEFINED_FLUX_FRACTION = 1e-14


@dataclass(frozen=True)
class FieldPoint:
    """Field quantities at one observation point (r, theta).

    Current entries are (radial, polar) component pairs; they are None
    when the point came from wavefunction() alone.  gamma_sc is the angle
    of j_sc measured from the outward radial direction, positive toward
    increasing theta.
    """

    r: float
    theta: float
    psi_in: complex
    psi_sc: complex
    psi: complex
    j_in: tuple[float, float] | None = None
    j_sc: tuple[float, float] | None = None
    j: tuple[float, float] | None = None
    gamma_sc: float | None = None


class OutgoingFlux(NamedTuple):
    """Current carried by the outgoing wave alone, plus its tilt angle."""

    j_r: float
    j_theta: float
    gamma: float


def flux_components(
    psi: complex, dpsi_dr: complex, dpsi_dtheta: complex, r: float
) -> tuple[float, float]:
    """Polar current components Im(psi* grad psi) from a value and its derivatives."""
    w = psi.conjugate()
    return (w * dpsi_dr).imag, (w * dpsi_dtheta).imag / r


def _split_fields(
    phases: PhaseShiftSet, r: float, theta: float
) -> tuple[complex, complex, complex, complex, complex, complex]:
    """Incident and outgoing values with their exact r and theta derivatives."""
    k = phases.k
    f, df_dr, df_dtheta = amplitude_derivatives(phases, r, theta)
    cos_t = math.cos(theta)
    sin_t = math.sin(theta)
    psi_in = cmath.exp(1j * k * r * cos_t)
    radial = cmath.exp(1j * k * r) / r
    psi_sc = f * radial
    din_dr = 1j * k * cos_t * psi_in
    din_dtheta = -1j * k * r * sin_t * psi_in
    dsc_dr = radial * (df_dr + f * (1j * k - 1.0 / r))
    dsc_dtheta = df_dtheta * radial
    return psi_in, psi_sc, din_dr, din_dtheta, dsc_dr, dsc_dtheta


def wavefunction(phases: PhaseShiftSet, r: float, theta: float) -> FieldPoint:
    """Incident, outgoing and total wave values at (r, theta); no currents."""
    k = phases.k
    f = amplitude_finite(phases, r, theta)
    psi_in = cmath.exp(1j * k * r * math.cos(theta))
    psi_sc = f * cmath.exp(1j * k * r) / r
    return FieldPoint(r=r, theta=theta, psi_in=psi_in, psi_sc=psi_sc, psi=psi_in + psi_sc)


def flux(phases: PhaseShiftSet, r: float, theta: float) -> FieldPoint:
    """Complete field point: values, currents and the obliquity of j_sc.

    j_sc here is the full difference j - j_in, interference included.
    Raises UndefinedAngleError when |j_sc| falls under 1e-14 k (for
    instance when every phase shift vanishes), because the direction of a
    vanishing vector carries no information.
    """
    k = phases.k
    psi_in, psi_sc, din_dr, din_dtheta, dsc_dr, dsc_dtheta = _split_fields(
        phases, r, theta
    )
    psi = psi_in + psi_sc
    j_r, j_t = flux_components(psi, din_dr + dsc_dr, din_dtheta + dsc_dtheta, r)
    jin_r, jin_t = flux_components(psi_in, din_dr, din_dtheta, r)
    jsc_r = j_r - jin_r
    jsc_t = j_t - jin_t
    if math.hypot(jsc_r, jsc_t) < UNDEFINED_FLUX_FRACTION * k:
        raise UndefinedAngleError(
            f"|j_sc| < {UNDEFINED_FLUX_FRACTION:g} k at (r={r:g}, theta={theta:g}); "
            "obliquity of a vanishing current is undefined"
        )
    return FieldPoint(
        r=r,
        theta=theta,
        psi_in=psi_in,
        psi_sc=psi_sc,
        psi=psi,
        j_in=(jin_r, jin_t),
        j_sc=(jsc_r, jsc_t),
        j=(j_r, j_t),
        gamma_sc=math.atan2(jsc_t, jsc_r),
    )


def outgoing_flux(phases: PhaseShiftSet, r: float, theta: float) -> OutgoingFlux:
    """Current of the outgoing wave by itself and its angle from radial.

    This drops the interference with the incident wave, which is the field
    whose level surfaces behave like expanding wave fronts: the tilt angle
    decays like 1/kr instead of saturating near -theta/2.  The undefined
    threshold scales with the natural far-zone magnitude k/(kr)^2 so a
    small but healthy current far out is not mistaken for zero.
    """
    k = phases.k
    _, psi_sc, _, _, dsc_dr, dsc_dtheta = _split_fields(phases, r, theta)
    j_r, j_t = flux_components(psi_sc, dsc_dr, dsc_dtheta, r)
    kr = k * r
    if math.hypot(j_r, j_t) < UNDEFINED_FLUX_FRACTION * k / max(1.0, kr * kr):
        raise UndefinedAngleError(
            f"outgoing current vanishes at (r={r:g}, theta={theta:g}); "
            "tilt angle undefined"
        )
    return OutgoingFlux(j_r=j_r, j_theta=j_t, gamma=math.atan2(j_t, j_r))
