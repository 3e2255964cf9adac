"""Cross sections measured at finite distance and their far-zone limits.

At finite radius the angular density of scattered flux is not |f|^2: the
amplitude's radial dependence adds a correction eta(r, theta), and the
scattered current is tilted off radial, stretching the solid-angle patch
a detector actually subtends by 1/cos^2 of that tilt.  Both effects die
off as the observer recedes and the textbook quantities reappear.

The total cross section keeps a closed form: each partial wave's |f|^2
integral picks up the squared modulus of its polynomial factor, so
sigma_t(R) is the usual sum of (2l+1) sin^2(delta_l) terms, each weighted
by |y_l(i/kR)|^2 >= 1.  Distant observers always infer a smaller total.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .amplitude import amplitude_derivatives, expansion_coefficients
from .errors import DomainError, SingularObliquityError
from .field import _split_fields, flux_components
from .phases import PhaseShiftSet
from .specfun import bessel_poly, legendre_table

# |j_r^sc| below k times this fraction (scaled down by (kr)^2 far out,
# where even a healthy current is that small) makes the 1/cos^2 stretch
# meaningless: the detector normal sees no scattered current.
SINGULAR_FLUX_FRACTION = 1e-12


@dataclass(frozen=True)
class CrossSectionSample:
    """Differential cross section at one angle with its ingredients.

    dsigma_domega = (f_abs2 + eta) * (1 + tan_gamma^2); the factors are
    stored so callers can see how much of the finite-distance value is
    amplitude correction versus current tilt.
    """

    theta: float
    dsigma_domega: float
    f_abs2: float
    eta: float
    tan_gamma: float

    def __post_init__(self) -> None:
        rebuilt = (self.f_abs2 + self.eta) * (1.0 + self.tan_gamma**2)
        scale = max(abs(self.dsigma_domega), abs(rebuilt), 1e-300)
        if abs(self.dsigma_domega - rebuilt) > 1e-9 * scale:
            raise DomainError("cross-section sample fields are inconsistent")


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1].

    Newton iteration on P_n from the Chebyshev-like initial guess; each
    root is polished until the update falls under 1e-14.  Weights follow
    from the derivative at the root.
    """
    if n < 1:
        raise DomainError(f"quadrature needs at least one node, got {n}")
    nodes = np.empty(n)
    weights = np.empty(n)
    for i in range(n):
        x = math.cos(math.pi * (i + 0.75) / (n + 0.5))
        for _ in range(100):
            p = legendre_table(n, x)
            # (x^2 - 1) P_n' = n (x P_n - P_{n-1})
            deriv = n * (x * p[n] - p[n - 1]) / (x * x - 1.0)
            step = p[n] / deriv
            x -= step
            if abs(step) <= 1e-14:
                break
        p = legendre_table(n, x)
        deriv = n * (x * p[n] - p[n - 1]) / (x * x - 1.0)
        nodes[i] = x
        weights[i] = 2.0 / ((1.0 - x * x) * deriv * deriv)
    order = np.argsort(nodes)
    return nodes[order], weights[order]


def eta_correction(phases: PhaseShiftSet, r: float, theta: float) -> float:
    """Finite-distance correction to |f|^2 in the scattered radial current.

    r^2 j_r^sc / k = |f|^2 + eta exactly, where j_r^sc is the radial part
    of j - j_in.  The first piece comes from the amplitude's own radial
    variation, the rest from interference with the incident wave; both
    vanish as r grows.
    """
    k = phases.k
    value, d_r, _ = amplitude_derivatives(phases, r, theta)
    cos_t = math.cos(theta)
    cross = cmath.exp(1j * k * r * (1.0 - cos_t)) * (
        (1j * k * r * (1.0 + cos_t) - 1.0) * value + r * d_r
    )
    return (value.conjugate() * d_r + cross).imag / k


def differential_cross_section(
    phases: PhaseShiftSet, r: float, theta: float
) -> CrossSectionSample:
    """Angular flux density per unit incident flux, at radius r.

    Raises SingularObliquityError where the scattered current runs along
    the detector sphere (radial component too small): the tilt factor
    1/cos^2 then amplifies nothing but noise.
    """
    k = phases.k
    value, _, _ = amplitude_derivatives(phases, r, theta)
    eta = eta_correction(phases, r, theta)
    psi_in, psi_sc, din_dr, din_dtheta, dsc_dr, dsc_dtheta = _split_fields(
        phases, r, theta
    )
    psi = psi_in + psi_sc
    j_r, j_t = flux_components(psi, din_dr + dsc_dr, din_dtheta + dsc_dtheta, r)
    jin_r, jin_t = flux_components(psi_in, din_dr, din_dtheta, r)
    jsc_r = j_r - jin_r
    jsc_t = j_t - jin_t
    kr = k * r
    if abs(jsc_r) < SINGULAR_FLUX_FRACTION * k / max(1.0, kr * kr):
        raise SingularObliquityError(
            f"radial scattered current ~ {jsc_r:.3e} at (r={r:g}, theta={theta:g}); "
            "differential cross section undefined where the current runs tangent"
        )
    tan_gamma = jsc_t / jsc_r
    f_abs2 = abs(value) ** 2
    return CrossSectionSample(
        theta=theta,
        dsigma_domega=(f_abs2 + eta) * (1.0 + tan_gamma**2),
        f_abs2=f_abs2,
        eta=eta,
        tan_gamma=tan_gamma,
    )


def sigma_total(phases: PhaseShiftSet, R: float) -> float:
    """Total cross section inferred from scattered flux through radius R.

    (4 pi / k^2) sum_l (2l+1) sin^2(delta_l) |y_l(i/kR)|^2, summed in
    ascending l.  Every polynomial weight is >= 1, so this decreases
    monotonically toward the far-zone value as R grows.
    """
    kr = phases.k * R
    if not (kr > 0.0 and math.isfinite(kr)):
        raise DomainError(f"need k*R > 0, got {kr}")
    z = 1j / kr
    total = 0.0
    for l in range(phases.l_max + 1):
        s = math.sin(phases.delta[l])
        total += (2 * l + 1) * s * s * abs(bessel_poly(l, z)) ** 2
    return 4.0 * math.pi / (phases.k * phases.k) * total


def sigma_total_asymptotic(phases: PhaseShiftSet) -> float:
    """Conventional total cross section (observer at infinity)."""
    total = 0.0
    for l in range(phases.l_max + 1):
        s = math.sin(phases.delta[l])
        total += (2 * l + 1) * s * s
    return 4.0 * math.pi / (phases.k * phases.k) * total


def forward_amplitude_asymptotic(phases: PhaseShiftSet) -> complex:
    """f_inf(0), whose imaginary part fixes sigma_t through flux balance."""
    total = 0.0 + 0.0j
    for term in expansion_coefficients(phases, 0.0):
        total += term
    return total
