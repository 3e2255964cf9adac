"""Scattering observables at finite target-observer distance.

Partial-wave scattering without the usual far-zone approximation: the
outgoing radial waves keep their exact Bessel-polynomial factors, so
amplitudes, fluxes, cross sections and wave-front geometry all acquire
distance-dependent corrections that vanish as the observer recedes.
"""

from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    OrderTooLargeError,
    SeriesDivergenceError,
    SingularObliquityError,
    StepInstabilityError,
    UndefinedAngleError,
)
from .specfun import (
    MAX_ORDER,
    ModulusArgument,
    bessel_poly,
    bessel_poly_deriv,
    legendre,
    legendre_deriv_table,
    legendre_table,
    modulus_argument,
    sph_bessel_j,
    sph_bessel_j_table,
    sph_hankel,
    sph_neumann,
    sph_neumann_table,
)
from .phases import (
    PhaseShiftSet,
    PotentialSpec,
    RadialCoefficients,
    default_l_max,
    hard_sphere_phases,
    numerov_phases,
    radial_coefficients,
    square_well_phases,
)
from .amplitude import (
    AmplitudeSeries,
    amplitude_asymptotic,
    amplitude_derivatives,
    amplitude_finite,
    amplitude_series,
    expansion_coefficients,
    plane_wave_exact,
)
from .field import (
    FieldPoint,
    OutgoingFlux,
    flux,
    flux_components,
    outgoing_flux,
    wavefunction,
)
from .observables import (
    CrossSectionSample,
    differential_cross_section,
    eta_correction,
    forward_amplitude_asymptotic,
    gauss_legendre,
    sigma_total,
    sigma_total_asymptotic,
)
from .wavefront import (
    WavefrontCurve,
    WavefrontSample,
    gaussian_curvature,
    sphericity_deviation,
    trace_generatrix,
)

__version__ = "0.1.0"
