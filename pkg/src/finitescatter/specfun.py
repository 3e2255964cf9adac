"""Double-precision special functions for partial-wave sums.

The spherical Hankel functions are represented through Bessel polynomials,

    h_l^(1)(x) = e^{i(x - l pi/2)} y_l(i/x) / (i x),
    h_l^(2)(x) = -e^{-i(x - l pi/2)} y_l(-i/x) / (i x),

where y_l is the degree-l Bessel polynomial.  The polar decomposition
y_l(i/x) = M_l e^{i Delta_l} carries every finite-distance correction used
elsewhere in the package: M_l -> 1 and Delta_l -> 0 as x -> infinity.

Spherical Bessel and Neumann functions and Legendre polynomials are computed
by their standard recurrences and serve as the independent route for checking
the polynomial representation.
"""

from __future__ import annotations

import cmath
import math
from typing import NamedTuple

import numpy as np

from .errors import DomainError, OrderTooLargeError

# (l+k)!/(k!(l-k)!) factors overflow double precision near l = 85; the guard
# stays well below that so every intermediate is exactly representable.
MAX_ORDER = 60

_IPOW = (1 + 0j, 1j, -1 + 0j, -1j)  # i**l cycle, exact


def _check_order(l: int) -> None:
    if l < 0:
        raise DomainError(f"order must be nonnegative, got {l}")
    if l > MAX_ORDER:
        raise OrderTooLargeError(
            f"order {l} exceeds the supported maximum {MAX_ORDER}"
        )


class ModulusArgument(NamedTuple):
    """Polar form of a Bessel polynomial value."""

    modulus: float
    argument: float


def bessel_poly(l: int, z: complex) -> complex:
    """Evaluate the Bessel polynomial y_l(z) = sum_k (l+k)!/(k!(l-k)!) (z/2)^k.

    Coefficients are built multiplicatively, term_{k+1} = term_k * z
    * (l+k+1)(l-k) / (2(k+1)), so no factorial is ever formed.
    """
    _check_order(l)
    z = complex(z)
    term = 1 + 0j
    total = term
    for k in range(l):
        term *= z * ((l + k + 1) * (l - k)) / (2 * (k + 1))
        total += term
    if not (math.isfinite(total.real) and math.isfinite(total.imag)):
        raise DomainError(f"y_{l}({z}) overflows double precision")
    return total


def bessel_poly_deriv(l: int, z: complex) -> complex:
    """Derivative dy_l/dz, by the same multiplicative coefficient recurrence."""
    _check_order(l)
    z = complex(z)
    coeff = 1.0
    zpow = 1 + 0j
    total = 0j
    for k in range(1, l + 1):
        coeff *= ((l + k) * (l - k + 1)) / (2 * k)
        total += k * coeff * zpow
        zpow *= z
    if not (math.isfinite(total.real) and math.isfinite(total.imag)):
        raise DomainError(f"y_{l}'({z}) overflows double precision")
    return total


def modulus_argument(l: int, kr: float) -> ModulusArgument:
    """Polar decomposition M_l, Delta_l of y_l(i/kr).

    The argument is the principal value in (-pi, pi].  For l = 0 the result
    is exactly (1, 0).

    Parameters
    ----------
    l : angular momentum order, 0 <= l <= MAX_ORDER
    kr : dimensionless radius, must be positive
    """
    if not (kr > 0):
        raise DomainError(f"kr must be positive, got {kr}")
    y = bessel_poly(l, 1j / kr)
    return ModulusArgument(abs(y), math.atan2(y.imag, y.real))


def sph_bessel_j_table(l_max: int, x: float) -> np.ndarray:
    """Spherical Bessel functions j_0(x) .. j_{l_max}(x).

    Upward recurrence when x >= l_max (stable above the turning point),
    otherwise downward recurrence from order l_max + ceil(sqrt(40 l_max)) + 15
    normalized against the closed-form j_0 (or j_1 when sin x is small and
    j_0 is an ill-conditioned normalizer).
    """
    _check_order(l_max)
    if not (x > 0):
        raise DomainError(f"argument must be positive, got {x}")
    j0 = math.sin(x) / x
    if l_max == 0:
        return np.array([j0])
    j1 = math.sin(x) / x**2 - math.cos(x) / x
    out = np.empty(l_max + 1)
    if x >= l_max:
        out[0], out[1] = j0, j1
        for l in range(1, l_max):
            out[l + 1] = (2 * l + 1) / x * out[l] - out[l - 1]
        return out
    start = l_max + math.ceil(math.sqrt(40.0 * l_max)) + 15
    above = 0.0
    here = 1e-30
    for l in range(start, 0, -1):
        below = (2 * l + 1) / x * here - above
        above, here = here, below
        if l - 1 <= l_max:
            out[l - 1] = here
        if abs(here) > 1e250:
            above *= 1e-250
            here *= 1e-250
            if l - 1 <= l_max:
                out[l - 1 :] *= 1e-250
    scale = j0 / out[0] if abs(j0) >= abs(j1) else j1 / out[1]
    return out * scale


def sph_bessel_j(l: int, x: float) -> float:
    """Spherical Bessel function j_l(x), x > 0."""
    return float(sph_bessel_j_table(l, x)[l])


def sph_neumann_table(l_max: int, x: float) -> np.ndarray:
    """Spherical Neumann functions n_0(x) .. n_{l_max}(x), upward recurrence."""
    _check_order(l_max)
    if not (x > 0):
        raise DomainError(f"argument must be positive, got {x}")
    out = np.empty(l_max + 1)
    out[0] = -math.cos(x) / x
    if l_max >= 1:
        out[1] = -math.cos(x) / x**2 - math.sin(x) / x
    for l in range(1, l_max):
        out[l + 1] = (2 * l + 1) / x * out[l] - out[l - 1]
    if not np.all(np.isfinite(out)):
        raise DomainError(f"n_l({x}) overflows double precision for l <= {l_max}")
    return out


def sph_neumann(l: int, x: float) -> float:
    """Spherical Neumann function n_l(x), x > 0."""
    return float(sph_neumann_table(l, x)[l])


def sph_hankel(l: int, x: float, kind: int) -> complex:
    """Spherical Hankel function h_l^(kind)(x) via the Bessel polynomial.

    kind 1 is outgoing, kind 2 incoming; for real x the two are complex
    conjugates of each other.
    """
    _check_order(l)
    if not (x > 0):
        raise DomainError(f"argument must be positive, got {x}")
    if kind == 1:
        return cmath.exp(1j * (x - l * math.pi / 2)) * bessel_poly(l, 1j / x) / (1j * x)
    if kind == 2:
        return -cmath.exp(-1j * (x - l * math.pi / 2)) * bessel_poly(l, -1j / x) / (1j * x)
    raise DomainError(f"kind must be 1 or 2, got {kind}")


def legendre_table(l_max: int, u: float) -> np.ndarray:
    """Legendre polynomials P_0(u) .. P_{l_max}(u) by the Bonnet recurrence."""
    if l_max < 0:
        raise DomainError(f"order must be nonnegative, got {l_max}")
    if abs(u) > 1:
        raise DomainError(f"argument must lie in [-1, 1], got {u}")
    out = np.empty(l_max + 1)
    out[0] = 1.0
    if l_max >= 1:
        out[1] = u
    for l in range(1, l_max):
        out[l + 1] = ((2 * l + 1) * u * out[l] - l * out[l - 1]) / (l + 1)
    return out


def legendre(l: int, u: float) -> float:
    """Legendre polynomial P_l(u), |u| <= 1."""
    return float(legendre_table(l, u)[l])


def legendre_deriv_table(
    l_max: int, u: float, one_minus_u2: float | None = None
) -> np.ndarray:
    """Derivatives dP_l/du for l = 0 .. l_max.

    Uses (1 - u^2) P_l' = l (P_{l-1} - u P_l); at the endpoints the closed
    form P_l'(+-1) = (+-1)^{l+1} l(l+1)/2 applies.  Callers that know
    u = cos(theta) should pass one_minus_u2 = sin(theta)^2, which avoids the
    cancellation in 1 - u^2 near the poles.
    """
    P = legendre_table(l_max, u)
    ls = np.arange(l_max + 1)
    omu2 = one_minus_u2 if one_minus_u2 is not None else (1.0 - u) * (1.0 + u)
    if omu2 <= 0 or abs(u) == 1.0:
        sign = np.ones(l_max + 1) if u > 0 else (-1.0) ** (ls + 1)
        return sign * ls * (ls + 1) / 2.0
    out = np.empty(l_max + 1)
    out[0] = 0.0
    if l_max >= 1:
        out[1:] = ls[1:] * (P[:-1] - u * P[1:]) / omu2
    return out
