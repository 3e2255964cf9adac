"""Wave-front geometry of the outgoing wave.

A wave front is traced as the curve through (r, theta) that stays
orthogonal to the outgoing current: its generatrix obeys
dr/dtheta = -r tan(gamma), with gamma the current's tilt off radial.
Rotating the generatrix about the beam axis gives the full surface, whose
Gaussian curvature follows from r, gamma and dgamma/dtheta alone.  Far
from the scatterer gamma dies like 1/kr and the front turns into a sphere
of curvature 1/r^2; at finite distance both the shape and the curvature
carry the scatterer's signature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import ConvergenceError, DomainError, StepInstabilityError
from .field import outgoing_flux
from .phases import PhaseShiftSet

MAX_STEP = math.pi / 500.0

# |tan gamma| above this aborts the trace: the front is turning back on
# itself faster than a fixed-step march can follow.
TILT_LIMIT = 10.0

# agreement required between the full-step and half-step traces,
# as a fraction of the anchor radius
SELF_CHECK_FRACTION = 1e-8


class WavefrontSample(NamedTuple):
    """One generatrix point; curvature is filled in by gaussian_curvature."""

    theta: float
    r: float
    gamma_sc: float
    K: float | None = None


@dataclass(frozen=True)
class WavefrontCurve:
    """Generatrix of one wave front, anchored at radius R on the beam axis."""

    R: float
    step: float
    samples: tuple[WavefrontSample, ...]

    def __post_init__(self) -> None:
        if not self.samples:
            raise DomainError("wavefront curve needs at least one sample")
        first = self.samples[0]
        if first.theta != 0.0 or first.r != self.R:
            raise DomainError("generatrix must start at (theta=0, r=R)")
        thetas = [s.theta for s in self.samples]
        if any(b <= a for a, b in zip(thetas, thetas[1:])):
            raise DomainError("samples must be ordered by strictly increasing theta")


def _tilt(phases: PhaseShiftSet, r: float, theta: float) -> float:
    gamma = outgoing_flux(phases, r, theta).gamma
    if abs(math.tan(gamma)) > TILT_LIMIT:
        raise StepInstabilityError(
            f"front tilt tan(gamma) = {math.tan(gamma):.3g} at "
            f"(r={r:.6g}, theta={theta:.6g}) exceeds {TILT_LIMIT:g}; "
            "fixed-step tracing cannot follow this front"
        )
    return gamma


def _march(
    phases: PhaseShiftSet, R: float, nodes: list[float]
) -> list[tuple[float, float, float]]:
    """RK4 over the given theta nodes; returns (theta, r, gamma) per node."""

    def slope(theta: float, r: float) -> float:
        return -r * math.tan(_tilt(phases, r, theta))

    out = [(0.0, R, _tilt(phases, R, 0.0))]
    r = R
    for a, b in zip(nodes, nodes[1:]):
        h = b - a
        k1 = slope(a, r)
        k2 = slope(a + 0.5 * h, r + 0.5 * h * k1)
        k3 = slope(a + 0.5 * h, r + 0.5 * h * k2)
        k4 = slope(b, r + h * k3)
        r += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        out.append((b, r, _tilt(phases, r, b)))
    return out


def trace_generatrix(
    phases: PhaseShiftSet,
    R: float,
    theta_end: float,
    step: float = math.pi / 1000.0,
) -> WavefrontCurve:
    """Trace the front through (R, theta=0) out to theta_end.

    Fixed-step RK4 on dr/dtheta = -r tan(gamma), with a final short step
    landing exactly on theta_end.  The whole trace is repeated at half
    the step; if the two disagree anywhere by more than 1e-8 R the fixed
    step is not resolving the front and ConvergenceError is raised.
    """
    if not (R > 0.0 and math.isfinite(R)):
        raise DomainError(f"anchor radius must be positive, got {R}")
    if not (0.0 < step <= MAX_STEP):
        raise DomainError(f"step must lie in (0, pi/500], got {step}")
    if not (0.0 < theta_end <= math.pi - step):
        raise DomainError(
            f"theta_end must lie in (0, pi - step], got {theta_end}"
        )
    nodes = [0.0]
    while nodes[-1] + step < theta_end - 1e-12:
        nodes.append(nodes[-1] + step)
    if nodes[-1] < theta_end:
        nodes.append(theta_end)
    halved = [0.0]
    for a, b in zip(nodes, nodes[1:]):
        halved.append(0.5 * (a + b))
        halved.append(b)
    full = _march(phases, R, nodes)
    fine = _march(phases, R, halved)
    drift = max(
        abs(coarse[1] - fine_pt[1]) for coarse, fine_pt in zip(full, fine[::2])
    )
    if drift > SELF_CHECK_FRACTION * R:
        raise ConvergenceError(
            f"half-step trace drifts by {drift:.3e} (> 1e-8 R = {1e-8 * R:.3e}); "
            "reduce the step"
        )
    samples = tuple(
        WavefrontSample(theta=t, r=r, gamma_sc=g) for (t, r, g) in full
    )
    return WavefrontCurve(R=R, step=step, samples=samples)


def gaussian_curvature(curve: WavefrontCurve) -> WavefrontCurve:
    """Curve with the surface's Gaussian curvature filled in per sample.

    K = (cos^2 gamma / r^2) (1 + dgamma/dtheta) (1 - tan(gamma) cot(theta)),
    with the on-axis limit K = (1 + gamma')(1 - gamma') / R^2.  The
    gamma derivative uses centered differences inside the curve and
    one-sided ones at its ends.
    """
    if len(curve.samples) < 3:
        raise DomainError(
            f"curvature needs at least 3 samples, got {len(curve.samples)}"
        )
    thetas = np.array([s.theta for s in curve.samples])
    gammas = np.array([s.gamma_sc for s in curve.samples])
    dgamma = np.gradient(gammas, thetas)
    annotated = []
    for sample, slope in zip(curve.samples, dgamma):
        if sample.theta == 0.0:
            k_val = (1.0 + slope) * (1.0 - slope) / (sample.r * sample.r)
        else:
            k_val = (
                math.cos(sample.gamma_sc) ** 2
                / (sample.r * sample.r)
                * (1.0 + slope)
                * (1.0 - math.tan(sample.gamma_sc) / math.tan(sample.theta))
            )
        annotated.append(sample._replace(K=k_val))
    return replace(curve, samples=tuple(annotated))


def sphericity_deviation(curve: WavefrontCurve) -> float:
    """Largest fractional departure of the traced front from its anchor sphere."""
    return max(abs(s.r / curve.R - 1.0) for s in curve.samples)
