"""Phase shifts for central potentials.

Potentials are described by a PotentialSpec (hard sphere, square well, or a
tabulated radial profile) and produce a PhaseShiftSet: the wavenumber k, a
truncation order l_max, and one phase shift per partial wave.  Hard-sphere
and square-well shifts come from closed-form matching; anything else goes
through a Numerov integration of the radial equation

    u_l'' = [l(l+1)/r^2 + V(r) - k^2] u_l,    u_l = r R_l,

in units where hbar = m = 1 (energies are k^2, lengths are 1/k).  Phase
shifts are reported on the tangent-matched branch (-pi/2, pi/2] modulo pi.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError
from .specfun import (
    MAX_ORDER,
    _check_order,
    sph_bessel_j_table,
    sph_neumann_table,
)

_IPOW = (1 + 0j, 1j, -1 + 0j, -1j)

HARD_SPHERE = "hard-sphere"
SQUARE_WELL = "square-well"
TABULATED = "tabulated"


def default_l_max(k: float, r_c: float) -> int:
    """Truncation order ceil(k r_c) + 20 used when none is requested."""
    return math.ceil(k * r_c) + 20


@dataclass(frozen=True)
class PhaseShiftSet:
    """Phase shifts delta_0 .. delta_{l_max} at a fixed wavenumber."""

    k: float
    l_max: int
    delta: np.ndarray

    def __post_init__(self) -> None:
        if not (isinstance(self.k, (int, float)) and math.isfinite(self.k) and self.k > 0):
            raise DomainError(f"wavenumber must be positive and finite, got {self.k}")
        object.__setattr__(self, "delta", np.asarray(self.delta, dtype=float))
        if self.delta.shape != (self.l_max + 1,):
            raise DomainError(
                f"need {self.l_max + 1} phase shifts for l_max={self.l_max}, "
                f"got shape {self.delta.shape}"
            )
        if not np.all(np.isfinite(self.delta)):
            raise DomainError("phase shifts must be finite")


@dataclass(frozen=True)
class RadialCoefficients:
    """Per-l complex coefficients of the exterior radial solution.

    `incoming` multiplies the incoming spherical wave h_l^(2), `outgoing`
    the outgoing one h_l^(1); `amplitude` is the overall complex scale of
    the sine form of the same solution.  outgoing/incoming = e^{2i delta_l}.
    """

    amplitude: np.ndarray
    incoming: np.ndarray
    outgoing: np.ndarray


@dataclass(frozen=True)
class PotentialSpec:
    """A central potential of finite range r_c (V = 0 beyond the cutoff)."""

    kind: str
    radius: float = 0.0
    depth: float = 0.0
    samples: np.ndarray | None = None
    cutoff: float = field(default=0.0)

    def __post_init__(self) -> None:
        if self.kind not in (HARD_SPHERE, SQUARE_WELL, TABULATED):
            raise DomainError(f"unknown potential kind {self.kind!r}")
        if self.kind in (HARD_SPHERE, SQUARE_WELL):
            if not (self.radius > 0 and math.isfinite(self.radius)):
                raise DomainError(f"{self.kind} radius must be positive, got {self.radius}")
            if self.cutoff == 0.0:
                object.__setattr__(self, "cutoff", float(self.radius))
        else:
            s = np.asarray(self.samples, dtype=float)
            if s.ndim != 2 or s.shape[1] != 2 or s.shape[0] < 2:
                raise DomainError("tabulated potential needs an (n, 2) sample array, n >= 2")
            if not np.all(np.isfinite(s)):
                raise DomainError("tabulated potential samples must be finite")
            if not np.all(np.diff(s[:, 0]) > 0):
                raise DomainError("tabulated potential radii must be strictly increasing")
            if s[0, 0] <= 0:
                raise DomainError("tabulated potential radii must be positive")
            object.__setattr__(self, "samples", s)
            if self.cutoff == 0.0:
                object.__setattr__(self, "cutoff", float(s[-1, 0]))
        if not (self.cutoff >= self.radius and self.cutoff > 0):
            raise DomainError(f"cutoff must be positive and >= radius, got {self.cutoff}")

    @classmethod
    def hard_sphere(cls, radius: float) -> "PotentialSpec":
        return cls(kind=HARD_SPHERE, radius=radius)

    @classmethod
    def square_well(cls, radius: float, depth: float) -> "PotentialSpec":
        """Well of depth `depth` (positive = attractive, V = -depth inside)."""
        return cls(kind=SQUARE_WELL, radius=radius, depth=depth)

    @classmethod
    def tabulated(cls, samples, cutoff: float = 0.0) -> "PotentialSpec":
        return cls(kind=TABULATED, samples=np.asarray(samples, dtype=float), cutoff=cutoff)

    @classmethod
    def from_csv(cls, path, cutoff: float = 0.0) -> "PotentialSpec":
        """Load a tabulated potential from a two-column (r, V) CSV with header."""
        rows = []
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or len(header) < 2:
                raise DomainError(f"{path}: expected a two-column CSV with a header row")
            for n, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 2:
                    raise DomainError(f"{path}:{n}: expected two columns, got {len(row)}")
                try:
                    rows.append((float(row[0]), float(row[1])))
                except ValueError as exc:
                    raise DomainError(f"{path}:{n}: {exc}") from exc
        return cls.tabulated(np.array(rows), cutoff=cutoff)

    def value(self, r):
        """Potential value V(r); scalar or array in, matching shape out."""
        r = np.asarray(r, dtype=float)
        if self.kind == HARD_SPHERE:
            out = np.where(r < self.radius, np.inf, 0.0)
        elif self.kind == SQUARE_WELL:
            out = np.where(r < self.radius, -self.depth, 0.0)
        else:
            out = np.where(
                r < self.cutoff,
                np.interp(r, self.samples[:, 0], self.samples[:, 1]),
                0.0,
            )
        return out if out.ndim else float(out)


def _wrap_tangent_branch(angle: float) -> float:
    """Map an angle into (-pi/2, pi/2] modulo pi."""
    while angle > math.pi / 2:
        angle -= math.pi
    while angle <= -math.pi / 2:
        angle += math.pi
    return angle


def _j_and_deriv(l_max: int, x: float) -> tuple[np.ndarray, np.ndarray]:
    j = sph_bessel_j_table(l_max, x)
    jp = np.empty_like(j)
    jp[0] = math.cos(x) / x - j[0] / x
    if l_max >= 1:
        ls = np.arange(1, l_max + 1)
        jp[1:] = j[:-1] - (ls + 1) / x * j[1:]
    return j, jp


def _n_and_deriv(l_max: int, x: float) -> tuple[np.ndarray, np.ndarray]:
    n = sph_neumann_table(l_max, x)
    np_ = np.empty_like(n)
    np_[0] = math.sin(x) / x - n[0] / x
    if l_max >= 1:
        ls = np.arange(1, l_max + 1)
        np_[1:] = n[:-1] - (ls + 1) / x * n[1:]
    return n, np_


def hard_sphere_phases(k: float, a: float, l_max: int | None = None) -> PhaseShiftSet:
    """Phase shifts of an impenetrable sphere: tan(delta_l) = j_l(ka)/n_l(ka)."""
    if not (k > 0 and math.isfinite(k)):
        raise DomainError(f"wavenumber must be positive, got {k}")
    if not (a > 0 and math.isfinite(a)):
        raise DomainError(f"radius must be positive, got {a}")
    if l_max is None:
        l_max = default_l_max(k, a)
    _check_order(l_max)
    x = k * a
    j = sph_bessel_j_table(l_max, x)
    n = sph_neumann_table(l_max, x)
    # atan of the ratio, not atan2 of the pair: for l >> ka the angle sits
    # within rounding of pi and atan2 would collapse the tiny shift to zero.
    delta = np.empty(l_max + 1)
    for l in range(l_max + 1):
        d = math.atan(j[l] / n[l])
        delta[l] = math.pi / 2 if d == -math.pi / 2 else d
    return PhaseShiftSet(k=k, l_max=l_max, delta=delta)


def square_well_phases(k: float, depth: float, a: float, l_max: int | None = None) -> PhaseShiftSet:
    """Closed-form phase shifts of a square well of depth V0 (attractive when positive).

    The interior solution j_l(k'r) with k'^2 = k^2 + V0 is matched to the
    exterior combination of j_l and n_l through continuity of R_l and R_l'
    at r = a; the node-safe cross-multiplied form is used so an interior
    node at the boundary does not divide by zero.
    """
    if not (k > 0 and math.isfinite(k)):
        raise DomainError(f"wavenumber must be positive, got {k}")
    if not (a > 0 and math.isfinite(a)):
        raise DomainError(f"radius must be positive, got {a}")
    kp2 = k * k + depth
    if kp2 <= 0:
        raise DomainError(
            f"k^2 + V0 = {kp2} is not positive; the interior wave is evanescent "
            "(use the Numerov route for barriers stronger than the energy)"
        )
    if l_max is None:
        l_max = default_l_max(k, a)
    _check_order(l_max)
    kp = math.sqrt(kp2)
    ji, jip = _j_and_deriv(l_max, kp * a)
    j, jp = _j_and_deriv(l_max, k * a)
    n, npr = _n_and_deriv(l_max, k * a)
    delta = np.empty(l_max + 1)
    for l in range(l_max + 1):
        num = k * jp[l] * ji[l] - kp * jip[l] * j[l]
        den = k * npr[l] * ji[l] - kp * jip[l] * n[l]
        delta[l] = _wrap_tangent_branch(math.atan2(num, den))
    return PhaseShiftSet(k=k, l_max=l_max, delta=delta)


# Five-point first-derivative stencils on a uniform grid, O(h^4).  Row d
# gives the derivative at node d of the five-node window, in units of 1/(12h).
_D5 = (
    (-25.0, 48.0, -36.0, 16.0, -3.0),
    (-3.0, -10.0, 18.0, -6.0, 1.0),
    (1.0, -8.0, 0.0, 8.0, -1.0),
    (-1.0, 6.0, -18.0, 10.0, 3.0),
    (3.0, -16.0, 36.0, -48.0, 25.0),
)


def _stencil_deriv(u: np.ndarray, first: int, node: int, h: float) -> float:
    """Derivative at window node `node` of the five points u[first:first+5]."""
    w = _D5[node]
    window = u[first : first + 5]
    return float(np.dot(w, window)) / (12.0 * h)


def _numerov_march(u: np.ndarray, g: np.ndarray, start: int, stop: int) -> None:
    """Advance u[i+1] for i in [start, stop) given g = step^2 f / 12.

    Rescales everything computed so far when the solution nears overflow
    (growth through a well) or underflow (decay through a barrier);
    logarithmic derivatives are unaffected by the common factor.
    """
    for i in range(start, stop):
        u[i + 1] = (2.0 * (1.0 + 5.0 * g[i]) * u[i] - (1.0 - g[i - 1]) * u[i - 1]) / (
            1.0 - g[i + 1]
        )
        au = abs(u[i + 1])
        if au > 1e150:
            u[: i + 2] *= 1e-150
        elif 0.0 < au < 1e-150:
            u[: i + 2] *= 1e150


def _require_no_node(u_m: float, window_max: float, l: int, r_m: float) -> None:
    # Log-derivative extraction loses all significance when the radial
    # solution crosses zero at the match radius itself.
    if window_max == 0.0 or abs(u_m) < 1e-12 * window_max:
        raise ConvergenceError(
            f"u_{l} has a node at the match radius r={r_m:g}; shift r_match"
        )


def numerov_phases(
    potential: PotentialSpec,
    k: float,
    l_max: int | None = None,
    r_match: float | None = None,
    step: float | None = None,
) -> PhaseShiftSet:
    """Phase shifts by outward Numerov integration of u_l'' = f(r) u_l.

    Starts from the regular behavior u_l(r_0) = r_0^{l+1} at r_0 = step and
    marches outward with the three-point scheme; delta_l follows from the
    logarithmic derivative L = u_l'/u_l at r_match,

        tan(delta_l) = (k jhat' - L jhat) / (k nhat' - L nhat),

    with Riccati-Bessel functions evaluated at k r_match.  A potential that
    jumps at the cutoff (square well, or a table ending on a nonzero value)
    would cost the scheme three orders of accuracy if marched through
    blindly, so the march is split there: the interior solution is carried
    to the cutoff node, its derivative is taken one-sidedly, and the
    exterior march is restarted from a fifth-order Taylor step.  Everything
    stays fourth order in the step.

    The cutoff and r_match are snapped to the nearest grid node; choose a
    step that divides them for best accuracy.  Hard spheres are not
    integrable (infinite wall); use hard_sphere_phases.
    """
    if potential.kind == HARD_SPHERE:
        raise DomainError("hard sphere has an infinite wall; use hard_sphere_phases")
    if not (k > 0 and math.isfinite(k)):
        raise DomainError(f"wavenumber must be positive, got {k}")
    r_c = potential.cutoff
    if l_max is None:
        l_max = default_l_max(k, r_c)
    _check_order(l_max)
    if r_match is None:
        r_match = r_c
    if r_match < r_c:
        raise DomainError(f"r_match {r_match} lies inside the potential cutoff {r_c}")
    max_step = min(1.0 / (10.0 * k), r_c / 100.0)
    if step is None:
        step = max_step
    if not (0 < step <= max_step):
        raise DomainError(f"step must lie in (0, {max_step:g}], got {step}")

    h = float(step)
    c_idx = round(r_c / h) - 1  # grid node nearest the cutoff
    m_idx = round(r_match / h) - 1  # grid node nearest the match radius
    if m_idx < c_idx:
        m_idx = c_idx
    if c_idx < 6:
        raise DomainError("cutoff spans too few grid points for the derivative stencils")

    # Interior limit of V at the cutoff decides whether the march must be
    # split; a continuous potential integrates straight through.
    if potential.kind == SQUARE_WELL:
        v_edge = -potential.depth
    else:
        v_edge = float(np.interp(r_c, potential.samples[:, 0], potential.samples[:, 1]))
    split = v_edge != 0.0

    if not split:
        n_pts = m_idx + 3
    elif m_idx == c_idx:
        n_pts = c_idx + 1
    else:
        n_pts = max(m_idx + 3, c_idx + 5)
    r = h * np.arange(1, n_pts + 1)
    r_m = r[m_idx]
    if split:
        # v carries the interior limit through the cutoff node; the
        # exterior march uses V = 0 from the cutoff node onward.
        if potential.kind == SQUARE_WELL:
            v = np.where(r <= r[c_idx], -potential.depth, 0.0)
        else:
            v = np.where(
                r <= r[c_idx],
                np.interp(r, potential.samples[:, 0], potential.samples[:, 1]),
                0.0,
            )
    else:
        v = np.asarray(potential.value(r), dtype=float)
    h2_12 = h * h / 12.0

    x_m = k * r_m
    j, jp = _j_and_deriv(l_max, x_m)
    n, npr = _n_and_deriv(l_max, x_m)

    # V near the origin, for the series start below.
    if potential.kind == SQUARE_WELL:
        v_origin = -potential.depth
    else:
        v_origin = float(potential.samples[0, 1])

    delta = np.empty(l_max + 1)
    for l in range(l_max + 1):
        cent = l * (l + 1) / (r * r)
        f = cent + v - k * k
        g = h2_12 * f
        u = np.empty(n_pts)
        # Regular series u = r^{l+1} (1 + c2 r^2 + ...); the bare leading
        # power would seed an O(step^3) irregular admixture for l = 0.
        c2 = (v_origin - k * k) / (4 * l + 6)
        u[0] = r[0] ** (l + 1) * (1.0 + c2 * r[0] * r[0])
        u[1] = r[1] ** (l + 1) * (1.0 + c2 * r[1] * r[1])
        if u[0] == 0.0 or u[1] == 0.0:
            raise ConvergenceError(f"starting value underflows for l={l}; increase the step")
        if split:
            _numerov_march(u, g, 1, c_idx)
            rc = r[c_idx]
            duc = _stencil_deriv(u, c_idx - 4, 4, h)
            if m_idx == c_idx:
                first, node, du = c_idx - 4, 4, duc
            else:
                uc = u[c_idx]
                # Taylor restart across the jump with exterior physics
                # (V = 0): f and its radial derivatives are closed form.
                fr = l * (l + 1) / rc**2 - k * k
                f1 = -2.0 * l * (l + 1) / rc**3
                f2 = 6.0 * l * (l + 1) / rc**4
                f3 = -24.0 * l * (l + 1) / rc**5
                u[c_idx + 1] = (
                    uc
                    + h * duc
                    + h**2 / 2.0 * fr * uc
                    + h**3 / 6.0 * (f1 * uc + fr * duc)
                    + h**4 / 24.0 * ((f2 + fr * fr) * uc + 2.0 * f1 * duc)
                    + h**5 / 120.0 * ((f3 + 4.0 * fr * f1) * uc + (3.0 * f2 + fr * fr) * duc)
                )
                g_out = h2_12 * (cent - k * k)  # entries below c_idx never read
                _numerov_march(u, g_out, c_idx + 1, n_pts - 1)
                if m_idx == c_idx + 1:
                    first, node = c_idx, 1
                else:
                    first, node = m_idx - 2, 2
                du = _stencil_deriv(u, first, node, h)
        else:
            _numerov_march(u, g, 1, n_pts - 1)
            first, node = m_idx - 2, 2
            du = _stencil_deriv(u, first, node, h)
        u_m = u[m_idx]
        window_max = float(np.abs(u[first : first + 5]).max())
        _require_no_node(u_m, window_max, l, r_m)
        jhat = x_m * j[l]
        nhat = x_m * n[l]
        jhat_p = j[l] + x_m * jp[l]
        nhat_p = n[l] + x_m * npr[l]
        # Cross-multiplied by u_m: tan(delta) = (k jhat' - L jhat)/(k nhat' -
        # L nhat) with L = du/u_m, kept division-free so a near-node match
        # radius degrades gracefully instead of blowing up.
        num = k * jhat_p * u_m - du * jhat
        den = k * nhat_p * u_m - du * nhat
        delta[l] = _wrap_tangent_branch(math.atan2(num, den))
    return PhaseShiftSet(k=k, l_max=l_max, delta=delta)


def radial_coefficients(phases: PhaseShiftSet) -> RadialCoefficients:
    """Exterior-solution coefficients fixed by the incident plane wave.

    The incoming part is phase-shift independent, (2l+1) i^l / 2, so the
    scattered modification lives entirely in the outgoing coefficient:
    outgoing/incoming = e^{2i delta_l}.
    """
    ls = np.arange(phases.l_max + 1)
    ipl = np.array([_IPOW[l % 4] for l in ls])
    amp = (2 * ls + 1) * ipl * np.exp(1j * phases.delta)
    inc = amp * np.exp(-1j * phases.delta) / 2.0
    out = amp * np.exp(1j * phases.delta) / 2.0
    return RadialCoefficients(amplitude=amp, incoming=inc, outgoing=out)
