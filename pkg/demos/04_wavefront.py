"""Tracing the outgoing wave front.

A surface of constant phase is swept out by marching dr/dtheta =
-r tan(gamma) from the forward axis, with gamma the local obliquity of
the scattered wave's current.  Far out the front is a sphere: the left
panel shows the traced radius and Gaussian curvature settling onto
r = R and K = 1/r^2 as kR grows.  Close to a sharp resonance the front
is visibly deformed (right panel, two partial waves driven hard).
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from finitescatter import (
    PhaseShiftSet,
    gaussian_curvature,
    hard_sphere_phases,
    trace_generatrix,
)


def main() -> None:
    phases = hard_sphere_phases(1.0, 1.0, l_max=12)

    fig, (left, right) = plt.subplots(1, 2, figsize=(9.6, 4.2))
    for kR in (1e2, 1e3, 1e4):
        curve = gaussian_curvature(
            trace_generatrix(phases, kR, math.pi - 0.1, step=math.pi / 600)
        )
        thetas = [s.theta for s in curve.samples]
        radial = [s.r / kR - 1.0 for s in curve.samples]
        left.plot(thetas, np.abs(radial), label=f"kR = {kR:.0e}")
    left.set_yscale("log")
    left.set_xlabel("theta  [rad]")
    left.set_ylabel("|r(theta)/R - 1|")
    left.legend()

    # two-wave field driven near resonance; anchor a little off the
    # amplitude zero so the march stays defined
    sharp = PhaseShiftSet(k=1.0, l_max=1, delta=np.array([2.3, math.pi / 2]))
    curve = trace_generatrix(sharp, 5.0, 2.5, step=math.pi / 1000)
    thetas = np.array([s.theta for s in curve.samples])
    radii = np.array([s.r for s in curve.samples])
    right.plot(radii * np.sin(thetas), radii * np.cos(thetas), label="traced front")
    circle = np.linspace(0.0, 2.5, 200)
    right.plot(5.0 * np.sin(circle), 5.0 * np.cos(circle), "k--", label="sphere r = R")
    right.set_aspect("equal")
    right.set_xlabel("r sin(theta)  [1/k]")
    right.set_ylabel("r cos(theta)  [1/k]")
    right.legend()

    fig.tight_layout()
    out = Path(__file__).resolve().parent / "04_wavefront.png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
