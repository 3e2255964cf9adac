"""Cross sections at a detector that is not infinitely far away.

Left: the angular distribution measured at a few radii against the
limiting |f|^2.  The finite-distance correction oscillates with the
interference between the incident and scattered waves, strongest in the
backward cone; averaging the detector radius over one fringe recovers
the limit.  Right: the total cross section integrated over a sphere of
radius R exceeds its limit by exactly the polynomial weights, a pure
1/(kR)^2 effect for this p-wave-dominated fixture.
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from finitescatter import (
    amplitude_asymptotic,
    differential_cross_section,
    hard_sphere_phases,
    sigma_total,
    sigma_total_asymptotic,
)


def main() -> None:
    phases = hard_sphere_phases(1.0, 1.0, l_max=12)
    thetas = np.linspace(0.1, math.pi - 0.02, 300)
    limit = np.array([abs(amplitude_asymptotic(phases, t)) ** 2 for t in thetas])

    fig, (left, right) = plt.subplots(1, 2, figsize=(9.6, 4.0))
    for r in (15.0, 60.0):
        ds = [differential_cross_section(phases, r, t).dsigma_domega for t in thetas]
        left.plot(thetas, ds, lw=0.8, label=f"kr = {r:g}")
    left.plot(thetas, limit, "k--", label="limit |f|^2")
    left.set_yscale("log")
    left.set_xlabel("theta  [rad]")
    left.set_ylabel("dsigma/dOmega  [a^2]")
    left.legend()

    radii = np.logspace(0.5, 4, 15)
    excess = [sigma_total(phases, R) / sigma_total_asymptotic(phases) - 1.0 for R in radii]
    right.loglog(radii, excess, "o-", label="sigma_t(R)/sigma_t - 1")
    right.loglog(radii, 1.6 / radii**2, "k:", label="1/(kR)^2 guide")
    right.set_xlabel("kR")
    right.set_ylabel("relative excess")
    right.legend()

    fig.tight_layout()
    out = Path(__file__).resolve().parent / "05_cross_sections.png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
