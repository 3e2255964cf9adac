"""How the amplitude seen by a detector depends on where the detector is.

Each partial wave carries a polynomial factor in 1/(kr) that only dies
off once the observer is many wavelengths out.  Left: the angular
pattern |f(r, theta)| at a few radii against the limiting pattern.
Right: the worst-case angular deviation from the limit, falling off as
1/(kr).
"""

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from finitescatter import amplitude_asymptotic, amplitude_finite, hard_sphere_phases


def main() -> None:
    phases = hard_sphere_phases(1.0, 1.0, l_max=12)
    thetas = np.linspace(0.0, math.pi, 361)
    limit = np.array([amplitude_asymptotic(phases, t) for t in thetas])

    fig, (left, right) = plt.subplots(1, 2, figsize=(9.6, 4.0))
    for kr in (5.0, 20.0, 100.0):
        values = np.array([amplitude_finite(phases, kr, t) for t in thetas])
        left.plot(thetas, np.abs(values), label=f"kr = {kr:g}")
    left.plot(thetas, np.abs(limit), "k--", label="limit")
    left.set_xlabel("theta  [rad]")
    left.set_ylabel("|f(r, theta)|  [a]")
    left.legend()

    radii = np.logspace(1, 5, 17)
    deviation = [
        max(
            abs(amplitude_finite(phases, r, t) - f_inf)
            for t, f_inf in zip(thetas[::8], limit[::8])
        )
        for r in radii
    ]
    right.loglog(radii, deviation, "o-", label="max deviation")
    right.loglog(radii, 0.9 / radii, "k:", label="1/(kr) guide")
    right.set_xlabel("kr")
    right.set_ylabel("max over theta of |f - f_limit|  [a]")
    right.legend()

    fig.tight_layout()
    out = Path(__file__).resolve().parent / "02_finite_distance_amplitude.png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
