"""Scenario runner: JSON config in, deterministic tables out.

Each subcommand evaluates one observable over the configured grids and
writes a single table (CSV or JSON) plus a run manifest.  Everything is
seed-free and summed in fixed order, so identical configs produce
byte-identical files; the manifest records the config, its hash, series
truncation diagnostics and the hash of every written table.

Exit codes: 0 success, 2 unusable config, 3 a numerical guard fired
during evaluation (the message names the guard and the grid point).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import numbers
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .amplitude import amplitude_asymptotic, amplitude_series
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
from .field import flux
from .observables import (
    differential_cross_section,
    sigma_total,
    sigma_total_asymptotic,
)
from .phases import (
    HARD_SPHERE,
    SQUARE_WELL,
    TABULATED,
    PhaseShiftSet,
    PotentialSpec,
    hard_sphere_phases,
    numerov_phases,
    square_well_phases,
)
from .specfun import MAX_ORDER
from .wavefront import (
    MAX_STEP,
    gaussian_curvature,
    sphericity_deviation,
    trace_generatrix,
)

OUTPUT_KINDS = (
    "amplitude",
    "cross-section",
    "field-map",
    "phases",
    "sigma-total",
    "wavefront",
)
FORMATS = ("csv", "json")

# guard failures during evaluation; ConfigError is deliberately absent
NUMERIC_ERRORS = (
    DomainError,
    OrderTooLargeError,
    SeriesDivergenceError,
    UndefinedAngleError,
    SingularObliquityError,
    StepInstabilityError,
    ConvergenceError,
)

_UNITS = {
    "phases": "l dimensionless; delta_l in radians",
    "amplitude": "r in 1/k units of length; theta in radians; f in length",
    "field-map": "r in length; theta in radians; currents in k/length^2; gamma_sc in radians",
    "cross-section": "r in length; theta in radians; dsigma_domega in length^2/sr",
    "sigma-total": "R in length; cross sections in length^2",
    "wavefront": "theta in radians; r in length; gamma_sc in radians; K in 1/length^2",
    "compare-asymptotic": "r in length; deviations dimensionless; sigma ratio dimensionless",
}


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario: the potential, the grids and the requested tables."""

    potential: PotentialSpec
    k: float
    r_values: tuple[float, ...]
    theta_count: int
    theta_range: tuple[float, float]
    outputs: tuple[str, ...]
    format: str
    l_max: int | None = None
    ode_step: float = math.pi / 1000.0
    potential_input: dict = field(default_factory=dict)


def _check_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {unknown} in {where}")
    missing = sorted(required - set(obj))
    if missing:
        raise ConfigError(f"missing key(s) {missing} in {where}")


def _positive_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    result = float(value)
    if not (result > 0.0 and math.isfinite(result)):
        raise ConfigError(f"{where} must be positive and finite, got {value!r}")
    return result


def _parse_potential(data, base_dir: Path) -> PotentialSpec:
    if not isinstance(data, dict):
        raise ConfigError("'potential' must be an object")
    kind = data.get("kind")
    if kind == "hard-sphere":
        _check_keys(data, {"kind", "radius"}, {"kind", "radius"}, "potential")
        return PotentialSpec.hard_sphere(_positive_number(data["radius"], "potential.radius"))
    if kind == "square-well":
        _check_keys(data, {"kind", "radius", "depth"}, {"kind", "radius", "depth"}, "potential")
        depth = data["depth"]
        if isinstance(depth, bool) or not isinstance(depth, numbers.Real):
            raise ConfigError(f"potential.depth must be a number, got {depth!r}")
        return PotentialSpec.square_well(
            _positive_number(data["radius"], "potential.radius"), float(depth)
        )
    if kind == "tabulated":
        _check_keys(data, {"kind", "path"}, {"kind", "path"}, "potential")
        path = Path(str(data["path"]))
        if not path.is_absolute():
            path = base_dir / path
        return PotentialSpec.from_csv(path)
    raise ConfigError(
        f"potential.kind must be one of hard-sphere, square-well, tabulated; got {kind!r}"
    )


def config_from_dict(data: dict, base_dir: Path | None = None) -> ScenarioConfig:
    """Build a validated ScenarioConfig from a parsed JSON document."""
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    base = base_dir if base_dir is not None else Path(".")
    allowed = {
        "potential",
        "k",
        "l_max",
        "r_values",
        "theta_grid",
        "outputs",
        "format",
        "ode_step",
    }
    required = {"potential", "k", "r_values", "theta_grid", "outputs", "format"}
    _check_keys(data, allowed, required, "config")

    try:
        potential = _parse_potential(data["potential"], base)
    except DomainError as exc:
        raise ConfigError(f"potential: {exc}") from exc
    k = _positive_number(data["k"], "k")

    l_max = data.get("l_max")
    if l_max is not None:
        if isinstance(l_max, bool) or not isinstance(l_max, numbers.Integral):
            raise ConfigError(f"l_max must be an integer, got {l_max!r}")
        l_max = int(l_max)
        if not 0 <= l_max <= MAX_ORDER:
            raise ConfigError(f"l_max must lie in [0, {MAX_ORDER}], got {l_max}")

    raw_r = data["r_values"]
    if not isinstance(raw_r, (list, tuple)) or not raw_r:
        raise ConfigError("r_values must be a non-empty array")
    r_values = tuple(
        _positive_number(v, f"r_values[{i}]") for i, v in enumerate(raw_r)
    )

    grid = data["theta_grid"]
    if not isinstance(grid, dict):
        raise ConfigError("'theta_grid' must be an object")
    _check_keys(grid, {"count", "range"}, {"count", "range"}, "theta_grid")
    count = grid["count"]
    if isinstance(count, bool) or not isinstance(count, numbers.Integral) or count < 1:
        raise ConfigError(f"theta_grid.count must be a positive integer, got {count!r}")
    rng = grid["range"]
    if not isinstance(rng, (list, tuple)) or len(rng) != 2:
        raise ConfigError("theta_grid.range must be a [low, high] pair")
    lo, hi = (float(v) for v in rng)
    if not (0.0 <= lo <= hi <= math.pi):
        raise ConfigError(
            f"theta_grid.range must satisfy 0 <= low <= high <= pi, got {rng!r}"
        )

    raw_outputs = data["outputs"]
    if not isinstance(raw_outputs, (list, tuple)) or not raw_outputs:
        raise ConfigError("outputs must be a non-empty array")
    for kind in raw_outputs:
        if kind not in OUTPUT_KINDS:
            raise ConfigError(
                f"unknown output kind {kind!r}; choose from {list(OUTPUT_KINDS)}"
            )
    if len(set(raw_outputs)) != len(raw_outputs):
        raise ConfigError("outputs contains duplicates")
    outputs = tuple(sorted(raw_outputs))

    fmt = data["format"]
    if fmt not in FORMATS:
        raise ConfigError(f"format must be csv or json, got {fmt!r}")

    ode_step = data.get("ode_step")
    if ode_step is None:
        ode_step = math.pi / 1000.0
    else:
        ode_step = _positive_number(ode_step, "ode_step")
        if ode_step > MAX_STEP:
            raise ConfigError(f"ode_step must be <= pi/500, got {ode_step}")

    potential_input = dict(data["potential"])
    return ScenarioConfig(
        potential=potential,
        k=k,
        r_values=r_values,
        theta_count=int(count),
        theta_range=(lo, hi),
        outputs=outputs,
        format=fmt,
        l_max=l_max,
        ode_step=ode_step,
        potential_input=potential_input,
    )


def load_config(path) -> ScenarioConfig:
    """Read and validate a JSON scenario file."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    return config_from_dict(data, base_dir=p.parent)


def config_to_dict(config: ScenarioConfig) -> dict:
    """Canonical JSON-ready form of a config; reparsing it reproduces the run."""
    return {
        "potential": dict(config.potential_input),
        "k": config.k,
        "l_max": config.l_max,
        "r_values": list(config.r_values),
        "theta_grid": {
            "count": config.theta_count,
            "range": [config.theta_range[0], config.theta_range[1]],
        },
        "outputs": list(config.outputs),
        "format": config.format,
        "ode_step": config.ode_step,
    }


def scenario_phases(config: ScenarioConfig) -> PhaseShiftSet:
    """Phase shifts for the configured potential, closed form where one exists."""
    pot = config.potential
    k = config.k
    if pot.kind == HARD_SPHERE:
        return hard_sphere_phases(k, pot.radius, l_max=config.l_max)
    if pot.kind == SQUARE_WELL:
        if k * k + pot.depth > 0.0:
            return square_well_phases(k, pot.depth, pot.radius, l_max=config.l_max)
        # interior evanescent (barrier above the energy): integrate instead
        return numerov_phases(pot, k, l_max=config.l_max)
    if pot.kind == TABULATED:
        return numerov_phases(pot, k, l_max=config.l_max)
    raise ConfigError(f"no phase route for potential kind {pot.kind!r}")


def _theta_grid(config: ScenarioConfig) -> np.ndarray:
    lo, hi = config.theta_range
    return np.linspace(lo, hi, config.theta_count)


def _annotate(exc: Exception, r: float, theta: float | None):
    where = f"r={r:.17g}" if theta is None else f"r={r:.17g}, theta={theta:.17g}"
    return type(exc)(f"at ({where}): {exc}")


class _SeriesStats:
    """Worst-case truncation diagnostics across every series evaluation."""

    def __init__(self) -> None:
        self.l_max_eff: int | None = None
        self.tail_estimate: float | None = None

    def absorb(self, meta) -> None:
        if self.l_max_eff is None or meta.l_max_eff > self.l_max_eff:
            self.l_max_eff = meta.l_max_eff
        if self.tail_estimate is None or meta.tail_estimate > self.tail_estimate:
            self.tail_estimate = meta.tail_estimate

    def as_dict(self):
        if self.l_max_eff is None:
            return None
        return {"l_max_eff": self.l_max_eff, "tail_estimate": self.tail_estimate}


def _rows_phases(phases: PhaseShiftSet, config, stats):
    return [(l, float(phases.delta[l])) for l in range(phases.l_max + 1)]


def _rows_amplitude(phases, config, stats):
    rows = []
    for r in config.r_values:
        for theta in _theta_grid(config):
            theta = float(theta)
            try:
                value, meta = amplitude_series(phases, r, theta)
            except NUMERIC_ERRORS as exc:
                raise _annotate(exc, r, theta) from exc
            stats.absorb(meta)
            rows.append((r, theta, value.real, value.imag, abs(value)))
    return rows


def _rows_field_map(phases, config, stats):
    rows = []
    for r in config.r_values:
        for theta in _theta_grid(config):
            theta = float(theta)
            try:
                stats.absorb(amplitude_series(phases, r, theta)[1])
                point = flux(phases, r, theta)
            except NUMERIC_ERRORS as exc:
                raise _annotate(exc, r, theta) from exc
            rows.append(
                (
                    r,
                    theta,
                    point.psi.real,
                    point.psi.imag,
                    point.j_sc[0],
                    point.j_sc[1],
                    point.gamma_sc,
                )
            )
    return rows


def _rows_cross_section(phases, config, stats):
    rows = []
    for r in config.r_values:
        for theta in _theta_grid(config):
            theta = float(theta)
            try:
                stats.absorb(amplitude_series(phases, r, theta)[1])
                sample = differential_cross_section(phases, r, theta)
            except NUMERIC_ERRORS as exc:
                raise _annotate(exc, r, theta) from exc
            rows.append(
                (
                    r,
                    theta,
                    sample.dsigma_domega,
                    sample.f_abs2,
                    sample.eta,
                    sample.tan_gamma,
                )
            )
    return rows


def _rows_sigma_total(phases, config, stats):
    asymptotic = sigma_total_asymptotic(phases)
    rows = []
    for r in config.r_values:
        try:
            rows.append((r, sigma_total(phases, r), asymptotic))
        except NUMERIC_ERRORS as exc:
            raise _annotate(exc, r, None) from exc
    return rows


def _trace_theta_end(config: ScenarioConfig) -> float:
    # the generatrix always starts on the axis; the grid's upper edge sets
    # how far around it runs, clamped inside the tracer's domain
    end = min(config.theta_range[1], math.pi - config.ode_step)
    if end <= 0.0:
        raise DomainError(
            f"theta range {config.theta_range} leaves no room to trace a front"
        )
    return end


def _rows_wavefront(phases, config, stats):
    anchor = config.r_values[0]
    try:
        curve = gaussian_curvature(
            trace_generatrix(
                phases, anchor, _trace_theta_end(config), step=config.ode_step
            )
        )
    except NUMERIC_ERRORS as exc:
        raise _annotate(exc, anchor, None) from exc
    return [(s.theta, s.r, s.gamma_sc, s.K) for s in curve.samples]


_BUILDERS = {
    "phases": (_rows_phases, ("l", "delta_l")),
    "amplitude": (_rows_amplitude, ("r", "theta", "re_f", "im_f", "abs_f")),
    "field-map": (
        _rows_field_map,
        ("r", "theta", "re_psi", "im_psi", "jr_sc", "jtheta_sc", "gamma_sc"),
    ),
    "cross-section": (
        _rows_cross_section,
        ("r", "theta", "dsigma_domega", "f_abs2", "eta", "tan_gamma"),
    ),
    "sigma-total": (_rows_sigma_total, ("R", "sigma_t", "sigma_t_asymptotic")),
    "wavefront": (_rows_wavefront, ("theta", "r", "gamma_sc", "K")),
}


def _format_cell(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".17g")


def _json_cell(value):
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return int(value)
    return float(value)


def _write_table(path: Path, kind: str, columns, rows, fmt: str, extra_comments=()):
    if fmt == "csv":
        lines = [f"# units: {_UNITS[kind]}", ",".join(columns)]
        lines.extend(",".join(_format_cell(v) for v in row) for row in rows)
        lines.extend(extra_comments)
        path.write_text("\n".join(lines) + "\n")
    else:
        doc = {
            "columns": list(columns),
            "rows": [[_json_cell(v) for v in row] for row in rows],
            "units": _UNITS[kind],
        }
        for comment in extra_comments:
            doc.setdefault("notes", []).append(comment.lstrip("# "))
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def run_scenario(config: ScenarioConfig, out_dir) -> dict:
    """Evaluate every requested output and write the tables plus manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    phases = scenario_phases(config)
    stats = _SeriesStats()
    written: dict[str, str] = {}
    for kind in config.outputs:
        builder, columns = _BUILDERS[kind]
        rows = builder(phases, config, stats)
        path = out / f"{kind}.{config.format}"
        _write_table(path, kind, columns, rows, config.format)
        written[path.name] = hashlib.sha256(path.read_bytes()).hexdigest()

    canonical = config_to_dict(config)
    blob = json.dumps(canonical, sort_keys=True, separators=(",", ":"))
    manifest = {
        "config": canonical,
        "config_sha256": hashlib.sha256(blob.encode()).hexdigest(),
        "outputs": written,
        "series": stats.as_dict(),
        "tool": {"name": "finitescatter", "version": __version__},
    }
    (out / "run_manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )
    return manifest


def _fit_exponent(r_values, deviations):
    """Slope of log10(deviation) vs log10(r); None when the data touch zero."""
    if any(not (d > 0.0) for d in deviations):
        return None
    slope = np.polyfit(np.log10(r_values), np.log10(deviations), 1)[0]
    return float(slope)


def compare_asymptotic(config: ScenarioConfig, out_dir) -> dict:
    """Convergence-to-infinity table over config.r_values.

    Requires the radii to span at least two decades.  Per radius: the
    worst-angle amplitude deviation from the far limit, the total
    cross-section ratio and its deviation from 1, and the traced front's
    departure from a sphere; plus fitted power-law exponents per column.
    """
    if max(config.r_values) < 100.0 * min(config.r_values):
        raise ConfigError(
            "compare-asymptotic needs r_values spanning at least two decades"
        )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    phases = scenario_phases(config)
    thetas = _theta_grid(config)
    far = {float(t): amplitude_asymptotic(phases, float(t)) for t in thetas}
    sigma_far = sigma_total_asymptotic(phases)
    theta_end = _trace_theta_end(config)

    rows = []
    for r in config.r_values:
        amp_dev = 0.0
        for theta in thetas:
            theta = float(theta)
            try:
                value, _ = amplitude_series(phases, r, theta)
            except NUMERIC_ERRORS as exc:
                raise _annotate(exc, r, theta) from exc
            amp_dev = max(amp_dev, abs(value - far[theta]))
        try:
            ratio = sigma_total(phases, r) / sigma_far
            curve = trace_generatrix(phases, r, theta_end, step=config.ode_step)
        except NUMERIC_ERRORS as exc:
            raise _annotate(exc, r, None) from exc
        rows.append((r, amp_dev, ratio, abs(ratio - 1.0), sphericity_deviation(curve)))

    columns = (
        "r",
        "amp_deviation",
        "sigma_ratio",
        "sigma_ratio_deviation",
        "sphericity_deviation",
    )
    fits = {
        "amp_deviation": _fit_exponent(config.r_values, [row[1] for row in rows]),
        "sigma_ratio_deviation": _fit_exponent(config.r_values, [row[3] for row in rows]),
        "sphericity_deviation": _fit_exponent(config.r_values, [row[4] for row in rows]),
    }
    comments = [
        f"# fit {name} exponent: "
        + ("none" if value is None else format(value, ".17g"))
        for name, value in sorted(fits.items())
    ]
    path = out / f"compare-asymptotic.{config.format}"
    _write_table(path, "compare-asymptotic", columns, rows, config.format, comments)

    canonical = config_to_dict(config)
    blob = json.dumps(canonical, sort_keys=True, separators=(",", ":"))
    manifest = {
        "config": canonical,
        "config_sha256": hashlib.sha256(blob.encode()).hexdigest(),
        "fits": fits,
        "outputs": {path.name: hashlib.sha256(path.read_bytes()).hexdigest()},
        "series": None,
        "tool": {"name": "finitescatter", "version": __version__},
    }
    (out / "run_manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )
    return manifest


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finitescatter",
        description="Finite-distance scattering observables from a JSON scenario.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in OUTPUT_KINDS + ("compare-asymptotic",):
        p = sub.add_parser(name, help=f"write the {name} table")
        p.add_argument("--config", required=True, help="path to the JSON scenario")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument(
            "--format", choices=FORMATS, default=None, help="override config format"
        )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.format is not None:
            config = replace(config, format=args.format)
        if args.command != "compare-asymptotic":
            config = replace(config, outputs=(args.command,))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "compare-asymptotic":
            compare_asymptotic(config, args.out)
        else:
            run_scenario(config, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NUMERIC_ERRORS as exc:
        print(f"numerical error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
