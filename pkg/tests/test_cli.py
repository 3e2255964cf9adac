"""Scenario-runner checks: config validation, table contracts, determinism.

The CLI is exercised through main() with argv lists; a couple of checks
go through the library entry points directly where that is clearer.
"""

import json
import math
from dataclasses import replace

import numpy as np
import pytest

from finitescatter import (
    ConfigError,
    PotentialSpec,
    hard_sphere_phases,
    numerov_phases,
    square_well_phases,
)
from finitescatter.cli import (
    ScenarioConfig,
    compare_asymptotic,
    config_from_dict,
    config_to_dict,
    load_config,
    main,
    run_scenario,
    scenario_phases,
)


def base_config(**overrides):
    data = {
        "potential": {"kind": "hard-sphere", "radius": 1.0},
        "k": 1.0,
        "l_max": 6,
        "r_values": [50.0],
        "theta_grid": {"count": 5, "range": [0.3, 2.8]},
        "outputs": ["phases"],
        "format": "csv",
    }
    data.update(overrides)
    return data


def write_config(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


def data_rows(path):
    return [
        line
        for line in path.read_text().splitlines()
        if line and not line.startswith("#")
    ][1:]


class TestConfigParsing:
    def test_round_trips_through_dict(self, tmp_path):
        config = load_config(write_config(tmp_path, base_config()))
        again = config_from_dict(config_to_dict(config), base_dir=tmp_path)
        assert config_to_dict(again) == config_to_dict(config)

    @pytest.mark.parametrize(
        "mutation",
        [
            {"zarg": 1},
            {"k": -1.0},
            {"k": "fast"},
            {"format": "yaml"},
            {"outputs": []},
            {"outputs": ["phases", "phases"]},
            {"outputs": ["spectrum"]},
            {"r_values": []},
            {"r_values": [1.0, -2.0]},
            {"l_max": True},
            {"l_max": 2.5},
            {"ode_step": math.pi / 400},
            {"theta_grid": {"count": 5, "range": [0.3, 4.0]}},
            {"theta_grid": {"count": 0, "range": [0.3, 2.8]}},
            {"theta_grid": {"count": 5, "range": [0.3, 2.8], "spacing": "log"}},
            {"potential": {"kind": "hard-sphere", "radius": 1.0, "color": "red"}},
            {"potential": {"kind": "soft-sphere", "radius": 1.0}},
            {"potential": {"kind": "square-well", "radius": 1.0}},
        ],
    )
    def test_rejects_bad_documents(self, tmp_path, mutation):
        with pytest.raises(ConfigError):
            load_config(write_config(tmp_path, base_config(**mutation)))

    def test_missing_keys(self, tmp_path):
        data = base_config()
        del data["theta_grid"]
        with pytest.raises(ConfigError, match="theta_grid"):
            load_config(write_config(tmp_path, data))

    def test_invalid_json_names_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"potential": }')
        with pytest.raises(ConfigError, match="invalid JSON"):
            load_config(path)

    def test_defaults(self, tmp_path):
        data = base_config()
        del data["l_max"]
        config = load_config(write_config(tmp_path, data))
        assert config.l_max is None
        assert config.ode_step == pytest.approx(math.pi / 1000)

    def test_outputs_are_canonicalized(self, tmp_path):
        data = base_config(outputs=["sigma-total", "phases"])
        config = load_config(write_config(tmp_path, data))
        assert config.outputs == ("phases", "sigma-total")


class TestPhaseDispatch:
    def test_hard_sphere_closed_form(self, tmp_path):
        config = load_config(write_config(tmp_path, base_config()))
        expected = hard_sphere_phases(1.0, 1.0, l_max=6)
        assert np.array_equal(scenario_phases(config).delta, expected.delta)

    def test_square_well_closed_form(self, tmp_path):
        data = base_config(potential={"kind": "square-well", "radius": 1.0, "depth": 4.0})
        config = load_config(write_config(tmp_path, data))
        expected = square_well_phases(1.0, 4.0, 1.0, l_max=6)
        assert np.array_equal(scenario_phases(config).delta, expected.delta)

    def test_barrier_falls_back_to_integration(self, tmp_path):
        # interior wave evanescent: no closed form, integrate the radial ODE
        data = base_config(potential={"kind": "square-well", "radius": 1.0, "depth": -2.0})
        config = load_config(write_config(tmp_path, data))
        expected = numerov_phases(PotentialSpec.square_well(1.0, -2.0), 1.0, l_max=6)
        assert np.array_equal(scenario_phases(config).delta, expected.delta)

    def test_tabulated_goes_through_integration(self, tmp_path):
        xs = np.linspace(0.05, 3.0, 60)
        pot = tmp_path / "pot.csv"
        pot.write_text("r,V\n" + "".join(f"{x:.6f},{-2.0 * np.exp(-x):.8f}\n" for x in xs))
        data = base_config(potential={"kind": "tabulated", "path": "pot.csv"}, l_max=4)
        config = load_config(write_config(tmp_path, data))
        expected = numerov_phases(PotentialSpec.from_csv(pot), 1.0, l_max=4)
        assert np.array_equal(scenario_phases(config).delta, expected.delta)


class TestRunScenario:
    def test_phases_row_count(self, tmp_path):
        config = load_config(write_config(tmp_path, base_config(l_max=5)))
        run_scenario(config, tmp_path / "out")
        rows = data_rows(tmp_path / "out" / "phases.csv")
        assert len(rows) == 6
        assert rows[0].split(",")[0] == "0"

    def test_s_wave_sigma_rows_identical(self, tmp_path):
        data = base_config(
            l_max=0, outputs=["sigma-total"], r_values=[1.0, 10.0, 1e3, 1e6]
        )
        config = load_config(write_config(tmp_path, data))
        run_scenario(config, tmp_path / "out")
        rows = data_rows(tmp_path / "out" / "sigma-total.csv")
        sigmas = {row.split(",")[1] for row in rows}
        assert len(rows) == 4
        assert len(sigmas) == 1

    def test_column_contracts(self, tmp_path):
        data = base_config(
            outputs=["amplitude", "cross-section", "field-map", "sigma-total", "wavefront"]
        )
        config = load_config(write_config(tmp_path, data))
        run_scenario(config, tmp_path / "out")
        headers = {
            "field-map": "r,theta,re_psi,im_psi,jr_sc,jtheta_sc,gamma_sc",
            "cross-section": "r,theta,dsigma_domega,f_abs2,eta,tan_gamma",
            "wavefront": "theta,r,gamma_sc,K",
            "sigma-total": "R,sigma_t,sigma_t_asymptotic",
            "amplitude": "r,theta,re_f,im_f,abs_f",
        }
        for kind, header in headers.items():
            lines = (tmp_path / "out" / f"{kind}.csv").read_text().splitlines()
            assert lines[0].startswith("# units:")
            assert lines[1] == header

    def test_reruns_are_byte_identical(self, tmp_path):
        data = base_config(outputs=["amplitude", "phases", "wavefront"])
        config = load_config(write_config(tmp_path, data))
        run_scenario(config, tmp_path / "a")
        run_scenario(config, tmp_path / "b")
        for name in ("amplitude.csv", "phases.csv", "wavefront.csv", "run_manifest.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_manifest_config_reruns_identically(self, tmp_path):
        config = load_config(write_config(tmp_path, base_config(outputs=["amplitude"])))
        manifest = run_scenario(config, tmp_path / "a")
        again = config_from_dict(manifest["config"], base_dir=tmp_path)
        run_scenario(again, tmp_path / "b")
        assert (tmp_path / "a" / "amplitude.csv").read_bytes() == (
            tmp_path / "b" / "amplitude.csv"
        ).read_bytes()

    def test_manifest_records_hashes_and_series(self, tmp_path):
        config = load_config(write_config(tmp_path, base_config(outputs=["amplitude"])))
        manifest = run_scenario(config, tmp_path / "out")
        import hashlib

        written = tmp_path / "out" / "amplitude.csv"
        assert manifest["outputs"]["amplitude.csv"] == hashlib.sha256(
            written.read_bytes()
        ).hexdigest()
        assert manifest["series"]["l_max_eff"] == 6
        assert manifest["series"]["tail_estimate"] > 0.0
        assert manifest["tool"]["name"] == "finitescatter"

    def test_values_round_trip_at_full_precision(self, tmp_path):
        from finitescatter import amplitude_finite

        config = load_config(write_config(tmp_path, base_config(outputs=["amplitude"])))
        run_scenario(config, tmp_path / "out")
        phases = scenario_phases(config)
        for row in data_rows(tmp_path / "out" / "amplitude.csv"):
            r, theta, re_f, im_f, _ = (float(v) for v in row.split(","))
            value = amplitude_finite(phases, r, theta)
            assert value.real == re_f and value.imag == im_f

    def test_json_format_document(self, tmp_path):
        data = base_config(outputs=["cross-section"], format="json")
        config = load_config(write_config(tmp_path, data))
        run_scenario(config, tmp_path / "out")
        doc = json.loads((tmp_path / "out" / "cross-section.json").read_text())
        assert doc["columns"] == ["r", "theta", "dsigma_domega", "f_abs2", "eta", "tan_gamma"]
        assert len(doc["rows"]) == 5
        assert "units" in doc


class TestExitCodes:
    def test_success(self, tmp_path, capsys):
        path = write_config(tmp_path, base_config())
        assert main(["phases", "--config", str(path), "--out", str(tmp_path / "o")]) == 0

    def test_config_error_is_2(self, tmp_path, capsys):
        path = write_config(tmp_path, base_config(zarg=1))
        assert main(["phases", "--config", str(path), "--out", str(tmp_path / "o")]) == 2
        assert "config error" in capsys.readouterr().err

    def test_missing_file_is_2(self, tmp_path, capsys):
        missing = tmp_path / "nope.json"
        assert main(["phases", "--config", str(missing), "--out", str(tmp_path / "o")]) == 2

    def test_numerical_error_is_3_with_location(self, tmp_path, capsys):
        path = write_config(tmp_path, base_config(outputs=["amplitude"], r_values=[0.05]))
        assert main(["amplitude", "--config", str(path), "--out", str(tmp_path / "o")]) == 3
        err = capsys.readouterr().err
        assert "numerical error" in err and "r=0.05" in err

    def test_format_flag_overrides_config(self, tmp_path):
        path = write_config(tmp_path, base_config())
        assert (
            main(
                [
                    "phases",
                    "--config",
                    str(path),
                    "--out",
                    str(tmp_path / "o"),
                    "--format",
                    "json",
                ]
            )
            == 0
        )
        assert (tmp_path / "o" / "phases.json").exists()


class TestCompareAsymptotic:
    def fixture_config(self, tmp_path, **overrides):
        data = base_config(
            r_values=[1e2, 1e3, 1e4],
            theta_grid={"count": 9, "range": [0.2, 2.0]},
            ode_step=math.pi / 500,
            **overrides,
        )
        return load_config(write_config(tmp_path, data))

    def test_requires_two_decades(self, tmp_path):
        config = self.fixture_config(tmp_path)
        narrow = replace(config, r_values=(10.0, 50.0))
        with pytest.raises(ConfigError):
            compare_asymptotic(narrow, tmp_path / "out")

    def test_deviation_columns_decrease(self, tmp_path):
        config = self.fixture_config(tmp_path)
        compare_asymptotic(config, tmp_path / "out")
        rows = [
            [float(v) for v in line.split(",")]
            for line in data_rows(tmp_path / "out" / "compare-asymptotic.csv")
        ]
        for col in (1, 3, 4):
            values = [row[col] for row in rows]
            assert all(a > b for a, b in zip(values, values[1:]))

    def test_sigma_deviation_inverse_square(self, tmp_path):
        config = self.fixture_config(tmp_path)
        manifest = compare_asymptotic(config, tmp_path / "out")
        rows = [
            [float(v) for v in line.split(",")]
            for line in data_rows(tmp_path / "out" / "compare-asymptotic.csv")
        ]
        assert rows[0][3] / rows[1][3] == pytest.approx(100.0, rel=0.3)
        assert manifest["fits"]["sigma_ratio_deviation"] == pytest.approx(-2.0, abs=0.1)

    def test_s_wave_amplitude_deviation_identically_zero(self, tmp_path):
        config = self.fixture_config(tmp_path, l_max=0)
        manifest = compare_asymptotic(config, tmp_path / "out")
        rows = [
            line.split(",")
            for line in data_rows(tmp_path / "out" / "compare-asymptotic.csv")
        ]
        assert all(row[1] == "0" for row in rows)
        assert manifest["fits"]["amp_deviation"] is None
        comments = [
            line
            for line in (tmp_path / "out" / "compare-asymptotic.csv")
            .read_text()
            .splitlines()
            if line.startswith("# fit")
        ]
        assert any("amp_deviation exponent: none" in line for line in comments)

    def test_cli_entry(self, tmp_path):
        data = base_config(
            r_values=[1e2, 1e3, 1e4],
            theta_grid={"count": 9, "range": [0.2, 2.0]},
            ode_step=math.pi / 500,
        )
        path = write_config(tmp_path, data)
        rc = main(
            ["compare-asymptotic", "--config", str(path), "--out", str(tmp_path / "o")]
        )
        assert rc == 0
        assert (tmp_path / "o" / "compare-asymptotic.csv").exists()
