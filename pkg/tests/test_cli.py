import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from decoplate import config, sweep
from decoplate.cli import main
from decoplate.config import headline_default
from decoplate.errors import ConfigError, DomainError
from decoplate.output import read_csv

MINIMAL = {"particle": {"preset": "electron"}}


@pytest.fixture
def write_config(tmp_path):
    def write(obj, name="config.json"):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj), encoding="utf-8")
        return str(path)
    return write


def effective_config(stderr):
    line = next(l for l in stderr.splitlines() if l.startswith("effective config: "))
    return json.loads(line.removeprefix("effective config: "))


def test_minimal_config_gets_defaults():
    cfg = config.normalize(MINIMAL)
    assert cfg["particle"] == {"preset": "electron", "speed_m_per_s": 1000.0}
    assert cfg["plate"]["resistivity_ohm_m"] == 1e-6
    assert cfg["plate"]["length_m"] == 1e-2
    assert cfg["plate"]["scaling_exponent"] == 3
    assert cfg["environment"]["temperature_K"] == 300.0
    assert cfg["geometry"]["z_m"] == 1e-4
    assert cfg["geometry"]["slit_separation_m"] == 1e-4
    assert cfg["geometry"]["n_samples"] == 2001
    assert cfg["profile"]["kind"] == "quadratic"
    assert cfg["sweep"]["z_count"] == cfg["sweep"]["dx_count"] == 25


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError, match="duplicate"):
        config.parse('{"particle": {"preset": "electron", "preset": "proton"}}')


def test_charge_in_units_of_e():
    cfg = config.normalize({"particle": {"custom": {"mass_kg": 1e-26, "charge_e": 2}}})
    assert config.particle_from_config(cfg).charge.value == 2 * 1.602176634e-19


@pytest.mark.parametrize("raw, key", [
    ({"particle": {"preset": "electron"}, "plate": {"colour": 1}}, "plate.colour"),
    ({"particle": {"preset": "electron"}, "extra": {}}, "extra"),
    ({"particle": {"preset": "muon"}}, "particle.preset"),
    ({"particle": {"custom": {"mass_kg": 1e-30}}}, "charge"),
    ({"particle": {"preset": "electron"}, "profile": {"kind": "saturating"}}, "profile.correlation_length_m"),
    ({"particle": {"preset": "electron"}, "plate": {"scaling_exponent": 4}}, "plate.reference_height_m"),
    ({"particle": {"preset": "electron"}, "geometry": {"n_samples": 20.5}}, "geometry.n_samples"),
    ({"particle": {"preset": "electron"}, "environment": {"temperature_K": "hot"}}, "environment.temperature_K"),
    ({}, "particle"),
])
def test_schema_errors_name_the_key(raw, key):
    with pytest.raises(ConfigError, match=key.replace(".", r"\.")):
        config.normalize(raw)


@pytest.mark.parametrize("section, key", [
    ("environment", "temperature_K"),
    ("plate", "resistivity_ohm_m"),
    ("plate", "length_m"),
    ("geometry", "z_m"),
    ("geometry", "slit_separation_m"),
])
def test_non_physical_values_are_domain_errors(section, key):
    with pytest.raises(DomainError, match=f"{section}.{key}"):
        config.normalize({"particle": {"preset": "electron"}, section: {key: -5}})


def test_round_trip_of_effective_config():
    cfg = config.normalize({"particle": {"custom": {"mass_kg": 2e-26, "charge_e": 1}},
                            "profile": {"kind": "saturating", "correlation_length_m": 1e-5},
                            "plate": {"scaling_exponent": 4, "reference_height_m": 1e-4,
                                      "reference_tau_r_s": 10.0}})
    assert config.parse(config.dumps(cfg)) == cfg


def test_timescales_headline_numbers(write_config, capsys):
    assert main(["timescales", "--config", write_config(MINIMAL)]) == 0
    out, err = capsys.readouterr()
    report = json.loads(out)
    assert list(report) == ["p_joule_w", "tau_r_s", "lambda_db_m", "tau_d_s", "t_flight_s", "d_magnitude"]
    assert abs(report["tau_d_s"] - 1.04e-5) <= 1e-7
    assert config.normalize(effective_config(err)) == config.normalize(MINIMAL)


def test_timescales_overrides(write_config, capsys):
    assert main(["timescales", "--config", write_config(MINIMAL), "--z", "1e-3", "--dx", "0"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["d_magnitude"] == 1.0
    assert report["tau_d_s"] is None
    assert report["tau_r_s"] == pytest.approx(1783.766746845822e3, rel=1e-12)


def test_timescales_insulator_has_null_joule(write_config, capsys):
    cfg = {"particle": {"preset": "electron"},
           "plate": {"scaling_exponent": 4, "reference_height_m": 1e-4, "reference_tau_r_s": 1783.766746845822}}
    assert main(["timescales", "--config", write_config(cfg)]) == 0
    assert json.loads(capsys.readouterr().out)["p_joule_w"] is None


def test_negative_temperature_exit_3(write_config, capsys):
    path = write_config({"particle": {"preset": "electron"}, "environment": {"temperature_K": -5}})
    assert main(["timescales", "--config", path]) == 3
    assert "environment.temperature_K" in capsys.readouterr().err


@pytest.mark.parametrize("text", ['{"particle": {"preset": "electron"}, "plate": {"x": 1}}', "{not json", "[]",
                                  '{"particle": {"preset": "electron"}, "environment": {"temperature_K": NaN}}'])
def test_schema_errors_exit_2(write_config, capsys, text):
    assert main(["timescales", "--config", write_config(text)]) == 2


def test_missing_config_file_exit_2(tmp_path):
    assert main(["timescales", "--config", str(tmp_path / "nope.json")]) == 2


def test_crossing(write_config, capsys):
    assert main(["crossing", "--config", write_config(MINIMAL)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert list(out) == ["dx_m", "z_star_m"]
    assert out["z_star_m"] == pytest.approx(9.876986695651208e-05, rel=1e-12)


def test_pattern_csv_and_svg(write_config, tmp_path, capsys):
    out, svg = tmp_path / "p.csv", tmp_path / "p.svg"
    assert main(["pattern", "--config", write_config(MINIMAL), "--out", str(out), "--svg", str(svg)]) == 0
    text = out.read_text()
    assert text.splitlines()[0] == "q_screen_m,probability_density"
    assert "\r" not in text and '"' not in text
    header, data = read_csv(out)
    assert data.shape == (2001, 2)
    assert data[1000, 0] == 0.0
    assert data[1000, 1] == pytest.approx(1 + 0.3815367451186197, rel=1e-12)
    root = ET.fromstring(svg.read_text())
    assert root.tag.endswith("svg")
    assert "href" not in svg.read_text()


def test_pattern_is_byte_identical_across_runs(write_config, tmp_path, capsys):
    path = write_config(MINIMAL)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["pattern", "--config", path, "--out", str(a)])
    main(["pattern", "--config", path, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_csv_values_round_trip_exactly(write_config, tmp_path, capsys):
    out = tmp_path / "s.csv"
    cfg = {"particle": {"preset": "electron"}, "sweep": {"z_count": 4, "dx_count": 3}}
    assert main(["sweep", "--config", write_config(cfg), "--out", str(out)]) == 0
    header, data = read_csv(out)
    assert tuple(header) == sweep.COLUMNS
    grid = sweep.SweepGrid.spaced(headline_default(), 1e-5, 1e-3, 4, 1e-6, 1e-3, 3)
    expected = np.array([r.values() for r in sweep.run_sweep(grid).rows])
    assert np.array_equal(data, expected)


def test_sweep_with_crossover_and_workers(write_config, tmp_path, capsys):
    path = write_config(MINIMAL)
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    assert main(["sweep", "--config", path, "--out", str(a), "--crossover", str(c)]) == 0
    assert main(["sweep", "--config", path, "--out", str(b), "--workers", "4"]) == 0
    assert a.read_bytes() == b.read_bytes()
    header, data = read_csv(c)
    assert header == ["dx_m", "z_star_m"]
    assert data.shape == (25, 2)
    assert len(a.read_text().splitlines()) == 626


def test_oracle_command(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["oracle", "--sites", "3", "--steps", "3", "--profile", "quadratic", "--seed", "7",
                 "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert list(rep) == ["max_abs_entry_diff", "trace_error", "min_eigenvalue", "g", "k", "seed"]
    assert rep["max_abs_entry_diff"] <= 1e-10
    assert (rep["g"], rep["k"], rep["seed"]) == (3, 3, 7)


def test_oracle_size_guard_exit_5(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["oracle", "--sites", "10", "--steps", "9", "--profile", "none", "--out", str(out)]) == 5
    assert "1e+09" in capsys.readouterr().err


def test_bad_arguments_exit_2(capsys):
    assert main(["oracle", "--sites", "3"]) == 2
    assert main(["nonsense"]) == 2


def test_selftest_command(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 10
    assert "10/10 criteria passed" in out
