import json
import math

import pytest

from chiralcav import cli
from chiralcav.cli import ConfigError, RunConfig


def run(capsys, *argv):
    status = cli.main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def write_config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def parse_csv(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, l.split(","))) for l in lines[1:]]


def footer(text):
    return dict(l[2:].split("=", 1) for l in text.splitlines() if l.startswith("# "))


def test_config_round_trip(tmp_path):
    data = {"omega0": 1.5, "omega_ab": 0.2, "omega_ba": 0.05, "n_total_max": 4,
            "initial_state": [2, 1], "t_start": 0.5, "t_end": 30.0, "t_samples": 7,
            "outputs": ["mean_NA_closed"], "format": "json",
            "sweep": [[0.1, 0.2], [0.3, 0.3]], "reference_time": 2.0}
    first = cli.load_config(write_config(tmp_path, data))
    second = cli.load_config(write_config(tmp_path, first.to_dict(), "again.json"))
    assert first == second
    assert first.to_dict() == second.to_dict()


def test_default_config_round_trip():
    config = RunConfig()
    assert RunConfig.from_dict(json.loads(json.dumps(config.to_dict()))) == config


@pytest.mark.parametrize("data", [
    {"foo": 1},
    {"t_samples": 1},
    {"t_start": 5.0, "t_end": 1.0},
    {"initial_state": [5, 3], "n_total_max": 6},
    {"format": "xml"},
    {"outputs": ["bogus"]},
    {"omega0": -1.0},
    {"n_total_max": -2},
])
def test_invalid_configs(data):
    with pytest.raises(ConfigError):
        RunConfig.from_dict(data)


def test_config_errors_exit_two(tmp_path, capsys):
    status, out, err = run(capsys, "spectrum", "--config", write_config(tmp_path, {"t_samples": 1}))
    assert status == 2 and out == ""
    assert err.startswith("chiralcav-error: config:")
    assert err.count("\n") == 1
    status, _, err = run(capsys, "spectrum", "--config", str(tmp_path / "missing.json"))
    assert status == 2 and err.startswith("chiralcav-error: config:")


def test_domain_error_exit_two(tmp_path, capsys):
    path = write_config(tmp_path, {"omega_ab": 0.1, "omega_ba": -0.2})
    for command in ("spectrum", "evolve", "verify"):
        status, _, err = run(capsys, command, "--config", path)
        assert status == 2
        assert err.startswith("chiralcav-error: domain:")
        assert "omega_ab * omega_ba > 0" in err


def test_spectrum_defaults(capsys):
    status, out, _ = run(capsys, "spectrum")
    rows = parse_csv(out)
    assert status == 0 and len(rows) == 28
    assert max(float(r["residual"]) for r in rows) <= 1e-10
    assert float(footer(out)["max_residual"]) <= 1e-10


def test_spectrum_vacuum_only(tmp_path, capsys):
    # the default initial state |1,0> does not fit a vacuum-only basis
    path = write_config(tmp_path, {"initial_state": [0, 0]})
    status, out, _ = run(capsys, "spectrum", "--config", path, "--n-max", "0")
    assert status == 0
    rows = parse_csv(out)
    assert len(rows) == 1
    assert (rows[0]["n_alpha"], rows[0]["n_beta"], float(rows[0]["energy"])) == ("0", "0", 1.0)


def test_spectrum_breakdown_flags(tmp_path, capsys):
    path = write_config(tmp_path, {"omega_ab": 1.2, "omega_ba": 1.2})
    _, out, _ = run(capsys, "spectrum", "--config", path)
    flagged = {(r["n_alpha"], r["n_beta"]) for r in parse_csv(out) if r["rwa_flag"] == "breakdown"}
    assert ("6", "0") in flagged
    assert footer(out)["rwa_regime"] == "breakdown"


def test_evolve_reciprocal(tmp_path, capsys):
    path = write_config(tmp_path, {"omega_ab": 0.06, "omega_ba": 0.06})
    _, out, _ = run(capsys, "evolve", "--config", path)
    rows = parse_csv(out)
    assert len(rows) == 33
    for r in rows:
        assert float(r["mean_NA_closed"]) == pytest.approx(math.cos(0.06 * float(r["t"])) ** 2, abs=1e-14)
    assert float(footer(out)["max_closed_numeric_residual"]) <= 1e-12


def test_evolve_vacuum(tmp_path, capsys):
    path = write_config(tmp_path, {"initial_state": [0, 0]})
    _, out, _ = run(capsys, "evolve", "--config", path)
    for r in parse_csv(out):
        for name in ("mean_NA_closed", "mean_NB_closed", "mean_NA_numeric", "mean_NB_numeric",
                     "conservation_residual"):
            assert float(r[name]) == 0


def test_evolve_norm_peak(tmp_path, capsys):
    path = write_config(tmp_path, {"t_end": math.pi / 0.06, "t_samples": 5})
    _, out, _ = run(capsys, "evolve", "--config", path)
    rows = parse_csv(out)
    assert max(float(r["schrodinger_norm"]) for r in rows) == pytest.approx(1.5, abs=1e-12)
    assert float(rows[2]["schrodinger_norm"]) == pytest.approx(1.5, abs=1e-12)
    assert max(abs(float(r["conservation_residual"])) for r in rows) <= 1e-12


def test_evolve_selected_outputs_json(tmp_path, capsys):
    path = write_config(tmp_path, {"outputs": ["schrodinger_norm"], "t_samples": 3})
    _, out, _ = run(capsys, "evolve", "--config", path, "--format", "json")
    payload = json.loads(out)
    assert list(payload["rows"][0]) == ["t", "schrodinger_norm"]
    assert "max_closed_numeric_residual" in payload["summary"]


def test_asymmetry_sweep(tmp_path, capsys):
    path = write_config(tmp_path, {"sweep": [[0.06, 0.06], [0.09, 0.04], [0.04, 0.09], [0.09, -0.04]]})
    status, out, _ = run(capsys, "asymmetry", "--config", path)
    rows = parse_csv(out)
    assert status == 0 and len(rows) == 4
    assert float(rows[0]["db_asymmetry"]) == pytest.approx(0.0, abs=1e-12)
    assert float(rows[1]["amplitude_ratio"]) == 2.25
    assert float(rows[1]["db_asymmetry"]) == pytest.approx(7.044, abs=1e-3)
    assert float(rows[2]["db_asymmetry"]) == pytest.approx(-float(rows[1]["db_asymmetry"]), abs=1e-10)
    assert rows[3]["error"] == "domain" and rows[3]["db_asymmetry"] == "nan"
    assert all(r["error"] == "none" for r in rows[:3])


def test_csv_is_deterministic(tmp_path, capsys):
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    run(capsys, "evolve", "--out", str(first))
    run(capsys, "evolve", "--out", str(second))
    assert first.read_bytes() == second.read_bytes()
    assert b"\r" not in first.read_bytes()


def test_float_format_round_trips():
    for x in (0.1, 1 / 3, 2.0 ** -1074, 1e300, -7.044):
        assert float(cli.fmt_float(x)) == x
    assert cli.fmt_float(float("nan")) == "nan"
    assert cli.fmt_float(float("-inf")) == "-inf"


def test_verify_defaults(capsys):
    status, out, _ = run(capsys, "verify")
    report = json.loads(out)
    assert status == 0 and report["passed"]
    names = {c["name"] for c in report["checks"]}
    assert {"canonical_commutator_ab", "oracle_closed_vs_numeric", "similarity_conjugation"} <= names
    for c in report["checks"]:
        assert {"name", "residual", "tolerance", "passed"} <= set(c)


def test_verify_hermitian(tmp_path, capsys):
    path = write_config(tmp_path, {"omega_ab": 0.06, "omega_ba": 0.06})
    status, out, _ = run(capsys, "verify", "--config", path)
    report = json.loads(out)
    assert status == 0
    assert any(c["name"] == "reciprocal_regression" and c["passed"] for c in report["checks"])


def test_verify_fault_injection(capsys):
    status, out, err = run(capsys, "verify", "--inject-printed-alpha-plus")
    assert status == 1
    assert "intercavity_canonical_commutator" in err
    assert "intercavity_canonical_commutator" in json.loads(out)["failed"]


def test_unwritable_output(tmp_path, capsys):
    status, _, err = run(capsys, "spectrum", "--out", str(tmp_path / "no" / "such" / "file.csv"))
    assert status == 2 and err.startswith("chiralcav-error: io:")
