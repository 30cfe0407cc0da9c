import json

import pytest

from ncosc import cli

K1 = {"class": "discrete_plus", "k": 1, "window": [1, 12]}


def write(tmp_path, doc, name="run.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def run_cli(tmp_path, doc, *extra):
    out = tmp_path / "out.txt"
    code = cli.main(["--config", write(tmp_path, doc), "--output", str(out), "--quiet", *extra])
    return code, (out.read_text() if out.exists() else None)


def test_levi_command(tmp_path):
    code, text = run_cli(tmp_path, {"schema_version": 1, "command": "levi",
                                    "params": {"theta": 1, "kappa": 1}})
    assert code == 0
    rep = json.loads(text)["report"]
    assert rep["radical_dim"] == 7 and rep["complement_dim"] == 3


def test_spectrum_at_zero_coupling(tmp_path):
    doc = {"schema_version": 1, "command": "spectrum", "params": {"omega": 0.5},
           "irrep": K1, "sector": {"j": 1}, "truncation": {"n_max": 5}}
    code, text = run_cli(tmp_path, doc)
    assert code == 0
    rep = json.loads(text)["report"]
    expected = sorted(0.5 * (na + nb + 1) for na, nb, _ in rep["labels"])
    assert rep["eigenvalues"] == pytest.approx(expected, abs=1e-12)
    code, text = run_cli(tmp_path, doc, "--format", "csv")
    assert code == 0 and text.startswith("t,j,level_index")


def test_dirac_equivalence_command(tmp_path):
    code, text = run_cli(tmp_path, {"schema_version": 1, "command": "dirac-equivalence",
                                    "truncation": {"n_max": 4}})
    assert code == 0
    assert json.loads(text)["report"]["message"] == "exact match, sign = +1"


def test_output_is_byte_identical(tmp_path):
    doc = {"schema_version": 1, "command": "spectrum", "params": {"theta": 0.1, "kappa": 0.1},
           "irrep": K1, "sector": {"j": 1}, "truncation": {"n_max": 6}}
    _, a = run_cli(tmp_path, doc)
    _, b = run_cli(tmp_path, doc)
    assert a == b


def test_config_round_trip():
    doc = {"schema_version": 1, "command": "perturb-small", "irrep": K1, "sector": {"j": 1},
           "options": {"t_grid": [1, 2]}}
    once = cli.serialize_config(cli.parse_config(doc))
    assert cli.serialize_config(cli.parse_config(once)) == once


@pytest.mark.parametrize("doc", [
    {"schema_version": 1, "command": "bogus"},
    {"schema_version": 2, "command": "levi"},
    {"schema_version": 1, "command": "spectrum"},
    {"schema_version": 1, "command": "levi", "tolerances": {"convergence_rtol": -1}},
    {"schema_version": 1, "command": "levi", "output": {"format": "csv"}},
    {"schema_version": 1, "command": "spectrum", "sector": {"j": 1},
     "irrep": {"class": "continuous", "lambda": 0.5, "window": [-2, 2]}},
])
def test_validation_errors_exit_2(tmp_path, doc):
    code, _ = run_cli(tmp_path, doc)
    assert code == cli.EXIT_INVALID


def test_unwritable_output(tmp_path):
    cfg = write(tmp_path, {"schema_version": 1, "command": "levi"})
    assert cli.main(["--config", cfg, "--output", "/nonexistent/dir/x.json"]) == cli.EXIT_INVALID


def test_numerical_failure_exit_3(tmp_path, monkeypatch):
    from ncosc import dirac_osc

    def boom(*a, **k):
        raise dirac_osc.ConventionError("no sign matches")

    monkeypatch.setattr(dirac_osc, "landau_equivalence_check", boom)
    code, _ = run_cli(tmp_path, {"schema_version": 1, "command": "dirac-equivalence"})
    assert code == cli.EXIT_NUMERICAL


def test_print_schema(capsys):
    assert cli.main(["--print-schema"]) == 0
    assert "schema_version" in capsys.readouterr().out


def test_schema_file_is_current():
    from pathlib import Path

    path = Path(__file__).resolve().parents[1] / "docs" / "config_schema.json"
    assert json.loads(path.read_text()) == cli.CONFIG_SCHEMA
