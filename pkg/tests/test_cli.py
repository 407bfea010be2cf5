import csv
import json
import math

import pytest

from dilute1d.cli import main

DELTA_CONFIG = """
[potential.delta]
x0 = 0.0
strength = 2.0
"""


@pytest.fixture()
def delta_config(tmp_path):
    path = tmp_path / "delta.cfg"
    path.write_text(DELTA_CONFIG)
    return path


def test_scatter_verb(tmp_path, delta_config, capsys):
    rc = main(
        [
            "--out-dir",
            str(tmp_path),
            "scatter",
            "--config",
            str(delta_config),
            "--radius",
            "1.0",
            "--out",
            "sc",
        ]
    )
    assert rc == 0
    payload = json.loads((tmp_path / "sc.json").read_text())
    assert payload["a"] == pytest.approx(-2.0)
    assert payload["energy"] == pytest.approx(4.0 / 3.0)
    assert payload["energy_functional"] == pytest.approx(4.0 / 3.0)
    assert (tmp_path / "sc.png").exists()


def test_scatter_no_figures(tmp_path, delta_config):
    rc = main(
        [
            "--out-dir",
            str(tmp_path),
            "--no-figures",
            "scatter",
            "--config",
            str(delta_config),
            "--radius",
            "2.0",
        ]
    )
    assert rc == 0
    assert (tmp_path / "scatter.json").exists()
    assert not (tmp_path / "scatter.png").exists()


def test_ll_solve_verb_csv(tmp_path):
    rc = main(["--out-dir", str(tmp_path), "ll-solve", "--gamma", "1,10,100"])
    assert rc == 0
    with (tmp_path / "ll_solve.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 3
    assert float(rows[2]["e"]) == pytest.approx(3.162181, rel=1e-5)
    assert set(rows[0]) == {
        "gamma",
        "lambda",
        "e",
        "lower_bound",
        "expansion_value",
        "residual",
        "n_nodes",
    }
    assert (tmp_path / "ll_solve.png").exists()


def test_fermi_verb(tmp_path):
    rc = main(
        ["--out-dir", str(tmp_path), "fermi", "--N", "5", "--L", "5.0", "--rdm2-grid", "32"]
    )
    assert rc == 0
    assert (tmp_path / "fermi.csv").exists()
    assert (tmp_path / "fermi_rdm2.csv").exists()
    assert (tmp_path / "fermi.png").exists()


def test_oracle_verb(tmp_path):
    rc = main(
        [
            "--out-dir",
            str(tmp_path),
            "oracle",
            "--N",
            "1",
            "--L",
            "1.0",
            "--bc",
            "dirichlet",
            "--refine",
            "3",
        ]
    )
    assert rc == 0
    payload = json.loads((tmp_path / "oracle.json").read_text())
    assert payload["extrapolated"] == pytest.approx(math.pi**2, abs=1e-5)
    assert len(payload["per_grid_energies"]) == 3
    assert payload["detected_order"] == pytest.approx(2.0, abs=0.1)


def test_trial_verb(tmp_path, delta_config):
    rc = main(
        [
            "--out-dir",
            str(tmp_path),
            "--no-figures",
            "trial",
            "--N",
            "2",
            "--L",
            "10.0",
            "--config",
            str(delta_config),
            "--b",
            "0.8",
        ]
    )
    assert rc == 0
    payload = json.loads((tmp_path / "trial.json").read_text())
    assert payload["a"] == pytest.approx(-2.0)
    assert payload["trial_energy"] > 0.3


def test_validate_verb_pass(tmp_path):
    rc = main(
        [
            "--out-dir",
            str(tmp_path),
            "validate",
            "--N",
            "2",
            "--L",
            "40.0",
            "--symmetry",
            "bose",
            "--c",
            "5.0",
            "--refine",
            "3",
        ]
    )
    assert rc == 0
    payload = json.loads((tmp_path / "validate.json").read_text())
    assert payload["a"] == pytest.approx(-0.4)
    assert payload["verdict"] is True
    assert (tmp_path / "validate.png").exists()


def test_sweep_verb(tmp_path):
    rc = main(
        [
            "--out-dir",
            str(tmp_path),
            "sweep",
            "--gamma",
            "1,10",
            "--kappa",
            "0,0.25,0.5",
            "--kappa-pi",
            "--c",
            "1.0",
        ]
    )
    assert rc == 0
    assert (tmp_path / "sweep_gamma.csv").exists()
    assert (tmp_path / "sweep_kappa.csv").exists()
    assert (tmp_path / "sweep_gamma.png").exists()
    assert (tmp_path / "sweep_kappa.png").exists()
    with (tmp_path / "sweep_kappa.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert float(rows[0]["a_kappa"]) == pytest.approx(-2.0)


def test_sweep_requires_a_kind(tmp_path):
    assert main(["--out-dir", str(tmp_path), "sweep"]) == 2


def test_acceptance_verb_selected(tmp_path, capsys):
    rc = main(["--out-dir", str(tmp_path), "acceptance", "--only", "1"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "PASS  criterion  1" in out
