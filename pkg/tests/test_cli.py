import io

import numpy as np
import pandas as pd
import pytest

from components.correlate import parse_pairs
from components.simulate import to_csv, to_pgm
from main import main, parse_row_params
from models.exceptions import ConfigurationError
from utils.audit import get_run_logs

PLANE_CONFIG = """
seed = 11

[space]
kind = "euclid-ball"
d = 2
C_M = 1.0

[sets]
kind = "halfspace"

[count]
kind = "{count_kind}"
{count_key} = {count_value}

[value]
kind = "gaussian"
mean = 0.0
variance = 1.0
"""

TOKEN_CONFIG = """
submodel = "token"

[space]
kind = "sphere"

[sets]
kind = "sphere-cap"

[sets.radius]
kind = "hemisphere"

[count]
kind = "binomial"
n = 8
p = 0.5

[value]
kind = "gaussian"
mean = 1.0
variance = 2.0
"""


@pytest.fixture
def plane_config(tmp_path):
    path = tmp_path / "plane.toml"
    path.write_text(PLANE_CONFIG.format(count_kind="poisson", count_key="lam", count_value=5.0), encoding="utf-8")
    return str(path)


@pytest.fixture
def token_config(tmp_path):
    path = tmp_path / "token.toml"
    path.write_text(TOKEN_CONFIG, encoding="utf-8")
    return str(path)


def read_csv(text):
    return pd.read_csv(io.StringIO(text))


def test_catalog_list(capsys):
    assert main(["catalog", "list"]) == 0
    out = capsys.readouterr().out
    assert "table rows (21)" in out
    assert "extras (2)" in out
    assert "torus-sph" in out


def test_catalog_show(capsys):
    assert main(["catalog", "show", "t2r5", "--alpha", "0.5"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("t2r5: dead leaves")
    table = read_csv(out[out.index("d,rho"):])
    assert table["rho"].iloc[0] == 1.0
    assert table["d"].iloc[-1] == pytest.approx(np.pi)
    assert table["rho"].iloc[-1] == pytest.approx(0.0, abs=1e-15)


def test_catalog_show_rejects_bad_parameters(capsys):
    assert main(["catalog", "show", "t1r1", "--alpha", "1.5"]) == 1
    assert "alpha" in capsys.readouterr().err
    assert main(["catalog", "show"]) == 1
    assert main(["catalog", "show", "t9r9"]) == 1


def test_simulate_is_reproducible(plane_config, tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["simulate", "--config", plane_config, "--grid", "4x4", "--format", "csv", "--seed", "5"]
    assert main([*argv, "--out", str(first)]) == 0
    assert main([*argv, "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    lines = first.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "# 4,4"
    assert len(lines) == 5


def test_simulate_pgm_without_sets(tmp_path, capsys):
    path = tmp_path / "empty.toml"
    path.write_text(PLANE_CONFIG.format(count_kind="deterministic", count_key="n", count_value=0), encoding="utf-8")
    assert main(["simulate", "--config", str(path), "--grid", "3x2"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[:3] == ["P2", "3 2", "65535"]
    assert out.splitlines()[3:] == ["0 0 0", "0 0 0"]


def test_pgm_scaling():
    text = to_pgm(np.array([[0.0, 1.0], [0.5, 1.0]]))
    assert text.splitlines()[3:] == ["0 65535", "32768 65535"]
    assert to_csv(np.array([[0.25, -1.0]])).splitlines() == ["# 1,2", "0.25,-1"]


def test_correlate_catalog_row(capsys, ledger):
    argv = ["correlate", "--row", "t2r3", "--lambda1", "0.5", "--replicates", "400",
            "--pairs", "0,1.0,2.0", "--seed", "1", "--threads", "1"]
    assert main(argv) == 0
    table = read_csv(capsys.readouterr().out)
    assert list(table.columns) == ["d", "rho_hat", "se", "rho_analytic", "z"]
    assert table["rho_analytic"].tolist() == pytest.approx([1.0, 0.5 * (1 - 1.0 / np.pi) + 0.5,
                                                           0.5 * (1 - 2.0 / np.pi) + 0.5])
    runs = get_run_logs(command="correlate")
    assert len(runs) == 1
    assert runs["details"].iloc[0]["status"] in ("pass", "flagged")


def test_oracle_agrees_with_closed_form(token_config, capsys):
    assert main(["oracle", "--config", token_config, "--n", "6", "--pairs", "0,0.5,1,3"]) == 0
    table = read_csv(capsys.readouterr().out)
    assert len(table) == 4
    assert table["abs_diff"].max() < 1e-10
    assert np.allclose(table["rho_closed"], table["rho_oracle"], atol=1e-12)


def test_oracle_budget(token_config, capsys):
    assert main(["oracle", "--config", token_config, "--n", "15"]) == 1
    assert "n: expected an integer in [0, 14]" in capsys.readouterr().err


def test_sum_reports_every_point(plane_config, capsys):
    argv = ["sum", "--config", plane_config, "--m", "3", "--replicates", "20", "--points", "0,0.5", "--threads", "1"]
    assert main(argv) == 0
    table = read_csv(capsys.readouterr().out)
    assert list(table.columns) == ["point", "d", "mean", "variance", "ks_pvalue"]
    assert table["d"].tolist() == [0.0, 0.5]


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["simulate"],
        ["correlate", "--bogus", "1"],
        ["catalog", "list", "--log-level", "chatty"],
        ["catalog", "list", "extra"],
        ["simulate", "--row", "t1r1", "--alpha"],
        ["simulate", "--row", "t1r1", "--grid", "4by4"],
        ["simulate", "--row", "t1r1", "--format", "png"],
    ],
)
def test_bad_invocations_exit_with_one(argv, capsys):
    assert main(argv) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_parse_row_params():
    assert parse_row_params(["--alpha", "0.5", "--c1=2", "--C-M", "3"]) == {"alpha": "0.5", "c1": "2", "C_M": "3"}
    with pytest.raises(ConfigurationError):
        parse_row_params(["alpha"])
    with pytest.raises(ConfigurationError):
        parse_row_params(["--alpha"])


def test_parse_pairs():
    assert parse_pairs(None, 2.0).tolist() == pytest.approx(np.linspace(0.0, 2.0, 10).tolist())
    assert parse_pairs("0:1:3", 9.0).tolist() == [0.0, 0.5, 1.0]
    assert parse_pairs("0.5, 1.5", 9.0).tolist() == [0.5, 1.5]
    assert parse_pairs([0, 1], 9.0).tolist() == [0.0, 1.0]
    with pytest.raises(ConfigurationError):
        parse_pairs("0:1", 9.0)
    with pytest.raises(ConfigurationError):
        parse_pairs("near,far", 9.0)


def test_sum_defaults_to_the_anchor(plane_config, capsys):
    argv = ["sum", "--config", plane_config, "--m", "2", "--replicates", "10", "--threads", "1"]
    assert main(argv) == 0
    table = read_csv(capsys.readouterr().out)
    assert table["d"].tolist() == [0.0]
    assert table["point"].tolist() == [0]
