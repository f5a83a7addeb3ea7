import json

import pytest

from conftest import CONFIG_DIR
from ruinprob import cli
from ruinprob.config import ConfigError, dump_config, load_config, parse_config

ERLANG = str(CONFIG_DIR / "erlang.json")
HYPER = str(CONFIG_DIR / "hyperexponential.json")
EXP_DEG = str(CONFIG_DIR / "exponential_degenerate.json")
EXP_EXP = str(CONFIG_DIR / "exponential_exponential.json")
NO_PROFIT = str(CONFIG_DIR / "no_profit.json")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_config(tmp_path, **overrides):
    data = {
        "premium_rate": 1.0,
        "claim_intensity": 1.0,
        "claims": {"family": "degenerate", "point": 1.0},
        "funds": {"family": "exponential", "mean": 0.9},
    }
    data.update(overrides)
    path = tmp_path / "model.json"
    path.write_text(json.dumps(data))
    return str(path)


def test_plan(capsys):
    assert run(capsys, "plan") == (0, "N = 3800452\n", "")


def test_plan_json(capsys):
    code, out, _ = run(capsys, "plan", "--epsilon", "0.5", "--delta", "0.001", "--json")
    assert code == 0 and json.loads(out)["n_paths"] == 16


def test_plan_rejects_zero_epsilon(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["plan", "--epsilon", "0"])
    assert info.value.code == cli.EXIT_USAGE


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "--config", ERLANG)
    assert code == 0
    assert out.splitlines()[0] == "R_hat = 0.349093"
    assert "x = 2: exp(-R_hat x) = 0.497487" in out


def test_bound_json(capsys):
    code, out, _ = run(capsys, "bound", "--config", EXP_DEG, "--json", "--x", "10")
    record = json.loads(out)
    assert code == 0
    assert record["r_hat"] == pytest.approx(0.195273, abs=5e-7)
    assert record["bound"]["10.0"] == pytest.approx(0.141886, abs=5e-7)


def test_bound_without_profit(capsys):
    code, out, _ = run(capsys, "bound", "--config", NO_PROFIT, "--json")
    record = json.loads(out)
    assert code == cli.EXIT_INAPPLICABLE
    assert set(record["psi"].values()) == {1.0}


def test_devylder(capsys):
    code, out, _ = run(capsys, "devylder", "--config", HYPER)
    assert code == 0
    assert out.splitlines()[0] == "psi_DV(x) = 0.597559 * exp(-0.111857 x)"


def test_devylder_gate_failure(capsys, tmp_path):
    code, out, _ = run(capsys, "devylder", "--config", write_config(tmp_path), "--json")
    assert code == cli.EXIT_INAPPLICABLE
    assert json.loads(out)["gate"] == "means-positive"


def test_devylder_without_profit(capsys):
    code, out, _ = run(capsys, "devylder", "--config", NO_PROFIT, "--json")
    assert code == 0
    assert set(json.loads(out)["values"].values()) == {1.0}


def test_exact(capsys):
    code, out, _ = run(capsys, "exact", "--config", EXP_EXP, "--x", "0")
    assert code == 0
    assert out.splitlines() == ["psi(x) = 0.617458 * exp(-0.191271 x)", "x = 0: psi = 0.617458"]


def test_exact_without_profit(capsys):
    code, out, _ = run(capsys, "exact", "--config", NO_PROFIT)
    assert code == 0
    assert out.splitlines()[0] == "psi(x) = 1"
    assert "x = 10: psi = 1.000000" in out


def test_exact_on_other_families(capsys):
    code, _, _ = run(capsys, "exact", "--config", ERLANG)
    assert code == cli.EXIT_INAPPLICABLE


def test_simulate_csv(capsys):
    code, out, _ = run(capsys, "simulate", "--config", EXP_DEG, "--paths", "2000", "--x", "0", "--x", "5")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "# seed: 20150202"
    header = lines.index("x,psi_hat,ruined,n_paths,truncated_paths,hoeffding_radius")
    assert [line.split(",")[0] for line in lines[header + 1 :]] == ["0", "5"]


def test_simulate_json_without_profit(capsys):
    code, out, _ = run(capsys, "simulate", "--config", NO_PROFIT, "--json")
    results = json.loads(out)["results"]
    assert code == 0 and all(r["psi_hat"] == 1.0 and r["analytic"] for r in results)


def test_simulate_paths_from_epsilon(capsys):
    code, out, _ = run(capsys, "simulate", "--config", EXP_DEG, "--epsilon", "0.05", "--json")
    assert code == 0 and json.loads(out)["n_paths"] == 1521


def test_table_is_byte_stable(capsys):
    argv = ["table", "--config", ERLANG, "--paths", "3000", "--seed", "5"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    lines = first.splitlines()
    assert "# r_hat: 0.349093" in lines
    assert "x,psi_hat,psi_dv,dv_rel_pct,lundberg,bound_rel_pct" in lines
    row = next(line for line in lines if line.startswith("2,"))
    assert row.split(",")[4] == "0.497487"


def test_table_markdown_with_exact_column(capsys):
    code, out, _ = run(capsys, "table", "--config", EXP_EXP, "--paths", "2000", "--output", "markdown")
    assert code == 0
    assert "| psi(x) exact |" in out
    assert "| 0 |" in out and "%" in out


def test_table_without_profit(capsys):
    code, out, _ = run(capsys, "table", "--config", NO_PROFIT)
    rows = [line for line in out.splitlines() if line and line[0].isdigit()]
    assert code == 0 and rows
    for row in rows:
        cells = row.split(",")
        assert [cells[1], cells[2], cells[4]] == ["1.000000"] * 3


def test_missing_config(capsys, tmp_path):
    code, _, err = run(capsys, "bound", "--config", str(tmp_path / "absent.json"))
    assert code == cli.EXIT_USAGE and "cannot read" in err


def test_invalid_json(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{")
    code, _, err = run(capsys, "bound", "--config", str(path))
    assert code == cli.EXIT_USAGE and "invalid JSON" in err


class TestConfig:
    @pytest.mark.parametrize("name", ["erlang", "hyperexponential", "exponential_degenerate",
                                      "exponential_exponential", "no_profit"])
    def test_round_trip(self, name):
        cfg = load_config(CONFIG_DIR / f"{name}.json")
        assert parse_config(json.loads(dump_config(cfg))) == cfg

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown"):
            parse_config({"premium_rate": 1, "claim_intensity": 1, "claims": {}, "funds": {}, "extra": 1})

    def test_unsorted_grid(self, tmp_path):
        with pytest.raises(ConfigError, match="sorted"):
            load_config(write_config(tmp_path, x_grid=[2, 1]))

    def test_invalid_model(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write_config(tmp_path, premium_rate=-1))

    def test_bad_seed(self, tmp_path):
        with pytest.raises(ConfigError, match="seed"):
            load_config(write_config(tmp_path, mc={"seed": -3}))

    def test_conflicting_caps(self, tmp_path):
        with pytest.raises(ConfigError, match="at most one"):
            load_config(write_config(tmp_path, mc={"surplus_cap": 50, "max_claims": 10}))
