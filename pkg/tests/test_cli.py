import csv
import json

import numpy as np
import pytest

from cryptoperiod.cli import run


@pytest.fixture(scope="module")
def bars(tmp_path_factory):
    out = tmp_path_factory.mktemp("bars")
    (out / "syn.cfg").write_text("length_weeks = 2\nbase_vol = 0.001\nseed = 5\n")
    assert run(["simulate", "--config", str(out / "syn.cfg"), "--out", str(out), "--market", "syn"]) == 0
    return out / "syn_simulate_1m.csv"


@pytest.fixture(scope="module")
def daily(tmp_path_factory):
    out = tmp_path_factory.mktemp("daily")
    args = ["simulate", "--family", "egarchx", "--periodic", "--days", "1500", "--out", str(out), "--market", "d"]
    assert run(args) == 0
    return out / "d_simulate_day-pegarchx.csv"


def _rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_profile_csv_contract(bars, tmp_path, capsys):
    code = run(["profile", "--input", str(bars), "--scale", "minute", "--metric", "volatility", "--out", str(tmp_path)])
    assert code == 0
    rows = _rows(tmp_path / "syn_simulate_1m_profile_minute.csv")
    assert rows[0] == ["bin", "lambda", "ci_low", "ci_high", "n_obs"]
    assert len(rows) == 61
    captured = capsys.readouterr()
    assert captured.out == ""


def test_profile_json_and_market(bars, tmp_path):
    args = ["profile", "--input", str(bars), "--scale", "day", "--metric", "volume", "--format", "json"]
    assert run(args + ["--out", str(tmp_path), "--market", "btc"]) == 0
    doc = json.loads((tmp_path / "btc_profile_day.json").read_text())
    assert doc["schema_version"] == 1 and len(doc["rows"]) == 7
    assert doc["metadata"]["metric"] == "volume"


def test_outputs_are_deterministic(bars, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert run(["conditional", "--input", str(bars), "--scale", "minute", "--out", str(out)]) == 0
        assert run(["rv", "--input", str(bars), "--out", str(out), "--format", "json"]) == 0
    for f in a.iterdir():
        assert f.read_bytes() == (b / f.name).read_bytes()


def test_rv_and_time_span(bars, tmp_path):
    args = ["rv", "--input", str(bars), "--from", "2020-10-06", "--to", "2020-10-09", "--out", str(tmp_path)]
    assert run(args) == 0
    rows = _rows(tmp_path / "syn_simulate_1m_rv_day.csv")
    assert rows[0] == ["date", "rv", "annualized_vol_pct", "n_returns", "complete"]
    assert [r[0] for r in rows[1:]] == ["2020-10-06", "2020-10-07", "2020-10-08"]


def test_corr_two_inputs(bars, tmp_path):
    args = ["corr", "--input", str(bars), str(bars), "--max-lag", "5", "--market", "x", "--out", str(tmp_path)]
    assert run(args) == 0
    rows = _rows(tmp_path / "x_corr_1m.csv")
    assert rows[0] == ["lag", "rho", "band", "n"] and len(rows) == 7
    assert float(rows[1][1]) == pytest.approx(1.0)


def test_illiquidity_and_ingest_check(bars, tmp_path):
    assert run(["illiquidity", "--input", str(bars), "--out", str(tmp_path)]) == 0
    assert len(_rows(tmp_path / "syn_simulate_1m_illiquidity_hour.csv")) == 25
    assert run(["ingest-check", "--input", str(bars), "--out", str(tmp_path), "--format", "json"]) == 0
    doc = json.loads((tmp_path / "syn_simulate_1m_ingest-check_1m.json").read_text())
    summary = {r["key"]: r["value"] for r in doc["rows"]}
    assert summary["n_slots"] == 2 * 7 * 1440 and summary["n_filled"] == 0


def test_garch_fit_report(daily, tmp_path):
    args = ["garch-fit", "--input", str(daily), "--family", "egarchx", "--periodic", "--split", "2019-12-31"]
    assert run(args + ["--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "d_simulate_day-pegarchx_garch-fit_day-pegarchx.json").read_text())
    for key in ("mu", "omega", "alpha", "beta", "tau", "gamma", "lambda", "loglik_in", "loglik_os"):
        assert key in rep
    assert len(rep["lambda"]) == 7 and rep["loglik_os"] is not None
    assert rep["n_in"] == 1095
    path = _rows(tmp_path / "d_simulate_day-pegarchx_garch-fit_day-pegarchx.csv")
    assert path[0] == ["date", "h", "annualized_vol_pct"] and len(path) == 1501

    score = ["garch-score", "--input", str(daily), "--out", str(tmp_path)]
    report = tmp_path / "d_simulate_day-pegarchx_garch-fit_day-pegarchx.json"
    assert run(score + ["--params", str(report)]) == 0
    doc = json.loads((tmp_path / "d_simulate_day-pegarchx_garch-score_day-pegarchx.json").read_text())
    assert doc["loglik_os"] == pytest.approx(rep["loglik_os"], rel=1e-12)


def test_amm_quote(tmp_path, capsys):
    code = run(["amm-quote", "--x", "20000", "--y", "10", "--fee", "0.003", "--in", "20000", "--out", str(tmp_path)])
    assert code == 0
    lines = dict(line.split() for line in capsys.readouterr().out.splitlines())
    assert float(lines["y_out"]) == pytest.approx(4.992488, abs=1e-6)
    assert float(lines["average_price"]) == pytest.approx(4006.018, abs=1e-3)
    assert (tmp_path / "pool_amm-quote_quote.csv").exists()


def test_config_supplies_flags(bars, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"input = {bars}\nscale = hour\nmetric = volume\nformat = json\n")
    assert run(["profile", "--config", str(cfg), "--out", str(tmp_path), "--scale", "minute"]) == 0
    doc = json.loads((tmp_path / "syn_simulate_1m_profile_minute.json").read_text())
    assert doc["metadata"]["metric"] == "volume" and len(doc["rows"]) == 60


@pytest.mark.parametrize(
    "argv, status",
    [
        ([], 1),
        (["profile", "--bogus"], 1),
        (["profile", "--scale", "week"], 1),
        (["amm-quote", "--x", "1", "--y", "1", "--in", "-1"], 1),
        (["garch-fit", "--family", "garch", "--periodic", "--input", "x.csv"], 1),
        (["profile", "--input", "does-not-exist.csv"], 2),
    ],
)
def test_exit_statuses(argv, status, tmp_path, capsys):
    assert run(argv + ["--out", str(tmp_path)] if argv else argv) == status
    err = capsys.readouterr().err.strip().splitlines()[-1]
    assert err.startswith(f"error status={status} kind=")


def test_usage_error_for_bad_span(bars, tmp_path, capsys):
    args = ["rv", "--input", str(bars), "--from", "2020-10-09", "--to", "2020-10-06", "--out", str(tmp_path)]
    assert run(args) == 1


def test_numeric_failure_is_status_3(daily, tmp_path, capsys):
    report = tmp_path / "bad.json"
    report.write_text(json.dumps({"family": "EGARCH", "periodic": False, "mu": 0, "omega": 400.0,
                                  "alpha": 0.1, "beta": 0.5, "tau": 0.0, "split": "2019-12-31"}))
    assert run(["garch-score", "--input", str(daily), "--params", str(report), "--out", str(tmp_path)]) == 3
    assert "kind=numeric" in capsys.readouterr().err


def test_data_error_on_bad_csv(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("timestamp,open,high,low,close,volume\n1601510400000,1,1,1,100,1\n1601510430000,1,1,1,100,1\n")
    assert run(["ingest-check", "--input", str(bad), "--out", str(tmp_path)]) == 2
    assert "line 3" in capsys.readouterr().err
