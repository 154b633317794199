"""Command-line surface: file schemas, exit codes, error JSON, and
reproducibility of outputs."""

import json

import numpy as np
import pytest

from epirecon import cli

from conftest import SIGMA1

CASE1_ARGS = ["simulate", "--model", "sirs", "--theta", "0.3,0.25,0.1,0.05",
              "--x0", "0.9,0.1", "--h", "0.03125", "--tmax", "5",
              "--sampling", "continuous"]
CASE2_ARGS = ["simulate", "--model", "sir", "--theta", "0.3,0.25,0.1",
              "--x0", "0.9,0.1", "--h", "0.03125", "--tmax", "5"]


def run(args):
    return cli.main([str(a) for a in args])


@pytest.fixture()
def case1_files(tmp_path):
    obs = tmp_path / "obs.csv"
    chain = tmp_path / "chain.csv"
    traj = tmp_path / "traj.csv"
    assert run(CASE1_ARGS + ["--out-obs", obs, "--out-chain", chain,
                             "--out-traj", traj]) == 0
    return obs, chain, traj


@pytest.fixture()
def case2_chain(tmp_path):
    chain = tmp_path / "chain2.csv"
    assert run(CASE2_ARGS + ["--out-obs", tmp_path / "o2.csv",
                             "--out-chain", chain]) == 0
    return chain


def test_simulate_continuous_row_count(case1_files):
    obs, chain, traj = case1_files
    assert len(obs.read_text().splitlines()) == 162  # header + 161 points
    assert traj.read_text().splitlines()[0] == "t,S,I"
    assert chain.read_text().splitlines()[0] == "t,y,y1,y2,y3,y4,y5"


def test_simulate_daily_row_count(tmp_path):
    out = tmp_path / "daily.csv"
    assert run(CASE2_ARGS + ["--sampling", "daily", "--out-obs", out]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 7  # header + days 0..5
    assert lines[0] == "t,y"


def test_simulate_outputs_are_byte_identical(tmp_path, case1_files):
    obs2 = tmp_path / "obs_rerun.csv"
    chain2 = tmp_path / "chain_rerun.csv"
    assert run(CASE1_ARGS + ["--out-obs", obs2, "--out-chain", chain2]) == 0
    assert obs2.read_bytes() == case1_files[0].read_bytes()
    assert chain2.read_bytes() == case1_files[1].read_bytes()


def test_reconstruct_round_trip(tmp_path, case1_files, capsys):
    _, chain, _ = case1_files
    out = tmp_path / "res.json"
    code = run(["reconstruct", chain, "--model", "sirs", "--method",
                "wronskian", "--at", "1.0", "--out", out])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["schema_version"] == "1"
    theta = np.array(payload["theta_hat"])
    assert np.max(np.abs(theta / [0.3, 0.25, 0.1, 0.05] - 1.0)) <= 1e-9
    assert np.max(np.abs(np.array(payload["sigma"]) / SIGMA1 - 1.0)) <= 1e-9
    assert payload["trusted"] is True
    assert payload["method"] == "wronskian"


def test_reconstruct_multitime_window(tmp_path, case1_files):
    _, chain, _ = case1_files
    out = tmp_path / "res.json"
    code = run(["reconstruct", chain, "--model", "sirs", "--method",
                "multitime", "--window", "0,5", "--out", out])
    assert code == 0
    payload = json.loads(out.read_text())
    assert len(payload["times_used"]) == 4


def test_reconstruct_rejects_daily_data(tmp_path, capsys):
    daily = tmp_path / "daily.csv"
    run(CASE2_ARGS + ["--sampling", "daily", "--out-obs", daily])
    code = run(["reconstruct", daily, "--model", "sirs-ext"])
    assert code == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "MethodNeedsDerivatives"
    assert "calibrate" in err["message"]


def test_reconstruct_rejects_observations_without_derivatives(
        tmp_path, case1_files, capsys):
    obs, _, _ = case1_files
    code = run(["reconstruct", obs, "--model", "sirs"])
    assert code == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "MethodNeedsDerivatives"


def test_reconstruct_equilibrium_data_fails_loudly(tmp_path, capsys):
    chain = tmp_path / "ee.csv"
    assert run(["simulate", "--model", "sirs", "--theta", "0.3,0.25,0.1,0.05",
                "--x0", "0.4,0.2", "--tmax", "5", "--out-obs",
                tmp_path / "ee_obs.csv", "--out-chain", chain]) == 0
    code = run(["reconstruct", chain, "--model", "sirs"])
    assert code == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] in ("SingularEverywhere", "WronskianVanishes")


def test_reconstruct_sir_regime_payload(tmp_path, case2_chain):
    out = tmp_path / "res2.json"
    code = run(["reconstruct", case2_chain, "--model", "sirs-ext",
                "--out", out])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["regime"] == "SIR"
    assert payload["theta_hat"] is None
    combos = payload["combos"]
    assert combos["gamma"] == pytest.approx(0.1, rel=1e-8)
    assert combos["beta_S0"] == pytest.approx(0.225, abs=1e-8)
    assert combos["k_I0"] == pytest.approx(0.03, abs=1e-10)


def test_discriminate_cases(case1_files, case2_chain, capsys):
    _, chain1, _ = case1_files
    assert run(["discriminate", chain1, "--approach", "both"]) == 0
    p1 = json.loads(capsys.readouterr().out)
    assert p1["verdict"] == "SIRS"
    assert p1["approach1"]["verdict"] == p1["approach2"]["verdict"]
    assert run(["discriminate", case2_chain, "--approach", "both"]) == 0
    p2 = json.loads(capsys.readouterr().out)
    assert p2["verdict"] == "SIR"


def test_calibrate_cli(tmp_path, capsys):
    daily = tmp_path / "daily.csv"
    run(CASE2_ARGS + ["--sampling", "daily", "--out-obs", daily])
    out_csv = tmp_path / "fits.csv"
    out_json = tmp_path / "summary.json"
    code = run(["calibrate", "--obs", daily, "--starts", "2", "--seed", "1",
                "--truth", "0.3,0.25,0.1,0,0.9", "--out-csv", out_csv,
                "--out-json", out_json])
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "test,start,abs_error,objective,elapsed_seconds," \
                       "theta_hat,combos"
    assert len(lines) == 3
    summary = json.loads(out_json.read_text())
    assert summary["starts"] == 2
    assert len(summary["combos_median"]) == 3


def test_calibrate_zero_starts_is_usage_error(tmp_path):
    daily = tmp_path / "daily.csv"
    run(CASE2_ARGS + ["--sampling", "daily", "--out-obs", daily])
    with pytest.raises(SystemExit) as exc:
        run(["calibrate", "--obs", daily, "--starts", "0"])
    assert exc.value.code == 2


def test_report_schema_and_bound(tmp_path):
    out = tmp_path / "fig.csv"
    assert run(["report", "--out", out]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,S_sir,I_sir,S_sirs,I_sirs,gap,bound"
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert np.all(data[:, 5] <= data[:, 6])  # gap <= bound


def test_report_zero_mu_gap_identically_zero(tmp_path):
    out = tmp_path / "fig0.csv"
    assert run(["report", "--mu", "0", "--tmax", "10", "--out", out]) == 0
    data = np.array([[float(v) for v in ln.split(",")]
                     for ln in out.read_text().splitlines()[1:]])
    assert np.all(data[:, 5] == 0.0)


def test_config_file_defaults_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("model=sirs\ntheta=0.3,0.25,0.1,0.05\nx0=0.9,0.1\n"
                   "tmax=5\n# comment line\nsampling=daily\n")
    out = tmp_path / "from_cfg.csv"
    assert run(["simulate", "--config", cfg, "--out-obs", out]) == 0
    assert len(out.read_text().splitlines()) == 7  # daily rows from config
    out2 = tmp_path / "override.csv"
    assert run(["simulate", "--config", cfg, "--sampling", "continuous",
                "--out-obs", out2]) == 0
    assert len(out2.read_text().splitlines()) == 162  # flag wins


def test_reconstruct_outputs_stable_apart_from_timing(tmp_path, case1_files):
    _, chain, _ = case1_files
    outs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        run(["reconstruct", chain, "--model", "sirs", "--method",
             "wronskian", "--at", "2.0", "--out", path])
        payload = json.loads(path.read_text())
        payload.pop("elapsed_seconds")
        outs.append(payload)
    assert outs[0] == outs[1]


def test_two_output_model_files(tmp_path):
    obs = tmp_path / "siv_obs.csv"
    chain = tmp_path / "siv_chain.csv"
    code = run(["simulate", "--model", "siv-demog", "--theta",
                "0.5,1.5,0.3,0.2", "--x0", "0.4,0.3,0.2", "--tmax", "5",
                "--out-obs", obs, "--out-chain", chain])
    assert code == 0
    assert obs.read_text().splitlines()[0] == "t,y1,y2"
    header = chain.read_text().splitlines()[0]
    assert header.startswith("t,y1,y1_1")
    assert ",y2," in header
    out = tmp_path / "siv_res.json"
    assert run(["reconstruct", chain, "--model", "siv-demog",
                "--out", out]) == 0
    payload = json.loads(out.read_text())
    theta = np.array(payload["theta_hat"])
    assert np.max(np.abs(theta / [0.5, 1.5, 0.3, 0.2] - 1.0)) <= 1e-6


def test_unknown_model_is_clean_error(tmp_path, capsys):
    code = run(["simulate", "--model", "seir", "--theta", "1", "--x0", "1",
                "--out-obs", tmp_path / "x.csv"])
    assert code == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "KeyError"
