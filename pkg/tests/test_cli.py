"""Unit tests for the command-line frontend: parsing, dispatch, artifacts."""

import json

import numpy as np
import pytest

from mpodyn.cli import (
    ChildRun,
    RunConfig,
    child_seed,
    expand_children,
    main,
    parse_config,
    run,
)
from mpodyn.errors import ConfigError
from mpodyn.output import read_csv, read_manifest, write_csv
from mpodyn.state import DensityMPS


def test_parse_config_defaults():
    config = parse_config(source={}, mode="circuit")
    assert config.mode == "circuit"
    assert config.params["sites"] == 4
    assert config.params["rate"] == 0.1
    assert config.params["depth"] == 20
    assert config.params["delta_err"] == 1e-6
    assert config.params["realizations"] == 100
    assert config.params["trace_errors"] is False


def test_parse_config_rejects_out_of_range():
    with pytest.raises(ConfigError, match=r"rate.*\[0\.0, 1\.0\]"):
        parse_config(source={"rate": 1.5}, mode="circuit")
    with pytest.raises(ConfigError, match="sites"):
        parse_config(source={"sites": 1}, mode="circuit")
    with pytest.raises(ConfigError, match="noise"):
        parse_config(source={"noise": "bitflip"}, mode="circuit")


def test_parse_config_rejects_unknown_keys():
    with pytest.raises(ConfigError, match="wobble"):
        parse_config(source={"wobble": 3}, mode="circuit")
    # keys valid in other modes are still rejected for this one
    with pytest.raises(ConfigError, match="kappa"):
        parse_config(source={"kappa": 0.1}, mode="circuit")


def test_parse_config_round_trip():
    config = parse_config(
        source={"sites": [4, 6], "rate": 0.2, "seed": 5}, mode="circuit"
    )
    again = parse_config(source=config.canonical())
    assert again == config


def test_parse_config_mode_precedence_and_overrides():
    config = parse_config(source={"mode": "pure-noise"}, mode=None)
    assert config.mode == "pure-noise"
    flag_wins = parse_config(source={"mode": "pure-noise"}, mode="circuit")
    assert flag_wins.mode == "circuit"
    with_seed = parse_config(source={}, mode="circuit", overrides={"seed": 9})
    assert with_seed.params["seed"] == 9
    # overrides for keys the mode lacks are rejected
    with pytest.raises(ConfigError, match="seed"):
        parse_config(source={"input": "x.csv"}, mode="fit", overrides={"seed": 1})
    with pytest.raises(ConfigError, match="mode"):
        parse_config(source={})


def test_child_seed_deterministic_and_distinct():
    assert child_seed(42, 0) == child_seed(42, 0)
    seeds = {child_seed(42, i) for i in range(16)}
    assert len(seeds) == 16


def test_expand_children_scalar_keeps_seed():
    config = parse_config(source={"seed": 42}, mode="circuit")
    children = expand_children(config)
    assert len(children) == 1
    assert children[0].seed == 42
    assert children[0].params["sites"] == 4


def test_expand_children_sweep_derives_seeds():
    config = parse_config(
        source={"sites": [4, 6], "rate": [0.05, 0.1], "seed": 42}, mode="circuit"
    )
    children = expand_children(config)
    assert [c.name for c in children] == [
        "N4_p0.05", "N4_p0.1", "N6_p0.05", "N6_p0.1",
    ]
    assert [c.seed for c in children] == [child_seed(42, i) for i in range(4)]
    assert children[2].params["sites"] == 6
    assert children[2].params["rate"] == 0.05


def test_run_pure_noise_anchor_row(tmp_path):
    config = parse_config(
        source={"rate": 0.75, "depth": 3, "sites": 4},
        mode="pure-noise",
        out_dir=str(tmp_path),
    )
    run(config)
    data = read_csv(tmp_path / "pure-noise.csv")
    assert data.kind == "norm-decay"
    assert data.columns["t"][0] == 1.0
    assert data.columns["log2_norm_per_site"][0] == pytest.approx(-0.5, abs=1e-12)
    np.testing.assert_allclose(
        data.columns["log2_norm_per_site"], data.columns["closed_form"], atol=1e-10
    )
    manifest = read_manifest(tmp_path / "pure-noise_manifest.json")
    assert manifest["config"]["rate"] == 0.75


def test_run_single_qubit_steady_purity(tmp_path):
    config = parse_config(
        source={"omega": 1.0, "kappa": float(np.sqrt(2.0)), "total_time": 5.0},
        mode="single-qubit",
        out_dir=str(tmp_path),
    )
    manifest = run(config)
    assert manifest["children"][0]["steady_purity"] == pytest.approx(7.0 / 8.0)
    data = read_csv(tmp_path / "single-qubit.csv")
    assert data.kind == "single-qubit"
    assert set(data.columns) == {"t", "rho00", "rho11", "re_rho01", "im_rho01", "purity"}
    assert data.columns["purity"][0] == pytest.approx(1.0)


def test_run_outputs_byte_identical(tmp_path):
    src = {"sites": 3, "depth": 5, "rate": 0.2, "seed": 3, "realizations": 2}
    a_dir, b_dir = tmp_path / "a", tmp_path / "b"
    run(parse_config(source=src, mode="circuit", out_dir=str(a_dir)))
    run(parse_config(source=src, mode="circuit", out_dir=str(b_dir)))
    a = (a_dir / "circuit.csv").read_bytes()
    b = (b_dir / "circuit.csv").read_bytes()
    assert a == b
    # manifests agree apart from wall-clock fields
    ma = read_manifest(a_dir / "circuit_manifest.json")
    mb = read_manifest(b_dir / "circuit_manifest.json")
    for m in (ma, mb):
        m.pop("created")
        m.pop("runtime_seconds")
    assert ma == mb


def test_run_circuit_norm_decay_csv(tmp_path):
    config = parse_config(
        source={"sites": 3, "depth": 5, "rate": 0.2, "seed": 3, "realizations": 2},
        mode="circuit",
        out_dir=str(tmp_path),
    )
    manifest = run(config)
    data = read_csv(tmp_path / "circuit.csv")
    assert data.kind == "norm-decay"
    assert data.n_rows == 5  # the t = 0 row is omitted
    assert data.columns["t"][0] == 1.0
    assert np.all(np.diff(data.columns["log2_norm_per_site"]) < 0)
    entry = manifest["children"][0]
    assert entry["csv"] == "circuit.csv"
    assert entry["params"] == {"sites": 3, "rate": 0.2}


def test_run_circuit_trace_errors(tmp_path):
    config = parse_config(
        source={
            "sites": 3, "depth": 6, "rate": 0.2, "seed": 1, "realizations": 2,
            "delta_err": 1e-4, "trace_errors": True, "bound": False,
        },
        mode="circuit",
        out_dir=str(tmp_path),
    )
    manifest = run(config)
    data = read_csv(tmp_path / "circuit.csv")
    assert data.kind == "error-trace"
    assert list(data.columns) == [
        "t", "l2_norm", "l2_err", "l1_err", "lambda", "delta_sum", "max_rank",
    ]
    entry = manifest["children"][0]
    assert entry["renorm_checks"] > 0
    assert entry["trunc_bound_ratio_max"] <= 1.0


def test_run_circuit_sweep_files(tmp_path):
    config = parse_config(
        source={"sites": [3, 4], "depth": 3, "rate": 0.2, "seed": 5,
                "realizations": 1},
        mode="circuit",
        out_dir=str(tmp_path),
    )
    manifest = run(config)
    assert (tmp_path / "circuit_N3_p0.2.csv").exists()
    assert (tmp_path / "circuit_N4_p0.2.csv").exists()
    seeds = [c["seed"] for c in manifest["children"]]
    assert seeds == [child_seed(5, 0), child_seed(5, 1)]


def test_run_lindblad_modes(tmp_path):
    config = parse_config(
        source={"sites": 3, "total_time": 0.25, "dt": 0.05, "kappa": 0.2},
        mode="lindblad",
        out_dir=str(tmp_path),
    )
    run(config)
    data = read_csv(tmp_path / "lindblad.csv")
    assert data.kind == "norm-decay"
    assert data.n_rows == 5
    tr_dir = tmp_path / "trace"
    config2 = parse_config(
        source={
            "sites": 3, "total_time": 0.25, "dt": 0.05, "kappa": 0.4,
            "noise": "amplitude-damping", "delta_err": 1e-5,
            "trace_errors": True, "contraction": 0.5,
        },
        mode="lindblad",
        out_dir=str(tr_dir),
    )
    run(config2)
    data2 = read_csv(tr_dir / "lindblad.csv")
    assert data2.kind == "error-trace"
    assert "bound" in data2.columns
    assert np.all(data2.columns["bound"] >= 0.0)


def test_run_fit_mode(tmp_path):
    csv_path = tmp_path / "decay.csv"
    t = np.arange(1, 41, dtype=float)
    v = np.maximum(-0.05 * t, -0.5)
    write_csv(csv_path, "norm-decay", [("t", t), ("log2_norm_per_site", v)], {})
    config = parse_config(
        source={"input": str(csv_path)}, mode="fit", out_dir=str(tmp_path)
    )
    manifest = run(config)
    fit = manifest["children"][0]["fit"]
    assert fit["gamma"] == pytest.approx(0.05, rel=1e-6)
    assert fit["lam"] == pytest.approx(0.5, rel=1e-6)
    # wrong CSV kind is a config error
    wrong = tmp_path / "wrong.csv"
    write_csv(wrong, "sop", [("t", t), ("s_op", v)], {})
    with pytest.raises(ConfigError, match="kind"):
        run(parse_config(source={"input": str(wrong)}, mode="fit",
                         out_dir=str(tmp_path)))
    empty = tmp_path / "empty.csv"
    write_csv(empty, "norm-decay", [("t", []), ("log2_norm_per_site", [])], {})
    with pytest.raises(ConfigError, match="no data rows"):
        run(parse_config(source={"input": str(empty)}, mode="fit",
                         out_dir=str(tmp_path)))


def test_run_sop_mode(tmp_path):
    config = parse_config(
        source={"dynamics": "circuit", "sites": 3, "depth": 4, "rate": 0.2,
                "delta_err": 1e-6},
        mode="sop",
        out_dir=str(tmp_path),
    )
    manifest = run(config)
    data = read_csv(tmp_path / "sop.csv")
    assert data.kind == "sop"
    assert data.columns["t"][0] == 0.0  # sop series keeps the t = 0 row
    assert data.columns["s_op"][0] == 0.0
    assert manifest["children"][0]["max_s_op"] >= 0.0


def test_run_nscale_mode(tmp_path):
    config = parse_config(
        source={"sites": [2, 3], "depth": 2, "rate": 0.3, "delta_err": 1e-3,
                "realizations": 2},
        mode="nscale",
        out_dir=str(tmp_path),
    )
    manifest = run(config)
    data = read_csv(tmp_path / "nscale.csv")
    assert data.kind == "nscale"
    np.testing.assert_array_equal(data.columns["sites"], [2.0, 3.0])
    assert manifest["children"][0]["origin_slope"] > 0.0


def test_run_dump_state(tmp_path):
    config = parse_config(
        source={"sites": 3, "depth": 3, "rate": 0.2, "seed": 0,
                "realizations": 1},
        mode="circuit",
        out_dir=str(tmp_path),
        dump_state=True,
    )
    manifest = run(config)
    state_file = tmp_path / "circuit_state.npz"
    assert state_file.exists()
    assert manifest["children"][0]["state"] == "circuit_state.npz"
    loaded = DensityMPS.load(state_file)
    assert loaded.sites == 3
    assert loaded.trace() == pytest.approx(1.0, abs=1e-10)


def test_main_success_and_artifacts(tmp_path, capsys):
    code = main([
        "--mode", "pure-noise", "--out", str(tmp_path), "--seed", "1",
    ])
    assert code == 0
    assert (tmp_path / "pure-noise.csv").exists()
    assert capsys.readouterr().err == ""


def test_main_config_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"rate": 1.5}))
    code = main(["--mode", "circuit", "--config", str(bad), "--out", str(tmp_path)])
    assert code == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ConfigError"
    assert "rate" in err["message"]


def test_main_missing_config_file(tmp_path, capsys):
    code = main([
        "--mode", "circuit", "--config", str(tmp_path / "nope.json"),
        "--out", str(tmp_path),
    ])
    assert code == 10
    assert json.loads(capsys.readouterr().err)["error"] == "FileNotFoundError"


def test_main_numeric_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"total_time": 1.03, "dt": 0.05, "sites": 3}))
    code = main(["--mode", "lindblad", "--config", str(bad), "--out", str(tmp_path)])
    assert code == 4
    assert json.loads(capsys.readouterr().err)["error"] == "NumericError"


def test_main_invalid_workers(tmp_path, capsys):
    code = main(["--mode", "pure-noise", "--out", str(tmp_path), "--workers", "0"])
    assert code == 2
    assert "workers" in json.loads(capsys.readouterr().err)["message"]
