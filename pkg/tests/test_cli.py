import json

import numpy as np
import pytest

from poissonlie.cli import main
from poissonlie.report import SuiteConfig, run_suite


def test_factor_roundtrip(tmp_path, capsys):
    matrix = [[[2.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]
    path = tmp_path / "m.json"
    path.write_text(json.dumps(matrix))
    rc = main(["factor", "--matrix", str(path)])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["reassembly_residual"] <= 1e-12
    x = payload["x_cartan"]
    assert x[0][0][0] == pytest.approx(np.log(2.0))


def test_factor_outside_big_cell(tmp_path, capsys):
    matrix = [[[0.0, 0.0], [1.0, 0.0]], [[-1.0, 0.0], [0.0, 0.0]]]
    path = tmp_path / "m.json"
    path.write_text(json.dumps(matrix))
    rc = main(["factor", "--matrix", str(path)])
    assert rc == 1
    payload = json.loads(capsys.readouterr().out)
    assert "big cell" in payload["error"]


def test_kernel_csv(tmp_path):
    out = tmp_path / "kernel.csv"
    rc = main(["kernel", "--rank", "1", "--p", "0.5", "--modes", "4", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].split(",")[0] == "n"
    assert len(lines) == 1 + 9   # modes -4..4
    row = dict(zip(lines[0].split(","), lines[5].split(",")))  # n = 0
    assert abs(float(row["re_00"])) < 1e-12


def test_kernel_elliptic_csv(tmp_path):
    out = tmp_path / "elliptic.csv"
    rc = main(["kernel", "--rank", "2", "--p", "0.1", "--elliptic", "--samples", "8",
               "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 9


def test_solve_k_json(capsys):
    rc = main(["solve-k", "--rank", "2"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["equation_residual"] <= 1e-12
    k = np.array([[complex(*pair) for pair in row] for row in payload["matrix"]])
    eig = np.linalg.eigvals(k)
    assert min(abs(e - 0.25j / np.sqrt(3)) for e in eig) < 1e-12


def test_solve_a_json(capsys):
    rc = main(["solve-a", "--rank", "2", "--theta-prime", "square"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["equation_residual"] <= 1e-10


def test_reduce_json(capsys):
    rc = main(["reduce", "--rank", "1", "--seed", "5"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["first_class_residual"] <= 1e-9
    assert payload["dual_pair_residual"] <= 1e-10
    assert payload["slice"]["converged"]
    assert payload["slice"]["nprime_dimension"] == 1
    assert payload["anz_pullback_residual"] <= 1e-10


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "suite.cfg"
    cfg.write_text("rank = 1\nseed = 7\np = 0.25\nmodes = 6\n")
    rc = main(["solve-k", "--config", str(cfg)])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    # rank 1 conjugation operator vanishes
    assert np.allclose([[complex(*pair) for pair in row] for row in payload["matrix"]], 0.0)


def test_invalid_config_rejected(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("p = 1.5\n")
    with pytest.raises(SystemExit):
        main(["solve-k", "--config", str(cfg)])


def test_report_determinism():
    config = SuiteConfig(seed=11)
    a = run_suite(config).to_json(include_times=False)
    b = run_suite(config).to_json(include_times=False)
    assert a == b


def test_report_tolerance_override():
    config = SuiteConfig(seed=11, overrides={"mcybe_coxeter": 1e-20})
    report = run_suite(config)
    by_name = {c.name: c for c in report.checks}
    assert not by_name["mcybe_coxeter"].passed
    assert not report.passed


def test_kernel_dilation_csv(tmp_path):
    out = tmp_path / "dilation.csv"
    rc = main(["kernel", "--rank", "1", "--theta", "dilation:0.2", "--modes", "4",
               "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().splitlines()
    row0 = dict(zip(lines[0].split(","), lines[5].split(",")))
    assert abs(float(row0["re_00"])) < 1e-12


def test_factor_rejects_dilation_theta(tmp_path):
    matrix = [[[2.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]
    path = tmp_path / "m.json"
    path.write_text(json.dumps(matrix))
    with pytest.raises(SystemExit):
        main(["factor", "--theta", "dilation:0.2", "--matrix", str(path)])
