import json
import math
import os
import subprocess
import sys

import pytest
from typer.testing import CliRunner

from bregman_info import environment
from bregman_info.cli import app
from bregman_info.commands import executor_for
from bregman_info.constants import DEFAULT_METRIC_SCALES, DEFAULT_RESTARTS, GENERATOR_NAMES
from bregman_info.models.run_config import CommandName

runner = CliRunner()


@pytest.fixture
def report_path(tmp_path):
    return tmp_path / "report.json"


def write_csv(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return path


def invoke(*args):
    return runner.invoke(app, [str(arg) for arg in args])


def load(path):
    return json.loads(path.read_text(encoding='utf-8'))


def test_certify_bregman_of_generator(report_path):
    result = invoke("certify", "--generator", "sqnorm", "--gen-param", "dim=2", "--seed", 42,
                    "--trials", 1000, "--output", report_path)
    assert result.exit_code == 0
    report = load(report_path)
    assert report["verdict"] == "ConsistentWithBregman"
    assert report["trials_run"] == 1000
    assert report["max_abs_gap"] <= 1e-9
    assert report["counterexample"] is None
    assert report["config"]["seed"] == 42
    assert report_path.with_name("report.json.meta.json").is_file()


def test_certify_refutes_the_absolute_distance(report_path):
    result = invoke("certify", "--generator", "sqnorm", "--gen-param", "dim=1", "--divergence", "abs-distance",
                    "--seed", 7, "--trials", 200, "--output", report_path)
    assert result.exit_code == 1
    report = load(report_path)
    assert report["verdict"] == "RefutedWithCounterexample"
    counterexample = report["counterexample"]
    assert counterexample["replayed"]
    assert abs(counterexample["gap"]) > report["tolerance_used"]
    assert math.isclose(sum(counterexample["mu"]), 1.0, abs_tol=1e-12)


def test_certify_is_reproducible(report_path):
    args = ("certify", "--generator", "negentropy", "--gen-param", "dim=3", "--divergence", "scaled-bregman",
            "--seed", 3, "--trials", 50, "--output", report_path)
    first = invoke(*args)
    text = report_path.read_bytes()
    second = invoke(*args)
    assert first.exit_code == second.exit_code == 1
    assert report_path.read_bytes() == text


def test_info_on_a_single_row(tmp_path, report_path):
    data = write_csv(tmp_path, "one.csv", "3.0,4.0\n")
    result = invoke("info", "--generator", "sqnorm", "--input", data, "--output", report_path)
    assert result.exit_code == 0
    report = load(report_path)
    assert report["I_phi"] == 0.0
    assert report["I_d"] == 0.0
    assert report["dimension"] == 2
    assert report["centroid"] == [3.0, 4.0]


def test_info_reads_and_renormalizes_a_weight_column(tmp_path, report_path):
    data = write_csv(tmp_path, "weighted.csv", "weight,x\n1,0\n3,4\n")
    result = invoke("info", "--generator", "sqnorm", "--input", data, "--output", report_path)
    assert result.exit_code == 0
    report = load(report_path)
    assert report["rows"] == 2
    assert report["centroid"] == pytest.approx([3.0])
    assert report["I_phi"] == pytest.approx(1.5)
    assert report["I_d"] == pytest.approx(1.5)
    assert report["euclidean_lhs"] == pytest.approx(report["euclidean_rhs"])


def test_info_centroid_on_the_boundary_is_a_numerical_failure(tmp_path, report_path):
    data = write_csv(tmp_path, "boundary.csv", "0,0.5,0.5\n0,0.3,0.7\n")
    result = invoke("info", "--generator", "negentropy", "--divergence", "kl", "--input", data,
                    "--output", report_path)
    assert result.exit_code == 3
    assert load(report_path)["error"]["kind"] == "CentroidNotInterior"


def test_unknown_generator_lists_the_known_ones(report_path):
    result = invoke("certify", "--generator", "cosh", "--output", report_path)
    assert result.exit_code == 2
    error = load(report_path)["error"]
    assert error["exit_code"] == 2
    for name in GENERATOR_NAMES:
        assert name in error["message"]


def test_missing_input_is_an_input_error(report_path):
    result = invoke("info", "--generator", "sqnorm", "--output", report_path)
    assert result.exit_code == 2
    assert "--input" in load(report_path)["error"]["message"]


def test_nonsymmetric_matrix_is_rejected(tmp_path, report_path):
    W = write_csv(tmp_path, "W.csv", "1,2\n0,1\n")
    result = invoke("certify", "--generator", "mahalanobis", "--gen-param", f"W={W}", "--trials", 10,
                    "--output", report_path)
    assert result.exit_code == 2
    assert load(report_path)["error"]["kind"] == "NonSymmetric"


def test_mutual_information_of_a_copied_bit(tmp_path, report_path):
    joint = write_csv(tmp_path, "joint.csv", "weight,b0,b1\n0.5,1,0\n0.5,0,1\n")
    result = invoke("mi", "--input", joint, "--output", report_path)
    assert result.exit_code == 0
    report = load(report_path)
    assert report["entropy_reduction"] == pytest.approx(math.log(2.0), abs=1e-12)
    assert report["divergence_form"] == pytest.approx(math.log(2.0), abs=1e-12)
    assert report["negentropy_jensen_gap"] == pytest.approx(math.log(2.0), abs=1e-12)
    assert report["column_marginal"] == pytest.approx([0.5, 0.5])


def test_mutual_information_of_independent_variables(tmp_path, report_path):
    joint = write_csv(tmp_path, "joint.csv", "0.3,0.2,0.8\n0.7,0.2,0.8\n")
    result = invoke("mi", "--input", joint, "--output", report_path)
    assert result.exit_code == 0
    assert load(report_path)["entropy_reduction"] == pytest.approx(0.0, abs=1e-12)


def test_cluster_command(tmp_path, report_path):
    data = write_csv(tmp_path, "blobs.csv", "x,y\n0,0\n0.5,0\n0,0.5\n10,10\n10.5,10\n10,10.5\n")
    result = invoke("cluster", "--generator", "sqnorm", "--input", data, "--k", 2, "--seed", 1,
                    "--restarts", 3, "--output", report_path)
    assert result.exit_code == 0
    state = load(report_path)["state"]
    labels = state["assignments"]
    assert len(set(labels[:3])) == 1 and len(set(labels[3:])) == 1 and labels[0] != labels[3]
    assert state["loss"] == pytest.approx(state["jensen_form_loss"], abs=1e-10)


def test_cluster_needs_k(tmp_path, report_path):
    data = write_csv(tmp_path, "points.csv", "0\n1\n")
    result = invoke("cluster", "--generator", "sqnorm", "--input", data, "--output", report_path)
    assert result.exit_code == 2


def test_metric_check_on_the_simplex(tmp_path, report_path):
    pair = write_csv(tmp_path, "pair.csv", "0.5,0.5\n1,-1\n")
    result = invoke("metric-check", "--generator", "negentropy", "--input", pair, "--output", report_path)
    assert result.exit_code == 0
    report = load(report_path)
    ratios = [entry["ratio"] for entry in report["ratios"]]
    assert len(ratios) == len(DEFAULT_METRIC_SCALES)
    assert ratios[-1] < ratios[0]
    assert report["hessian"]["min_eigenvalue"] > 0


@pytest.mark.parametrize("module", ["bregman_info.core", "bregman_info.clustering", "bregman_info.cli"])
def test_submodules_import_in_a_fresh_interpreter(module):
    env = dict(os.environ, PYTHONPATH=os.pathsep.join(path for path in sys.path if path))
    completed = subprocess.run([sys.executable, "-c", f"import {module}"], env=env, capture_output=True, text=True)
    assert completed.returncode == 0, completed.stderr


def test_every_command_has_an_executor():
    for command in CommandName:
        assert callable(executor_for(command))


def test_invalid_environment_default_is_an_input_error(tmp_path, report_path, monkeypatch):
    monkeypatch.setattr(environment, "DEFAULT_TRIALS", "abc")
    data = write_csv(tmp_path, "data.csv", "0\n1\n")
    result = invoke("info", "--generator", "sqnorm", "--input", data, "--output", report_path)
    assert result.exit_code == 2
    error = load(report_path)["error"]
    assert error["kind"] == "ConfigurationError"
    assert "BREGMAN_TRIALS" in error["message"]


@pytest.mark.parametrize("command, extra", [
    ("certify", ["--trials", 5]),
    ("cluster", ["--k", 1]),
    ("metric-check", []),
])
def test_every_command_accepts_the_log_base(tmp_path, report_path, command, extra):
    text = "0.5,0.5\n1,-1\n" if command == "metric-check" else "0.2,0.8\n0.6,0.4\n"
    data = write_csv(tmp_path, "data.csv", text)
    args = [command, "--generator", "negentropy", "--log-base", "nat", "--output", report_path, *extra]
    if command != "certify":
        args += ["--input", data]
    assert invoke(*args).exit_code == 0
    assert load(report_path)["config"]["log_base"] == "nat"
    args[args.index("nat")] = "bits"
    assert invoke(*args).exit_code == 2


def test_cluster_uses_the_default_restarts(tmp_path, report_path):
    data = write_csv(tmp_path, "points.csv", "0\n1\n9\n10\n")
    assert invoke("cluster", "--generator", "sqnorm", "--input", data, "--k", 2, "--output", report_path).exit_code == 0
    assert load(report_path)["restarts"] == DEFAULT_RESTARTS
