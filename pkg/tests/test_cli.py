import json
from math import pi

import numpy as np
import pytest

import report_checker
from entrypoint import EXIT_DOMAIN, EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main
from source.core.spaces import Domain
from source.weights import GaussAtom, WeightFunction
from source.weights.library import gue_density, wishart_density


def read_output(path):
    header, columns, rows = report_checker.read_csv_header(str(path))
    return header, columns, np.array(rows, dtype=float)


# -----------
# SAMPLE
# -----------
def test_sample_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sample", "--space", "herm", "--n", "2", "--count", "50", "--seed", "3"]
    assert main(args + ["--out", str(a)]) == EXIT_OK
    assert main(args + ["--out", str(b)]) == EXIT_OK
    assert a.read_text() == b.read_text()
    header, columns, rows = read_output(a)
    assert columns == ["x1", "x2"]
    assert rows.shape == (50, 2)
    assert json.loads(header["config"])["seed"] == 3


def test_sample_with_angles(tmp_path):
    out = tmp_path / "unitary.csv"
    args = ["sample", "--space", "unitary", "--density", "haar", "--n", "3", "--count", "20", "--coords", "angles",
            "--out", str(out)]
    assert main(args) == EXIT_OK
    _, columns, rows = read_output(out)
    assert columns[:4] == ["x1", "x2", "x3", "alpha_1"]
    assert rows.shape == (20, 12)
    assert np.all(np.abs(rows[:, :3]) <= pi)


def test_sample_appendix_b_coordinates(tmp_path):
    out = tmp_path / "unitary.csv"
    args = ["sample", "--space", "unitary", "--n", "3", "--density", "haar", "--coords", "appendixB",
            "--count", "5", "--seed", "4", "--out", str(out)]
    assert main(args) == EXIT_OK
    _, columns, rows = read_output(out)
    assert "alpha_1" in columns
    assert rows.shape == (5, 12)


def test_sample_usage_errors(tmp_path):
    out = str(tmp_path / "x.csv")
    assert main(["sample", "--space", "herm", "--n", "2", "--coords", "angles", "--out", out]) == EXIT_USAGE
    assert main(["sample", "--space", "herm", "--n", "2", "--count", "0", "--out", out]) == EXIT_USAGE
    assert main(["sample", "--space", "herm"]) == EXIT_USAGE


# -----------
# DENSITY
# -----------
def test_gue_density_is_normalised(tmp_path):
    out = tmp_path / "gue.csv"
    assert main(["density", "--builtin", "gue", "--n", "2", "--grid", "-5", "5", "201", "--out", str(out)]) == EXIT_OK
    header, columns, rows = read_output(out)
    assert columns == ["x1", "x2", "density"]
    assert float(header["normalization"]) == pytest.approx(1.0, abs=1e-3)
    assert rows.shape == (201 * 201, 3)


def test_density_empty_grid(tmp_path):
    args = ["density", "--builtin", "gue", "--n", "2", "--grid", "-5", "5", "0", "--out", str(tmp_path / "x.csv")]
    assert main(args) == EXIT_USAGE


def test_cue_density_value(tmp_path):
    out = tmp_path / "cue.csv"
    assert main(["density", "--builtin", "cue", "--n", "2", "--grid", "0", str(2 * pi), "2", "--out", str(out)]) == EXIT_OK
    _, _, rows = read_output(out)
    row = rows[np.isclose(rows[:, 0], 0.0) & np.isclose(rows[:, 1], pi)][0]
    assert row[2] == pytest.approx(1 / (2 * pi ** 2))


def test_asymmetric_weight_file(tmp_path):
    weight = tmp_path / "skew.json"
    WeightFunction(Domain.REAL_LINE, 2, [(1.0, (GaussAtom(1, 0.5), GaussAtom(0, 0.5)))]).save(weight)
    args = ["density", "--space", "herm", "--weight-file", str(weight), "--out", str(tmp_path / "x.csv")]
    assert main(args) == EXIT_DOMAIN


def test_weight_file_needs_space(tmp_path):
    weight = tmp_path / "normal.json"
    WeightFunction.gaussian_product(2).save(weight)
    assert main(["density", "--weight-file", str(weight), "--out", str(tmp_path / "x.csv")]) == EXIT_USAGE


def test_wishart_density_with_dof(tmp_path):
    out = tmp_path / "wishart.csv"
    args = ["density", "--builtin", "wishart", "--n", "2", "--dof", "3", "--grid", "0.2", "6", "9", "--out", str(out)]
    assert main(args) == EXIT_OK
    _, _, rows = read_output(out)
    assert np.allclose(rows[:, 2], wishart_density(2, 3)(rows[:, :2]), rtol=1e-8, atol=1e-12)
    args = ["density", "--builtin", "gue", "--n", "2", "--dof", "3", "--out", str(tmp_path / "x.csv")]
    assert main(args) == EXIT_USAGE


def test_builtin_on_another_space(tmp_path):
    args = ["density", "--space", "herm", "--builtin", "lue", "--n", "2", "--out", str(tmp_path / "x.csv")]
    assert main(args) == EXIT_DOMAIN


# -----------
# CONVOLVE
# -----------
def test_convolve_gue(tmp_path):
    out = tmp_path / "sum.csv"
    args = ["convolve", "--space", "herm", "--n", "2", "--weight-a", "gue", "--weight-b", "gue",
            "--grid", "-3", "3", "7", "--out", str(out)]
    assert main(args) == EXIT_OK
    _, _, rows = read_output(out)
    expected = gue_density(2, variance=2.0)(rows[:, :2])
    assert np.allclose(rows[:, 2], expected, rtol=1e-6, atol=1e-12)


def test_convolve_domain_mismatch(tmp_path):
    weight = tmp_path / "gamma.json"
    WeightFunction.gamma_product(2).save(weight)
    args = ["convolve", "--space", "herm", "--n", "2", "--weight-a", "gue", "--weight-b", str(weight),
            "--out", str(tmp_path / "x.csv")]
    assert main(args) == EXIT_DOMAIN


def test_convolve_builtin_of_another_space(tmp_path):
    args = ["convolve", "--space", "herm", "--n", "2", "--weight-a", "gue", "--weight-b", "lue",
            "--grid", "-3", "3", "7", "--out", str(tmp_path / "x.csv")]
    assert main(args) == EXIT_DOMAIN
    assert not (tmp_path / "x.csv").exists()


# -----------
# VERIFY
# -----------
def test_verify_zero_budget(tmp_path):
    args = ["verify", "--suite", "herm", "--budget", "0", "--out", str(tmp_path / "r.jsonl")]
    assert main(args) == EXIT_USAGE


@pytest.mark.slow
def test_verify_herm(tmp_path):
    out = tmp_path / "herm.jsonl"
    assert main(["verify", "--suite", "herm", "--budget", "1e5", "--seed", "1", "--out", str(out)]) == EXIT_OK
    errors, count, failed = report_checker.check_jsonl(str(out))
    assert not errors and count > 0 and failed == 0


@pytest.mark.slow
def test_verify_negative_control(tmp_path):
    out = tmp_path / "neg.jsonl"
    args = ["verify", "--suite", "herm", "--budget", "1e5", "--seed", "1", "--negative-control", "--out", str(out)]
    assert main(args) == EXIT_FAILURE
