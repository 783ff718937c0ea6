import json
import os
from math import pi

import numpy as np
import pytest
from scipy import stats

from source.core.grid import Axis
from source.core.samplers import sample_spectra
from source.core.spaces import Domain
from source.derivative import derivative_principle_herm
from source.errors import ConfigurationError, DataError, DomainMismatchError
from source.verify import (
    DistanceKind, calibrate_l1_threshold, compare, empirical_density, gue2_level_density, marginal_level_density,
    mc_mean_report, prove_identity, run_all, run_suite, two_sample_report,
)
from source.verify.compare import bin_masses, make_report
from source.verify.suites import SuiteContext, one_value_per_sample, symmetrized
from source.verify.verify_utils import make_key, write_reports
from source.weights import WeightFunction
from source.weights.library import builtin_spec, cue_density, gaussian_diagonal_weight, gue_density

GUE_AXIS = Axis(-4.0, 4.0, 9)


@pytest.fixture(scope="module")
def gue_histogram():
    sample = sample_spectra(builtin_spec("gue", 2), 200_000, seed=31)
    return sample, empirical_density(symmetrized(sample.values), GUE_AXIS)


# -----------
# EMPIRICAL DENSITIES
# -----------
def test_empty_samples():
    with pytest.raises(DataError):
        empirical_density(np.empty((0, 2)))
    with pytest.raises(DataError):
        empirical_density([])


def test_constant_sample_fills_one_bin():
    emp = empirical_density(np.full((100, 1), 2.0))
    assert emp.meta["masses"].sum() == pytest.approx(1.0)
    assert emp.meta["outside"] == pytest.approx(0.0)


def test_exponential_histogram(rng):
    axis = Axis(0.25, 4.75, 10)
    emp = empirical_density(rng.exponential(1.0, (50_000, 1)), axis, Domain.HALF_LINE)
    expected = bin_masses(lambda x: stats.expon.pdf(x[:, 0]), (axis,)) / axis.step
    assert np.all(np.abs(emp.values - expected) <= 4 * emp.meta["stderr"] + 1e-12)


def test_binning_must_match_dimension(rng):
    with pytest.raises(DataError):
        empirical_density(rng.standard_normal((100, 2)), (GUE_AXIS,))


# -----------
# COMPARISONS
# -----------
def test_identical_histograms(gue_histogram):
    _, emp = gue_histogram
    report = compare(emp, emp, DistanceKind.L1_HISTOGRAM)
    assert report.statistic == pytest.approx(0.0, abs=1e-12)
    assert report.passed


def test_gue_samples_match_principle(gue_histogram):
    sample, emp = gue_histogram
    predicted = derivative_principle_herm(gaussian_diagonal_weight(2))
    assert compare(predicted, emp, DistanceKind.L1_HISTOGRAM).passed
    level = compare(gue2_level_density, one_value_per_sample(sample.values, np.random.default_rng(32)),
                    DistanceKind.KS, support=(-9.0, 9.0))
    assert level.passed and level.samples_used == 200_000


def test_wrong_variance_fails(gue_histogram):
    _, emp = gue_histogram
    report = compare(gue_density(2, variance=1.5), emp, DistanceKind.L1_HISTOGRAM)
    assert not report.passed
    assert report.statistic > 0.1


def test_compare_errors(gue_histogram, rng):
    _, emp = gue_histogram
    with pytest.raises(DomainMismatchError):
        compare(gue_density(3), emp, DistanceKind.L1_HISTOGRAM)
    with pytest.raises(DomainMismatchError):
        compare(WeightFunction.gamma_product(2), emp, DistanceKind.L1_HISTOGRAM)
    with pytest.raises(DataError):
        compare(gue_density(2), rng.standard_normal((100, 2)), DistanceKind.L1_HISTOGRAM)
    with pytest.raises(DomainMismatchError):
        compare(gue2_level_density, rng.standard_normal((100, 2)), DistanceKind.KS)


def test_two_sample(rng):
    assert two_sample_report("same law", rng.standard_normal(5000), rng.standard_normal(5000)).passed
    assert not two_sample_report("shifted", rng.standard_normal(5000), rng.standard_normal(5000) + 0.5).passed


def test_report_thresholds():
    assert not make_report("nan", DistanceKind.MAX_ABS, float("nan"), 1.0).passed
    assert make_report("edge", "MaxAbs", 1.0, 1.0).passed
    exact = mc_mean_report("exact mean", 1.0, 0.0, 1.0, 10)
    assert exact.passed and exact.statistic == 0.0
    record = make_report("dict", DistanceKind.KS, 0.1, 0.2, samples=3, seed=[1, 2]).to_dict()
    assert record["pass"] is True and record["distance_kind"] == "KS"


# -----------
# MARGINALS
# -----------
def test_gue_level_density():
    level = marginal_level_density(gue_density(2), Axis(-4.0, 4.0, 81))
    assert np.abs(level.values - gue2_level_density(level.axes[0].nodes)).max() < 1e-6


def test_cue_level_density_is_flat():
    level = marginal_level_density(cue_density(2), Axis(-pi, pi, 16, periodic=True))
    assert np.allclose(level.values, 1 / (2 * pi), atol=1e-10)


def test_marginal_limits():
    with pytest.raises(ConfigurationError):
        marginal_level_density(gue_density(4), Axis(-1.0, 1.0, 3))
    with pytest.raises(ConfigurationError):
        marginal_level_density(lambda x: np.ones(len(x)), Axis(-1.0, 1.0, 3))


# -----------
# EXACT IDENTITIES
# -----------
def test_identity_proven():
    proof = prove_identity(derivative_principle_herm(gaussian_diagonal_weight(2)), gue_density(2))
    assert proof.proven and proof.status == "proven"


def test_identity_refuted():
    proof = prove_identity(gue_density(2), gue_density(2).scale(2))
    assert not proof.proven
    assert proof.status == "refuted"
    assert proof.counterexample is not None


def test_identity_domain_mismatch():
    with pytest.raises(DomainMismatchError):
        prove_identity(gue_density(2), gue_density(3))


# -----------
# RUNS AND REPORTS
# -----------
def test_suite_context_budget():
    with pytest.raises(ConfigurationError):
        SuiteContext(0, 1)
    assert SuiteContext(50, 3).capped(100) == 50


def test_unknown_suite(tmp_path):
    with pytest.raises(ConfigurationError):
        run_suite("orthogonal", 10, output_dir=str(tmp_path))


def test_write_reports(tmp_path):
    key = make_key("herm", 1000, 1, negative_control=True)
    assert key == "herm_b1000_s1_neg"
    reports = [make_report("a", DistanceKind.MAX_ABS, 0.0, 1.0), make_report("b", DistanceKind.KS, 2.0, 1.0)]
    path = write_reports(str(tmp_path), key, reports, {"suite": "herm"})
    with open(path) as f:
        records = [json.loads(line) for line in f]
    assert records[0]["record"] == "meta" and records[0]["command"] == "verify"
    assert [r["pass"] for r in records[1:]] == [True, False]


@pytest.mark.slow
def test_herm_suite_at_full_budget(tmp_path):
    reports, path = run_suite("herm", 100_000, seed=1, output_dir=str(tmp_path))
    assert all(r.passed for r in reports), [r.test_name for r in reports if not r.passed]


@pytest.mark.slow
def test_negative_control_fails(tmp_path):
    reports, _ = run_suite("herm", 100_000, seed=1, negative=True, output_dir=str(tmp_path))
    assert not reports[-1].passed


def test_calibrate_l1_threshold():
    axis = Axis(-4.0, 4.0, 17)
    threshold, statistics = calibrate_l1_threshold(
        lambda x: stats.norm.pdf(x[:, 0]), lambda count, rng: rng.standard_normal((count, 1)), axis, 5_000,
        repeats=10, quantile=0.9, seed=3,
    )
    assert statistics.shape == (10,)
    assert np.quantile(statistics, 0.5) <= threshold <= statistics.max()
    assert 0 < threshold < 0.2


@pytest.mark.slow
def test_run_all(tmp_path):
    reports, path = run_all(100_000, seed=1, output_dir=str(tmp_path))
    assert reports and os.path.exists(path)
    assert os.path.basename(path).startswith("all_b100000_s1")
