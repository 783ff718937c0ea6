"""
Comparisons between predicted densities and Monte Carlo samples, each reduced to one ComparisonReport.
"""
import logging
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np
from scipy import stats

from source.core.grid import Axis, GridDensity
from source.core.spaces import Domain
from source.errors import DataError, DomainMismatchError
from source.transforms.quadrature import gauss_legendre, tensor_rule
from source.verify.empirical import bin_edges, bin_volume, collect_values, empirical_density
from source.weights.weight_function import WeightFunction

logger = logging.getLogger(__name__)

KS_ALPHA = 0.001
CHI2_ALPHA = 0.001
L1_THRESHOLD = 0.03
MOMENT_Z = 3.0
BIN_ORDER = 6


class DistanceKind(str, Enum):
    KS = "KS"
    L1_HISTOGRAM = "L1_histogram"
    CHI2 = "Chi2"
    MOMENT_Z = "MomentZ"
    MAX_ABS = "MaxAbs"
    EXACT = "Exact"


@dataclass
class ComparisonReport:
    test_name: str
    samples_used: int
    distance_kind: DistanceKind
    statistic: float
    threshold: float
    passed: bool
    seed: object = None
    details: dict = field(default_factory=dict)

    def to_dict(self):
        out = asdict(self)
        out["distance_kind"] = DistanceKind(self.distance_kind).value
        out["pass"] = bool(out.pop("passed"))
        out["statistic"] = float(self.statistic)
        out["threshold"] = float(self.threshold)
        return out


def make_report(test_name, kind, statistic, threshold, samples=0, seed=None, **details):
    """pass <=> statistic <= threshold, for every distance kind."""
    statistic = float(statistic)
    passed = bool(np.isfinite(statistic) and statistic <= threshold)
    report = ComparisonReport(test_name, int(samples), DistanceKind(kind), statistic, float(threshold), passed,
                              seed, details)
    logger.info("%s [%s]: %.4g vs %.4g -> %s", test_name, report.distance_kind.value, statistic, threshold,
                "pass" if passed else "FAIL")
    return report


# -----------
# HELPERS
# -----------
def _domain_of(predicted):
    if isinstance(predicted, WeightFunction):
        return predicted.domain, predicted.n
    if isinstance(predicted, GridDensity):
        return predicted.domain[0], predicted.n
    return None, None


def _check_compatible(predicted, empirical: GridDensity):
    domain, n = _domain_of(predicted)
    if n is not None and n != empirical.n:
        raise DomainMismatchError(f"{n}-dimensional prediction against {empirical.n}-dimensional samples")
    if domain is not None and domain != empirical.domain[0]:
        raise DomainMismatchError(f"{domain.value} prediction against {empirical.domain[0].value} samples")


def bin_masses(predicted, axes, order=BIN_ORDER):
    """
    Predicted probability of every bin (bins centred on the axis nodes), Gauss-Legendre per bin.
    A GridDensity on the same axes gives its values times the bin volume.
    """
    axes = tuple(axes)
    if isinstance(predicted, GridDensity) and predicted.axes == axes:
        return np.real(predicted.values) * bin_volume(axes)
    edges = [bin_edges(a) for a in axes]
    per_axis = [[gauss_legendre(lo, hi, order) for lo, hi in zip(e[:-1], e[1:])] for e in edges]
    shape = tuple(a.count for a in axes)
    out = np.empty(shape)
    for index in np.ndindex(*shape):
        points, weights = tensor_rule([per_axis[j][i] for j, i in enumerate(index)])
        out[index] = float(np.real(np.sum(np.asarray(predicted(points)) * weights)))
    return out


def _cdf_from_density(density, lo, hi, count=4001):
    x = np.linspace(lo, hi, count)
    pdf = np.real(np.asarray(density(x[:, None]))).ravel()
    cdf = np.concatenate([[0.0], np.cumsum((pdf[1:] + pdf[:-1]) / 2 * np.diff(x))])
    total = cdf[-1] if cdf[-1] > 0 else 1.0
    return lambda t: np.interp(t, x, cdf / total)


def ks_critical_value(count, alpha=KS_ALPHA):
    return float(stats.kstwo.ppf(1 - alpha, count))


# -----------
# COMPARE
# -----------
def compare(predicted, empirical, distance_kind, test_name="comparison", seed=None, threshold=None,
            cdf=None, support=None):
    """
    Reduces a prediction/sample comparison to a report.
    Params:
        predicted: Density callable (WeightFunction, GridDensity or vectorised points -> values)
        empirical: GridDensity from empirical_density (L1_histogram, Chi2) or raw 1-D samples (KS)
        distance_kind: DistanceKind
        test_name: Name recorded in the report
        seed: Seed recorded in the report
        threshold: Override of the default threshold
        cdf: Predicted CDF for KS (built from the density on support otherwise)
        support: (lo, hi) for the KS CDF construction
    Returns:
        ComparisonReport
    """
    kind = DistanceKind(distance_kind)

    if kind == DistanceKind.KS:
        values = collect_values(empirical)
        if values.shape[1] != 1:
            raise DomainMismatchError("KS compares one-dimensional samples")
        values = values[:, 0]
        _, n = _domain_of(predicted)
        if n not in (None, 1):
            raise DomainMismatchError(f"KS against a {n}-dimensional prediction")
        if cdf is None:
            lo, hi = support or (float(values.min()), float(values.max()))
            cdf = _cdf_from_density(predicted, lo, hi)
        result = stats.kstest(values, cdf)
        crit = ks_critical_value(len(values)) if threshold is None else threshold
        return make_report(test_name, kind, result.statistic, crit, len(values), seed, pvalue=float(result.pvalue))

    if not isinstance(empirical, GridDensity) or "masses" not in empirical.meta:
        raise DataError(f"{kind.value} needs a histogram from empirical_density")
    _check_compatible(predicted, empirical)
    masses = empirical.meta["masses"]
    samples = empirical.meta["samples"]
    expected = bin_masses(predicted, empirical.axes)

    if kind == DistanceKind.L1_HISTOGRAM:
        outside = max(0.0, 1.0 - float(expected.sum()))
        statistic = float(np.abs(masses - expected).sum()) + abs(outside - empirical.meta["outside"])
        return make_report(test_name, kind, statistic, L1_THRESHOLD if threshold is None else threshold,
                           samples, seed)

    if kind == DistanceKind.CHI2:
        counts = empirical.meta["counts"].ravel()
        exp_counts = expected.ravel() * samples
        keep = exp_counts >= 5
        observed = counts[keep]
        exp_counts = exp_counts[keep] * observed.sum() / exp_counts[keep].sum()
        result = stats.chisquare(observed, exp_counts)
        return make_report(test_name, kind, 1 - result.pvalue, 1 - CHI2_ALPHA if threshold is None else threshold,
                           samples, seed, chi2=float(result.statistic), pvalue=float(result.pvalue),
                           bins=int(keep.sum()))

    raise DataError(f"compare does not handle {kind.value}; use moment_report or max_abs_report")


def moment_report(test_name, values, expected, seed=None, threshold=MOMENT_Z):
    """z-score |mean - expected| / stderr of a sampled statistic (real or complex)."""
    values = np.asarray(values)
    if values.size < 2:
        raise DataError("a moment test needs at least two samples")
    mean = values.mean()
    stderr = float(np.sqrt(np.var(values.real) + np.var(values.imag)) / np.sqrt(values.size))
    return mc_mean_report(test_name, mean, stderr, expected, values.size, seed, threshold)


def max_abs_report(test_name, actual, expected, threshold, relative=False, seed=None):
    """Largest absolute deviation between two arrays, divided by max |expected| when relative."""
    actual, expected = np.asarray(actual), np.asarray(expected)
    diff = np.abs(actual - expected)
    if relative:
        diff = diff / max(float(np.abs(expected).max()), 1e-300) if diff.size else diff
    statistic = float(diff.max()) if diff.size else 0.0
    return make_report(test_name, DistanceKind.MAX_ABS, statistic, threshold, 0, seed)


def two_sample_report(test_name, a, b, seed=None, alpha=KS_ALPHA):
    """Two-sample KS test, reported as p-value complement against 1 - alpha."""
    result = stats.ks_2samp(np.asarray(a).ravel(), np.asarray(b).ravel())
    return make_report(test_name, DistanceKind.KS, 1 - result.pvalue, 1 - alpha, len(a) + len(b), seed,
                       ks=float(result.statistic), pvalue=float(result.pvalue))


# -----------
# CALIBRATION
# -----------
def calibrate_l1_threshold(predicted, sampler, axes, count, repeats=20, quantile=0.999, seed=0):
    """
    Bootstrap of the L1 histogram statistic under the prediction itself.
    Params:
        predicted: Density callable
        sampler: callable (count, rng) -> samples (count, n) drawn from the prediction's law
        axes: Binning axes
        count: Samples per repeat
        repeats: Bootstrap repeats
        quantile: Reported quantile of the null distribution
    Returns:
        (threshold, statistics)
    """
    rng = np.random.default_rng(seed)
    axes = (axes,) if isinstance(axes, Axis) else tuple(axes)
    expected = bin_masses(predicted, axes)
    statistics = []
    for _ in range(repeats):
        emp = empirical_density(sampler(count, rng), axes, Domain.REAL_LINE)
        statistics.append(float(np.abs(emp.meta["masses"] - expected).sum()))
    statistics = np.array(statistics)
    return float(np.quantile(statistics, quantile)), statistics


def mc_mean_report(test_name, mean, stderr, expected, samples, seed=None, threshold=MOMENT_Z):
    """z-score of a Monte Carlo mean given with its standard error."""
    z = abs(mean - expected) / stderr if stderr > 0 else (0.0 if mean == expected else np.inf)
    return make_report(test_name, DistanceKind.MOMENT_Z, z, threshold, samples, seed,
                       mean=repr(complex(mean)), expected=repr(complex(expected)), stderr=float(stderr))
