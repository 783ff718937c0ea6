from math import pi

import numpy as np
import pytest
from scipy import stats

from source.core.grid import Axis
from source.core.samplers import haar_unitary
from source.core.spectrum import lu_diagonals_numeric, principal_minors
from source.errors import DataError, DegenerateSampleError, DomainError
from source.haarparam import (
    RadialPoint, UnitaryCoordinates, build_unitary, h_matrix_entries, h_matrix_product, haar_density_rphi,
    lu_diagonals, minors_from_coordinates, phi_factor, radius_bounds, sample_haar_coordinates,
    sample_haar_unitaries, to_radial,
)
from source.verify.compare import DistanceKind, compare, two_sample_report
from source.verify.empirical import empirical_density
from source.verify.suites import SuiteContext, haar_first_minor_density, haar_total_mass, haarparam_suite


def zero_coordinates(n):
    return UnitaryCoordinates(n, np.zeros(n), np.zeros((n, n)), np.zeros((n, n)))


# -----------
# CONSTRUCTION
# -----------
def test_one_by_one():
    c = UnitaryCoordinates(1, [0.6], np.zeros((1, 1)), np.zeros((1, 1)))
    assert complex(build_unitary(c)[0, 0]) == pytest.approx(np.exp(0.6j))


def test_zero_angles_give_identity():
    assert np.allclose(build_unitary(zero_coordinates(4)), np.eye(4))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_build_unitary_is_unitary(n, rng):
    V = build_unitary(sample_haar_coordinates(n, rng))
    assert np.allclose(V @ V.conj().T, np.eye(n), atol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_h_entries_match_product(n, rng):
    c = sample_haar_coordinates(n, rng)
    for k in range(2, n + 1):
        assert np.allclose(h_matrix_entries(c, k), h_matrix_product(c, k), atol=1e-13)


def test_factor_and_level_bounds(rng):
    c = sample_haar_coordinates(3, rng)
    with pytest.raises(DomainError):
        phi_factor(c, 2, 2)
    with pytest.raises(DomainError):
        h_matrix_entries(c, 4)
    with pytest.raises(DomainError):
        h_matrix_entries(c, 1)


# -----------
# LU DIAGONALS AND MINORS
# -----------
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_lu_diagonals_match_numeric(n, rng):
    for _ in range(20):
        c = sample_haar_coordinates(n, rng)
        closed, numeric = lu_diagonals(c).u, lu_diagonals_numeric(build_unitary(c))
        assert np.max(np.abs(closed - numeric) / np.abs(numeric)) < 1e-12


@pytest.mark.parametrize("n", [2, 3, 4])
def test_minors_match_numeric(n, rng):
    c = sample_haar_coordinates(n, rng)
    assert np.allclose(minors_from_coordinates(c), principal_minors(build_unitary(c)), atol=1e-12)
    assert complex(np.prod(lu_diagonals(c).u)) == pytest.approx(np.exp(1j * c.alpha[0]))


def test_phi_out_of_range():
    phi = np.zeros((2, 2))
    phi[0, 1] = 2.0
    with pytest.raises(DomainError):
        UnitaryCoordinates(2, np.zeros(2), phi, np.zeros((2, 2)))
    with pytest.raises(DomainError):
        UnitaryCoordinates(2, np.zeros(3), np.zeros((2, 2)), np.zeros((2, 2)))


def test_vanishing_minor_is_degenerate():
    phi = np.zeros((2, 2))
    phi[0, 1] = pi / 2
    with pytest.raises(DegenerateSampleError):
        lu_diagonals(UnitaryCoordinates(2, np.zeros(2), phi, np.zeros((2, 2))))


# -----------
# SERIALIZATION
# -----------
def test_flat_layout(rng):
    c = sample_haar_coordinates(3, rng)
    assert len(c.flat()) == len(UnitaryCoordinates.flat_header(3)) == 9
    assert UnitaryCoordinates.flat_header(2) == ["alpha_1", "alpha_2", "phi_1_2", "psi_1_2"]


def test_coordinates_json(rng):
    c = sample_haar_coordinates(3, rng)
    back = UnitaryCoordinates.from_json(c.to_json())
    assert np.allclose(back.flat(), c.flat())


def test_coordinates_reject_malformed():
    with pytest.raises(DataError):
        UnitaryCoordinates.from_json("[1, 2")
    with pytest.raises(DataError):
        UnitaryCoordinates.from_dict({"n": 2, "alpha": [0.0, 0.0]})


# -----------
# HAAR MEASURE
# -----------
def test_density_is_positive_on_samples(rng):
    for n in (2, 3):
        point = to_radial(sample_haar_coordinates(n, rng))
        assert haar_density_rphi(n, point) > 0


def test_density_rejects_radii_outside_bounds(rng):
    point = to_radial(sample_haar_coordinates(3, rng))
    bounds = radius_bounds(3, point.phi)
    too_far = RadialPoint(point.alpha1, bounds + 0.1, point.phases, point.phi, point.psi)
    with pytest.raises(DomainError):
        haar_density_rphi(3, too_far)
    with pytest.raises(DomainError):
        haar_density_rphi(3, RadialPoint(point.alpha1, point.radii[:1], point.phases, point.phi, point.psi))


@pytest.mark.parametrize("n", [2, 3])
def test_density_total_mass(n):
    assert haar_total_mass(n) == pytest.approx(1.0, abs=1e-8)


def test_sampled_unitaries_are_haar():
    V = sample_haar_unitaries(3, 20_000, np.random.default_rng(21))
    trace = np.abs(np.trace(V, axis1=-2, axis2=-1)) ** 2
    assert trace.mean() == pytest.approx(1.0, abs=5 * trace.std() / np.sqrt(trace.size))
    # |V_11|^2 of a Haar U(3) is Beta(1, 2)
    assert stats.kstest(np.abs(V[:, 0, 0]) ** 2, stats.beta(1, 2).cdf).statistic < 0.02


def test_first_minor_density_closed_forms():
    points = np.array([[0.3, 0.5], [0.8, -2.0], [1.2, 0.0]])
    assert np.allclose(haar_first_minor_density(2, points), [0.3 / pi, 0.8 / pi, 0.0])
    assert np.allclose(haar_first_minor_density(3, points), [2 * 0.3 * 0.91 / pi, 2 * 0.8 * 0.36 / pi, 0.0])


@pytest.mark.parametrize("n", [2, 3])
def test_first_minor_matches_qr_sampler(n):
    first = principal_minors(haar_unitary(n, np.random.default_rng(40 + n), 10_000))[:, 0]
    polar = np.stack([np.abs(first), np.angle(first)], axis=1)
    hist = empirical_density(polar, (Axis(0.05, 0.95, 10), Axis(-11 * pi / 12, 11 * pi / 12, 12)))
    report = compare(lambda p: haar_first_minor_density(n, p), hist, DistanceKind.CHI2, seed=40 + n)
    assert report.passed


@pytest.mark.parametrize("n", [2, 3, 4])
def test_trace_parts_match_qr_sampler(n):
    V = sample_haar_unitaries(n, 10_000, np.random.default_rng(50 + n))
    Q = haar_unitary(n, np.random.default_rng(60 + n), 10_000)
    trace_v, trace_q = np.trace(V, axis1=-2, axis2=-1), np.trace(Q, axis1=-2, axis2=-1)
    assert two_sample_report("Re tr", trace_v.real, trace_q.real, alpha=0.001).passed
    assert two_sample_report("Im tr", trace_v.imag, trace_q.imag, alpha=0.001).passed


@pytest.mark.slow
def test_haarparam_suite_distribution_checks():
    reports = haarparam_suite(SuiteContext(10_000, 1))
    names = [r.test_name for r in reports]
    assert any("Re tr V" in name for name in names) and any("Im tr V" in name for name in names)
    assert sum(r.distance_kind == DistanceKind.CHI2 for r in reports) == 4
    assert all(r.passed for r in reports if r.distance_kind == DistanceKind.CHI2 or "LU" in r.test_name)
