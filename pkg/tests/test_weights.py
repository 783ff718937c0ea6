import cmath
from itertools import permutations
from math import exp, pi, sqrt

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st
from scipy import stats

from source.core.grid import Axis, GridDensity, tensor_mesh
from source.core.spaces import Domain
from source.errors import AccuracyError, ConfigurationError, DataError, DomainError, DomainMismatchError, ResourceError
from source.transforms import fourier, fourier_series, hankel, mellin
from source.weights import (
    GammaAtom, GaussAtom, OperatorKind, TrigAtom, VandermondeOperator, WeightFunction, apply_one_dim,
    apply_vandermonde, finite_difference_oracle, multiply_vandermonde,
)
from source.weights.library import cue_weight, gaussian_diagonal_weight, wishart_lu_weight


# -----------
# EVALUATION
# -----------
def test_gaussian_product_at_origin():
    assert WeightFunction.gaussian_product(2)([0.0, 0.0]) == pytest.approx(1 / (2 * pi))


def test_gamma_product_value():
    assert WeightFunction.gamma_product(2)([1.0, 1.0]) == pytest.approx(exp(-2))


def test_cue_weight_at_origin():
    assert cue_weight(2)([0.0, 0.0]) == pytest.approx(2 / (2 * pi) ** 2)


@hsettings(max_examples=40, deadline=None)
@given(st.lists(st.floats(min_value=-6, max_value=6), min_size=3, max_size=3),
       st.floats(min_value=0.2, max_value=4.0))
def test_gaussian_product_matches_scipy(x, variance):
    expected = np.prod(stats.norm.pdf(x, scale=sqrt(variance)))
    assert gaussian_diagonal_weight(3, variance)(x) == pytest.approx(expected, rel=1e-10, abs=1e-300)


def test_shifted_gaussian_product():
    w = WeightFunction.gaussian_product(1, variance=0.5, mean=1.5)
    assert w([0.7]) == pytest.approx(stats.norm.pdf(0.7, loc=1.5, scale=sqrt(0.5)))
    assert w.integrate() == pytest.approx(1.0)


def test_half_line_rejects_negative_points():
    with pytest.raises(DomainError):
        WeightFunction.gamma_product(1)([-1.0])


def test_point_dimension_mismatch():
    with pytest.raises(DomainMismatchError):
        WeightFunction.gaussian_product(2)([0.0, 0.0, 0.0])


# -----------
# ALGEBRA
# -----------
def test_algebra():
    w = WeightFunction.gaussian_product(2, variance=2.0)
    assert w.integrate() == pytest.approx(1.0)
    assert (w + w).equals(w.scale(2))
    assert (w - w).is_zero()
    assert (3 * w).equals(w.scale(3))
    assert (w * w).integrate() == pytest.approx(1 / (4 * pi * 2.0))
    assert w.is_symmetric() and w.is_even()


def test_asymmetric_weight():
    w = WeightFunction(Domain.REAL_LINE, 2, [(1.0, (GaussAtom(1, 0.5), GaussAtom(0, 0.5)))])
    assert not w.is_symmetric()
    assert not w.is_even()
    assert w.permute((1, 0))([2.0, 3.0]) == pytest.approx(w([3.0, 2.0]))
    assert w.reflect(0)([2.0, 3.0]) == pytest.approx(-w([2.0, 3.0]))


def test_mixed_domains_are_rejected():
    with pytest.raises(DomainMismatchError):
        WeightFunction.gaussian_product(2) + WeightFunction.gamma_product(2)
    with pytest.raises(DomainMismatchError):
        WeightFunction.gaussian_product(2) + WeightFunction.gaussian_product(3)
    with pytest.raises(DomainMismatchError):
        WeightFunction(Domain.TORUS, 1, [(1.0, (GammaAtom(0.0, 1.0),))])


def test_term_cap():
    terms = [(1.0, (GaussAtom(k, 1.0),)) for k in range(3)]
    with pytest.raises(ResourceError):
        WeightFunction(Domain.REAL_LINE, 1, terms, cap=2)


def test_multiply_vandermonde_value():
    w = multiply_vandermonde(WeightFunction.gamma_product(2))
    assert w([1.0, 2.0]) == pytest.approx(exp(-3))
    assert w([2.0, 1.0]) == pytest.approx(-exp(-3))


# -----------
# OPERATORS
# -----------
def test_flat_one_dim():
    out = apply_one_dim(OperatorKind.FLAT, 0, WeightFunction.gaussian_product(1))
    assert out([1.5]) == pytest.approx(1.5 * stats.norm.pdf(1.5))


def test_mellin_one_dim():
    out = apply_one_dim(OperatorKind.MELLIN, 0, WeightFunction.gamma_product(1))
    assert out([2.0]) == pytest.approx(2.0 * exp(-2.0))


def test_hankel_one_dim_on_exponential():
    # -x^nu d/dx x^(1-nu) d/dx e^{-x} = (1 - nu - x) e^{-x}
    out = apply_one_dim(OperatorKind.HANKEL, 0, WeightFunction.gamma_product(1), nu=0.5)
    assert out([1.25]) == pytest.approx((0.5 - 1.25) * exp(-1.25))


def test_flat_vandermonde_on_gaussian():
    w = WeightFunction.gaussian_product(2)
    out = apply_vandermonde(VandermondeOperator(OperatorKind.FLAT, 2), w)
    x = np.array([0.3, -1.1])
    assert out(x) == pytest.approx((x[1] - x[0]) * w(x))


def test_torus_vandermonde_example():
    out = apply_vandermonde(VandermondeOperator(OperatorKind.TORUS, 2), cue_weight(2))
    t1, t2 = 0.4, 1.7
    expected = (cmath.exp(-1j * t2) - cmath.exp(-1j * t1)) / (2 * pi) ** 2
    assert complex(out([t1, t2])) == pytest.approx(expected)


def test_torus_vandermonde_kills_constants():
    w = WeightFunction.trig_polynomial(2, {(0, 0): 1.0})
    assert apply_vandermonde(VandermondeOperator(OperatorKind.TORUS, 2), w).is_zero()


def test_operator_domain_checks():
    with pytest.raises(DomainMismatchError):
        apply_one_dim(OperatorKind.FLAT, 0, WeightFunction.gamma_product(1))
    with pytest.raises(DomainMismatchError):
        apply_vandermonde(VandermondeOperator(OperatorKind.FLAT, 3), WeightFunction.gaussian_product(2))


def test_vandermonde_cap():
    with pytest.raises(ResourceError):
        apply_vandermonde(VandermondeOperator(OperatorKind.FLAT, 3), WeightFunction.gaussian_product(3), cap=1)


# -----------
# OPERATOR LAWS
# -----------
seeds = st.integers(min_value=0, max_value=2**32 - 1)
FAMILIES = [OperatorKind.FLAT, OperatorKind.HANKEL, OperatorKind.MELLIN, OperatorKind.TORUS]


def random_weight(kind, n, rng, terms=2):
    """A sum of random product terms in the atom family of an operator kind."""
    def atom():
        if kind == OperatorKind.FLAT:
            return GaussAtom(int(rng.integers(0, 3)), rng.uniform(0.3, 2.0), rng.uniform(-1.0, 1.0))
        if kind == OperatorKind.TORUS:
            return TrigAtom(int(rng.integers(-4, 5)))
        return GammaAtom(rng.uniform(0.0, 2.0), rng.uniform(0.5, 2.0))
    domain = {OperatorKind.FLAT: Domain.REAL_LINE, OperatorKind.TORUS: Domain.TORUS}.get(kind, Domain.HALF_LINE)
    return WeightFunction(domain, n, [(rng.normal(), tuple(atom() for _ in range(n))) for _ in range(terms)])


def sample_points(kind, n, rng, count=5):
    if kind == OperatorKind.FLAT:
        return rng.uniform(-2.0, 2.0, (count, n))
    if kind == OperatorKind.TORUS:
        return rng.uniform(-pi, pi, (count, n))
    return rng.uniform(0.3, 3.0, (count, n))


def assert_eigen(lhs, rhs):
    assert np.allclose(lhs, rhs, rtol=1e-6, atol=1e-9 * max(np.abs(rhs).max(), 1e-300))


@hsettings(max_examples=100, deadline=None)
@given(st.integers(0, 3), st.floats(0.3, 2.0), st.floats(-1.0, 1.0), seeds)
def test_flat_operator_is_fourier_multiplier(power, a, b, seed):
    w = WeightFunction(Domain.REAL_LINE, 1, [(1.0, (GaussAtom(power, a, b),))])
    s = np.random.default_rng(seed).uniform(-3.0, 3.0, (20, 1))
    lhs = fourier(apply_one_dim(OperatorKind.FLAT, 0, w), s).values
    assert_eigen(lhs, 1j * s[:, 0] * fourier(w, s).values)


@hsettings(max_examples=100, deadline=None)
@given(st.floats(0.25, 3.0), st.floats(0.5, 2.0), st.sampled_from([-0.5, 0.0, 0.5, 1.0, 2.0]), seeds)
def test_hankel_operator_is_hankel_multiplier(power, a, nu, seed):
    # power > 0 keeps the boundary term nu K(0) f(0) out
    w = WeightFunction.gamma_product(1, power=power, rate=a)
    s = np.random.default_rng(seed).uniform(0.0, 3.0, (20, 1))
    lhs = hankel(apply_one_dim(OperatorKind.HANKEL, 0, w, nu=nu), s, nu).values
    assert_eigen(lhs, s[:, 0] * hankel(w, s, nu).values)


@hsettings(max_examples=100, deadline=None)
@given(st.floats(0.0, 3.0), st.floats(0.5, 2.0), seeds)
def test_mellin_operator_is_mellin_multiplier(power, a, seed):
    w = WeightFunction.gamma_product(1, power=power, rate=a)
    rng = np.random.default_rng(seed)
    s = (rng.uniform(0.2, 3.0, 20) + 1j * rng.uniform(-3.0, 3.0, 20))[:, None]
    lhs = mellin(apply_one_dim(OperatorKind.MELLIN, 0, w), s).values
    assert_eigen(lhs, s[:, 0] * mellin(w, s).values)


@hsettings(max_examples=100, deadline=None)
@given(st.dictionaries(st.integers(-5, 5), st.floats(-1.0, 1.0), min_size=1, max_size=5), seeds)
def test_torus_operator_is_fourier_series_multiplier(coefficients, seed):
    w = WeightFunction.trig_polynomial(1, {(k,): c for k, c in coefficients.items()})
    s = np.random.default_rng(seed).integers(-6, 7, (20, 1))
    lhs = fourier_series(apply_one_dim(OperatorKind.TORUS, 0, w), s).values
    assert np.allclose(lhs, s[:, 0] * fourier_series(w, s).values, rtol=1e-6, atol=1e-12)


@hsettings(max_examples=40, deadline=None)
@given(st.sampled_from(FAMILIES), seeds)
def test_one_dim_operators_commute(kind, seed):
    w = random_weight(kind, 2, np.random.default_rng(seed), terms=3)
    jk = apply_one_dim(kind, 0, apply_one_dim(kind, 1, w, nu=1), nu=1)
    kj = apply_one_dim(kind, 1, apply_one_dim(kind, 0, w, nu=1), nu=1)
    assert jk.equals(kj, tol=1e-12)


@hsettings(max_examples=40, deadline=None)
@given(st.sampled_from(FAMILIES), st.integers(2, 3), seeds)
def test_vandermonde_image_is_antisymmetric(kind, n, seed):
    rng = np.random.default_rng(seed)
    base = random_weight(kind, n, rng, terms=2 if n == 2 else 1)
    w = WeightFunction.zero(base.domain, n)
    for perm in permutations(range(n)):
        w = w + base.permute(perm)
    out = apply_vandermonde(VandermondeOperator(kind, n, 1), w)
    x = sample_points(kind, n, rng)
    swapped = x[:, [1, 0] + list(range(2, n))]
    assert np.abs(out(swapped) + out(x)).max() < 1e-10


# -----------
# FINITE DIFFERENCES
# -----------
def test_finite_difference_matches_symbolic_flat():
    axis = Axis(-6.0, 6.0, 241)
    w = WeightFunction.gaussian_product(2)
    grid = GridDensity.from_function(w, Domain.REAL_LINE, (axis, axis), tol=None)
    op = VandermondeOperator(OperatorKind.FLAT, 2)
    numeric = finite_difference_oracle(op, grid)
    symbolic = apply_vandermonde(op, w)(tensor_mesh((axis, axis))).reshape(grid.shape)
    assert np.abs(numeric.values - symbolic).max() < 1e-3
    assert numeric.meta["error"] < 1e-3


def test_finite_difference_matches_symbolic_mellin():
    axis = Axis(0.0, 12.0, 241)
    grid = GridDensity.from_function(WeightFunction.gamma_product(1), Domain.HALF_LINE, (axis,), tol=None)
    numeric = finite_difference_oracle(VandermondeOperator(OperatorKind.MELLIN, 1), grid)
    assert np.abs(numeric.values - axis.nodes * np.exp(-axis.nodes)).max() < 1e-3


def test_finite_difference_rejects_coarse_grid():
    axis = Axis(-6.0, 6.0, 9)
    grid = GridDensity.from_function(WeightFunction.gaussian_product(2), Domain.REAL_LINE, (axis, axis), tol=None)
    with pytest.raises(AccuracyError):
        finite_difference_oracle(VandermondeOperator(OperatorKind.FLAT, 2), grid)


def test_finite_difference_grid_checks():
    axis = Axis(-6.0, 6.0, 240)
    grid = GridDensity.from_function(WeightFunction.gaussian_product(1), Domain.REAL_LINE, (axis,), tol=None)
    with pytest.raises(ConfigurationError):
        finite_difference_oracle(VandermondeOperator(OperatorKind.FLAT, 1), grid)
    with pytest.raises(DomainMismatchError):
        finite_difference_oracle(VandermondeOperator(OperatorKind.MELLIN, 1), grid)


# -----------
# LIBRARY AND SERIALIZATION
# -----------
def test_wishart_lu_weight():
    assert wishart_lu_weight(2, 2)([1.0, 1.0]) == pytest.approx(exp(-2))
    assert wishart_lu_weight(2, 3)([1.0, 2.0]) == pytest.approx(2 * exp(-3) / 2)
    with pytest.raises(ConfigurationError):
        wishart_lu_weight(3, 2)


def test_save_and_load(tmp_path):
    w = cue_weight(2) + WeightFunction.trig_polynomial(2, {(1, -1): 0.5j})
    path = tmp_path / "weight.json"
    w.save(path)
    assert WeightFunction.load(path).equals(w)


def test_load_rejects_malformed(tmp_path):
    with pytest.raises(DataError):
        WeightFunction.from_json("{not json")
    with pytest.raises(DataError):
        WeightFunction.from_dict({"domain": "real_line", "terms": []})
    with pytest.raises(DataError):
        WeightFunction.from_dict({"domain": "sphere", "n": 1, "terms": []})


def test_fraction_coefficients():
    data = {"domain": "half_line", "n": 1, "terms": [{"coeff": "1/2", "atoms": [[0, 1]]}]}
    assert WeightFunction.from_dict(data)([0.0]) == pytest.approx(0.5)
    assert WeightFunction.from_dict({"domain": "torus", "n": 1, "terms": [{"coeff": 1, "atoms": [[2]]}]}).terms[0][0] == (TrigAtom(2),)
