from math import exp, gamma, pi, sqrt

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st
from scipy import signal, stats
from scipy.integrate import quad
from scipy.special import kv

from source.core.grid import Axis, GridDensity
from source.core.spaces import Domain
from source.errors import AccuracyError, ConfigurationError, DomainError
from source.transforms import (
    TransformResult, abel_inverse, abel_inverse_composition, abel_inverse_explicit, abel_inverse_half, fourier,
    fourier_inverse, fourier_series, fourier_series_inverse, hankel, hankel_inverse, index_box, mellin, mellin_inverse,
    mellin_on_contour, trig_weight_from_coefficients,
)
from source.weights import GaussAtom, WeightFunction


def centred_gaussian(a=1.0):
    """e^{-a x^2} in one variable."""
    return WeightFunction(Domain.REAL_LINE, 1, [(1.0, (GaussAtom(0, a),))])


def raised_cosine():
    """(1 + cos theta) / (2 pi)."""
    return WeightFunction.trig_polynomial(1, {(0,): 1 / (2 * pi), (1,): 1 / (4 * pi), (-1,): 1 / (4 * pi)})


# -----------
# FOURIER
# -----------
def test_fourier_of_normal():
    res = fourier(WeightFunction.gaussian_product(1), [[1.0], [0.0]])
    assert np.allclose(res.values, [exp(-0.5), 1.0])
    assert res.meta["scheme"] == "closed form"


def test_fourier_of_narrow_normal():
    res = fourier(WeightFunction.gaussian_product(1, variance=1 / (2 * 1e4)), [[1.0]])
    assert abs(res.values[0]) == pytest.approx(1.0, abs=1e-4)


def test_fourier_of_unnormalised_gaussian():
    t = 0.7
    res = fourier(centred_gaussian(), [[2 * sqrt(t)]])
    assert res.values[0].real == pytest.approx(sqrt(pi) * exp(-t))


def test_fourier_grid_matches_closed_form():
    axis = Axis(-10.0, 10.0, 401)
    grid = GridDensity(Domain.REAL_LINE, (axis,), stats.norm.pdf(axis.nodes))
    s = np.array([[0.0], [0.5], [1.5], [3.0]])
    res = fourier(grid, s)
    assert np.allclose(res.values, np.exp(-s[:, 0] ** 2 / 2), atol=1e-8)
    assert res.meta["error"] is not None


def test_fourier_rejects_heavy_tails():
    axis = Axis(-5.0, 5.0, 101)
    grid = GridDensity(Domain.REAL_LINE, (axis,), np.ones(101), tol=None)
    with pytest.raises(AccuracyError):
        fourier(grid, [[1.0]])


def test_fourier_inverse_round_trip():
    g = fourier(WeightFunction.gaussian_product(1), Axis(-12.0, 12.0, 481))
    res = fourier_inverse(g, [[0.0], [1.0]], epsilon=0)
    assert np.allclose(res.values, stats.norm.pdf([0.0, 1.0]), atol=1e-10)


def test_fourier_inverse_needs_integrable_g():
    g = TransformResult(np.ones(101), axes=(Axis(-5.0, 5.0, 101),))
    with pytest.raises(AccuracyError):
        fourier_inverse(g, [[0.0]], epsilon=0)


# -----------
# MELLIN
# -----------
def test_mellin_of_exponential():
    res = mellin(WeightFunction.gamma_product(1), [[2.0], [0.5]])
    assert np.allclose(res.values, [1.0, sqrt(pi)])


def test_mellin_outside_strip():
    with pytest.raises(DomainError):
        mellin(WeightFunction.gamma_product(1), [[-0.5]])
    with pytest.raises(DomainError):
        mellin(WeightFunction.gamma_product(1), [[3.0]], strip=(0.0, 2.0))


# -----------
# FOURIER SERIES
# -----------
def test_fourier_series_exact():
    res = fourier_series(raised_cosine(), [[1], [0], [2]])
    assert np.allclose(res.values, [0.5, 1.0, 0.0])


def test_fourier_series_grid(torus_axis):
    grid = GridDensity(Domain.TORUS, (torus_axis,), (1 + np.cos(torus_axis.nodes)) / (2 * pi), tol=None)
    res = fourier_series(grid, [[1], [0]])
    assert np.allclose(res.values, [0.5, 1.0], atol=1e-12)


def test_fourier_series_needs_integers():
    with pytest.raises(ConfigurationError):
        fourier_series(raised_cosine(), [[0.5]])


def test_fourier_series_inverse():
    coeffs = fourier_series(raised_cosine(), index_box(1, 2))
    res = fourier_series_inverse(coeffs, [[0.0], [pi]])
    assert np.allclose(res.values, [1 / pi, 0.0], atol=1e-12)


def test_trig_weight_from_coefficients():
    theta = np.array([[0.0], [1.0], [pi]])
    w = trig_weight_from_coefficients(fourier_series(raised_cosine(), index_box(1, 2)))
    assert w.domain == Domain.TORUS
    assert np.allclose(w(theta), raised_cosine()(theta), atol=1e-12)


# -----------
# HANKEL
# -----------
def test_hankel_of_exponential():
    res = hankel(WeightFunction.gamma_product(1), [[0.5], [2.0]], nu=0)
    assert np.allclose(res.values, np.exp([-0.5, -2.0]))


def test_hankel_rejects_nu():
    with pytest.raises(ConfigurationError):
        hankel(WeightFunction.gamma_product(1), [[1.0]], nu="1/3")


# -----------
# ABEL
# -----------
def test_abel_inverse_closed_form():
    w = abel_inverse(centred_gaussian(), 0)
    assert w.domain == Domain.HALF_LINE
    assert w([1.2]) == pytest.approx(sqrt(pi) * exp(-1.2))
    w1 = abel_inverse(centred_gaussian(), 1)
    assert w1([1.2]) == pytest.approx(sqrt(pi) * 1.2 * exp(-1.2))


def test_abel_inverse_paths_agree():
    x = [[0.7], [1.5]]
    explicit = abel_inverse_explicit(centred_gaussian(), 0, x).values
    composition = abel_inverse_composition(centred_gaussian(), 0, x).values
    expected = sqrt(pi) * np.exp([-0.7, -1.5])
    assert np.abs(explicit - expected).max() < 1e-6
    assert np.abs(composition - explicit).max() < 1e-6


def test_abel_inverse_grid():
    axis = Axis(-8.0, 8.0, 321)
    grid = GridDensity(Domain.REAL_LINE, (axis,), np.exp(-axis.nodes ** 2), tol=None)
    out_axis = Axis(0.1, 3.0, 30)
    res = abel_inverse(grid, 0, x_axes=(out_axis,))
    assert np.abs(res.values - sqrt(pi) * np.exp(-out_axis.nodes)).max() < 5e-3


def test_abel_inverse_half_forms():
    normal = WeightFunction.gaussian_product(1)
    x = 1.3
    minus = abel_inverse_half(normal, "-1/2")
    plus = abel_inverse_half(normal, "1/2")
    assert minus([x]) == pytest.approx(exp(-x / 2) / sqrt(2 * x))
    assert plus([x]) == pytest.approx(sqrt(x) * exp(-x / 2) / (2 * sqrt(2)))


def test_abel_inverse_half_callable():
    minus = abel_inverse_half(lambda lam: np.exp(-lam ** 2), -0.5)
    assert minus(2.0) == pytest.approx(sqrt(pi) * exp(-2.0) / sqrt(2.0))


def test_abel_inverse_rejects_odd_weights():
    shifted = WeightFunction(Domain.REAL_LINE, 1, [(1.0, (GaussAtom(0, 1.0, 0.5),))])
    with pytest.raises(DomainError):
        abel_inverse(shifted, 0)


def test_abel_inverse_rejects_half_integer_nu():
    with pytest.raises(ConfigurationError):
        abel_inverse(centred_gaussian(), "1/2")
    with pytest.raises(ConfigurationError):
        abel_inverse_half(centred_gaussian(), 1)


@pytest.mark.parametrize("sign", ["-1/2", "1/2"])
def test_abel_composition_half_integer(sign):
    x = np.array([[0.7], [1.5]])
    composed = abel_inverse_composition(centred_gaussian(), sign, x)
    closed = abel_inverse_half(centred_gaussian(), sign)(x)
    assert np.allclose(np.ravel(composed.values), np.ravel(closed), rtol=1e-6, atol=1e-9)


def test_abel_composition_minus_half_rejects_origin():
    with pytest.raises(DomainError):
        abel_inverse_composition(centred_gaussian(), "-1/2", [[0.0]])


def test_gamma_function_reference():
    # half-line mass of x^(1/2) e^{-x}
    assert WeightFunction.gamma_product(1, power=0.5).integrate() == pytest.approx(gamma(1.5))


def test_hankel_inverse_grid():
    g = hankel(WeightFunction.gamma_product(1), Axis(0.0, 40.0, 801), nu=0)
    res = hankel_inverse(g, [[0.5], [2.0]], nu=0, epsilon=0)
    assert np.allclose(res.values, np.exp([-0.5, -2.0]), atol=1e-6)


def test_hankel_inverse_callable():
    res = hankel_inverse(lambda s: np.exp(-s), [[0.5], [2.0]], nu=0, epsilon=0)
    assert np.allclose(res.values, np.exp([-0.5, -2.0]), atol=1e-6)


def test_hankel_inverse_negative_nu_needs_sqrt_grid():
    g = hankel(WeightFunction.gamma_product(1), Axis(0.0, 10.0, 101), nu="-1/2")
    with pytest.raises(ConfigurationError):
        hankel_inverse(g, [[1.0]], nu="-1/2")


# -----------
# CONVOLUTION THEOREMS AND RANDOMISED ROUND TRIPS
# -----------
def cosine_polynomial(cosines):
    """(1 + sum_k c_k cos k theta) / (2 pi) as a trig polynomial."""
    coefficients = {(0,): 1 / (2 * pi)}
    for k, c in enumerate(cosines, start=1):
        coefficients[(k,)] = coefficients[(-k,)] = c / (4 * pi)
    return WeightFunction.trig_polynomial(1, coefficients)


@hsettings(max_examples=20, deadline=None)
@given(st.floats(0.2, 1.0), st.floats(-1.0, 1.0), st.floats(0.2, 1.0), st.floats(-1.0, 1.0))
def test_fourier_convolution_theorem(var_f, mean_f, var_g, mean_g):
    axis = Axis(-12.0, 12.0, 2401)
    x = axis.nodes[:, None]
    f = WeightFunction.gaussian_product(1, var_f, mean_f)
    g = WeightFunction.gaussian_product(1, var_g, mean_g)
    conv = signal.fftconvolve(np.real(f(x)), np.real(g(x)), mode="same") * axis.step
    s = np.linspace(-2.0, 2.0, 9)[:, None]
    lhs = fourier(GridDensity(Domain.REAL_LINE, (axis,), conv, tol=None, signed=True), s).values
    rhs = fourier(f, s).values * fourier(g, s).values
    assert np.abs(lhs - rhs).max() < 1e-4 * np.abs(rhs).max()


@hsettings(max_examples=20, deadline=None)
@given(st.sampled_from([0.0, 0.5, 1.0, 2.0]), st.floats(0.5, 2.0),
       st.sampled_from([0.0, 0.5, 1.0]), st.floats(0.5, 2.0))
def test_mellin_convolution_theorem(p, a, q, b):
    # int f(x/y) g(y) dy/y for x^p e^{-ax} and x^q e^{-bx}
    def h(x):
        return 2 * x ** p * (a * x / b) ** ((q - p) / 2) * kv(q - p, 2 * np.sqrt(a * b * x))

    f = WeightFunction.gamma_product(1, power=p, rate=a)
    g = WeightFunction.gamma_product(1, power=q, rate=b)
    for s in (1.0, 1.7, 2.5):
        lhs = quad(lambda x: h(x) * x ** (s - 1), 0, np.inf, limit=200)[0]
        rhs = mellin(f, [[s]]).values[0] * mellin(g, [[s]]).values[0]
        assert lhs == pytest.approx(np.real(rhs), rel=1e-4)


@hsettings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-1.0, 1.0), min_size=3, max_size=3), st.lists(st.floats(-1.0, 1.0), min_size=3, max_size=3))
def test_torus_convolution_theorem(cos_f, cos_g):
    f, g = cosine_polynomial(cos_f), cosine_polynomial(cos_g)
    axis = Axis(-pi, pi, 64, periodic=True)
    theta = axis.nodes
    conv = np.array([
        np.sum(f(((t - theta + pi) % (2 * pi) - pi)[:, None]) * g(theta[:, None])) * axis.step for t in theta
    ])
    s = index_box(1, 4)
    lhs = fourier_series(GridDensity(Domain.TORUS, (axis,), np.real(conv), tol=None, signed=True), s).values
    rhs = fourier_series(f, s).values * fourier_series(g, s).values
    assert np.allclose(lhs, rhs, atol=1e-10)


@hsettings(max_examples=20, deadline=None)
@given(st.floats(0.5, 2.0), st.floats(-1.0, 1.0), st.floats(0.1, 1.0))
def test_fourier_round_trip_battery(variance, mean, weight):
    w = WeightFunction.gaussian_product(1, variance, mean) + WeightFunction.gaussian_product(1).scale(weight)
    g = fourier(w, Axis(-12.0, 12.0, 481))
    x = np.linspace(-3.0, 3.0, 13)[:, None]
    res = fourier_inverse(g, x, epsilon=0)
    assert np.abs(res.values - np.real(w(x))).max() < 1e-5


@hsettings(max_examples=20, deadline=None)
@given(st.integers(0, 2), st.floats(0.7, 1.5))
def test_hankel_round_trip_battery(power, rate):
    w = WeightFunction.gamma_product(1, power=power, rate=rate)
    g = hankel(w, Axis(0.0, 40.0, 1601), nu=0)
    x = np.linspace(0.2, 3.0, 8)[:, None]
    res = hankel_inverse(g, x, nu=0, epsilon=0)
    assert np.abs(res.values - np.real(w(x))).max() < 1e-5


@hsettings(max_examples=20, deadline=None)
@given(st.sampled_from([0.0, 0.5, 1.0, 2.0]), st.floats(0.5, 2.0))
def test_mellin_round_trip_battery(power, rate):
    w = WeightFunction.gamma_product(1, power=power, rate=rate)
    g = mellin_on_contour(w, 1.0, Axis(-60.0, 60.0, 1201))
    x = np.linspace(0.2, 4.0, 8)[:, None]
    res = mellin_inverse(g, x, epsilon=0)
    assert np.abs(res.values - np.real(w(x))).max() < 1e-5


@hsettings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-1.0, 1.0), min_size=4, max_size=4))
def test_fourier_series_round_trip_battery(cosines):
    w = cosine_polynomial(cosines)
    theta = np.linspace(-3.0, 3.0, 11)[:, None]
    res = fourier_series_inverse(fourier_series(w, index_box(1, 4)), theta)
    assert np.abs(res.values - np.real(w(theta))).max() < 1e-12
