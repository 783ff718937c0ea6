from fractions import Fraction
from math import pi

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st
from scipy import stats

from source.core.grid import Axis, GridDensity
from source.core.samplers import haar_orthogonal, haar_unitary, sample_batch, sample_matrix, sample_spectra
from source.core.spaces import (
    Domain, EnsembleSpec, Gaussian, Ginibre, HaarUniform, MatrixSpace, WishartLike, vandermonde,
)
from source.core.spectrum import embed, extract_pseudo_diagonal, extract_spectra, extract_spectrum, principal_minors
from source.core.weyl import ensemble_density, weyl_density
from source.errors import AccuracyError, ConfigurationError, DataError, DomainError, NumericError
from source.verify.compare import two_sample_report
from source.weights.library import builtin_spec, closed_form_density, cue_density, gue_density, lue_density


# -----------
# SPACES
# -----------
@pytest.mark.parametrize("kind, n, nu, shape", [
    ("herm", 3, None, (3, 3)),
    ("herm_plus", 2, None, (2, 2)),
    ("unitary", 4, None, (4, 4)),
    ("io_even", 2, None, (4, 4)),
    ("io_odd", 2, None, (5, 5)),
    ("usp", 3, None, (6, 6)),
    ("chiral", 2, 3, (2, 5)),
])
def test_ambient_shape(kind, n, nu, shape):
    assert MatrixSpace(kind, n, nu).ambient_shape == shape


def test_implied_nu():
    assert MatrixSpace("io_even", 2).nu == Fraction(-1, 2)
    assert MatrixSpace("io_odd", 2).nu == Fraction(1, 2)
    assert MatrixSpace("usp", 2).nu == Fraction(1, 2)
    assert MatrixSpace("chiral", 2).nu == 0
    assert MatrixSpace("chiral", 2, "2").nu == 2


@pytest.mark.parametrize("args", [
    ("symmetric", 2, None),
    ("herm", 0, None),
    ("herm", 2.5, None),
    ("chiral", 2, -1),
    ("chiral", 2, "1/2"),
    ("io_even", 2, "1/2"),
    ("herm", 2, 1),
])
def test_invalid_space(args):
    with pytest.raises(ConfigurationError):
        MatrixSpace(*args)


def test_spectral_domains():
    assert MatrixSpace("herm", 2).spectral_domain == Domain.REAL_LINE
    assert MatrixSpace("unitary", 2).spectral_domain == Domain.TORUS
    for kind in ("io_even", "io_odd", "usp", "chiral", "herm_plus"):
        assert MatrixSpace(kind, 2).spectral_domain == Domain.HALF_LINE


@pytest.mark.parametrize("kind, density", [
    ("herm", HaarUniform()),
    ("unitary", Gaussian()),
    ("chiral", Gaussian()),
    ("herm_plus", Ginibre()),
])
def test_unsupported_pairs(kind, density):
    with pytest.raises(ConfigurationError):
        EnsembleSpec(MatrixSpace(kind, 2), density)


def test_invalid_density_parameters():
    with pytest.raises(ConfigurationError):
        EnsembleSpec(MatrixSpace("herm", 2), Gaussian(0.0))
    with pytest.raises(ConfigurationError):
        EnsembleSpec(MatrixSpace("herm_plus", 3), WishartLike(2))


def test_vandermonde():
    assert vandermonde(np.array([1.0, 2.0, 4.0])) == pytest.approx(6.0)
    assert vandermonde(np.array([[0.0, 1.0], [1.0, 0.0]])) == pytest.approx([1.0, -1.0])


# -----------
# GRIDS
# -----------
def test_axis():
    axis = Axis.parse("-1:1:5")
    assert axis.step == pytest.approx(0.5)
    assert axis.nodes.tolist() == pytest.approx([-1.0, -0.5, 0.0, 0.5, 1.0])
    periodic = Axis(-pi, pi, 4, periodic=True)
    assert periodic.nodes[-1] < pi
    assert periodic.weights().sum() == pytest.approx(2 * pi)


@pytest.mark.parametrize("text", ["1:2", "a:b:c", "0:1:0", "1:0:5"])
def test_axis_parse_errors(text):
    with pytest.raises(ConfigurationError):
        Axis.parse(text)


def test_grid_density_checks():
    axis = Axis(-8.0, 8.0, 321)
    normal = stats.norm.pdf(axis.nodes)
    grid = GridDensity(Domain.REAL_LINE, (axis,), normal)
    assert grid.integral() == pytest.approx(1.0, abs=1e-6)
    assert grid([[0.0]])[0] == pytest.approx(stats.norm.pdf(0.0))
    with pytest.raises(AccuracyError):
        GridDensity(Domain.REAL_LINE, (axis,), 2 * normal)
    with pytest.raises(DataError):
        GridDensity(Domain.REAL_LINE, (axis,), normal - 0.1, tol=None)
    with pytest.raises(ConfigurationError):
        GridDensity(Domain.REAL_LINE, (axis,), normal[:-1])


def test_grid_symmetry():
    axis = Axis(-4.0, 4.0, 41)
    x, y = np.meshgrid(axis.nodes, axis.nodes, indexing="ij")
    skewed = np.exp(-x ** 2 - 2 * y ** 2)
    with pytest.raises(DomainError):
        GridDensity(Domain.REAL_LINE, (axis, axis), skewed, tol=None, symmetric=True)
    assert GridDensity(Domain.REAL_LINE, (axis, axis), np.exp(-x ** 2 - y ** 2), tol=None, symmetric=True).symmetric


# -----------
# SPECTRA
# -----------
def test_extract_spectra_examples():
    assert extract_spectra(np.diag([3.0, 1.0]), MatrixSpace("herm", 2)).tolist() == pytest.approx([1.0, 3.0])
    io = np.array([[0, 2j], [-2j, 0]])
    assert extract_spectra(io, MatrixSpace("io_even", 1)).tolist() == pytest.approx([4.0])
    u = np.diag(np.exp([1j * pi / 3, -1j * pi / 3]))
    assert extract_spectra(u, MatrixSpace("unitary", 2)).tolist() == pytest.approx([-pi / 3, pi / 3])
    assert extract_spectrum(np.diag([3.0, 1.0]), MatrixSpace("herm", 2)).values.tolist() == pytest.approx([1.0, 3.0])


def test_extract_rejects_non_finite():
    with pytest.raises(NumericError):
        extract_spectra(np.array([[np.nan, 0.0], [0.0, 1.0]]), MatrixSpace("herm", 2))


def test_pseudo_diagonal_examples():
    herm = np.array([[1.5, 2 + 1j], [2 - 1j, -0.5]])
    assert extract_pseudo_diagonal(herm, MatrixSpace("herm", 2)).tolist() == pytest.approx([1.5, -0.5])
    io = np.array([[0, 5j], [-5j, 0]])
    assert extract_pseudo_diagonal(io, MatrixSpace("io_even", 1)).tolist() == pytest.approx([5.0])
    z, w = 2.0, 0.3 - 0.4j
    usp = np.array([[z, w], [-np.conj(w), np.conj(z)]])
    assert extract_pseudo_diagonal(usp, MatrixSpace("usp", 1)).tolist() == pytest.approx([2.0])
    with pytest.raises(ConfigurationError):
        extract_pseudo_diagonal(np.eye(2), MatrixSpace("unitary", 2))


@pytest.mark.parametrize("kind, nu", [("herm", None), ("io_even", None), ("io_odd", None), ("usp", None),
                                      ("chiral", 1), ("herm_plus", None), ("unitary", None)])
def test_embed_roundtrip_spectrum(kind, nu):
    space = MatrixSpace(kind, 2, nu)
    x = np.array([0.4, 1.3])
    assert extract_spectra(embed(space, x), space).tolist() == pytest.approx(x.tolist(), abs=1e-12)


def test_principal_minors():
    X = np.array([[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]])
    assert principal_minors(X).tolist() == pytest.approx([2.0, 5.0, 18.0])


# -----------
# SAMPLERS
# -----------
def test_gue_sample_structure(rng):
    X = sample_matrix(builtin_spec("gue", 2), rng)
    assert X.shape == (2, 2)
    assert np.allclose(X, X.conj().T)


def test_io_even_sample_structure(rng):
    X = sample_matrix(builtin_spec("io_even", 1), rng)
    assert X[0, 0] == 0 and X[1, 1] == 0
    assert X[0, 1] == pytest.approx(-X[1, 0])
    assert X[0, 1].real == 0


def test_gue_entry_variances(rng):
    X = sample_batch(builtin_spec("gue", 2), rng, 40_000)
    assert X[:, 0, 0].real.var() == pytest.approx(1.0, rel=0.05)
    assert np.mean(np.abs(X[:, 0, 1]) ** 2) == pytest.approx(1.0, rel=0.05)


def test_chiral_one_by_one_is_exponential():
    sample = sample_spectra(builtin_spec("chiral", 1), 10_000, seed=3)
    assert stats.kstest(sample.values[:, 0], stats.expon.cdf).statistic < 0.02


def test_sample_spectra_deterministic():
    spec = builtin_spec("gue", 2)
    a = sample_spectra(spec, 25_000, seed=7, workers=1)
    b = sample_spectra(spec, 25_000, seed=7, workers=4)
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, sample_spectra(spec, 25_000, seed=8).values)
    assert np.all(np.diff(a.values, axis=1) >= 0)


def test_sample_spectra_auxiliary():
    lu = sample_spectra(builtin_spec("wishart", 2), 100, seed=1, auxiliary="lu")
    assert lu.auxiliary.shape == (100, 2) and np.all(lu.auxiliary > 0)
    with pytest.raises(ConfigurationError):
        sample_spectra(builtin_spec("gue", 2), 100, seed=1, auxiliary="lu")
    with pytest.raises(ConfigurationError):
        sample_spectra(builtin_spec("gue", 2), 0)


def exp_i(H):
    """exp(iH) of a stack of Hermitian matrices."""
    e, V = np.linalg.eigh(H)
    return (V * np.exp(1j * e)[..., None, :]) @ np.conj(np.swapaxes(V, -1, -2))


def conjugate(X, space, rng):
    """K X K^{-1} with K drawn from the symmetry group of space (two-sided for chiral)."""
    count = len(X)
    kind = space.kind.value
    if kind in ("herm", "herm_plus", "unitary"):
        K = haar_unitary(space.n, rng, count)
    elif kind in ("io_even", "io_odd"):
        K = haar_orthogonal(space.ambient_shape[0], rng, count)
    elif kind == "usp":
        K = exp_i(sample_batch(builtin_spec("usp", space.n), rng, count))
    else:
        rows, cols = space.ambient_shape
        return haar_unitary(rows, rng, count) @ X @ haar_unitary(cols, rng, count)
    return K @ X @ np.conj(np.swapaxes(K, -1, -2))


@pytest.mark.parametrize("name", ["gue", "io_even", "io_odd", "usp", "chiral", "lue", "wishart", "cue"])
def test_spectrum_is_conjugation_invariant(name, rng):
    spec = builtin_spec(name, 2, nu=1 if name == "lue" else 0)
    X = sample_batch(spec, rng, 10_000)
    before = extract_spectra(X, spec.space)
    after = extract_spectra(conjugate(X, spec.space, rng), spec.space)
    assert np.allclose(after, before, atol=1e-8)
    assert two_sample_report(f"conjugation {name}", after, before, alpha=0.001).passed


@pytest.mark.parametrize("name, zero", [("io_even", False), ("usp", False), ("io_odd", True)])
def test_eigenvalues_come_in_pairs(name, zero, rng):
    spec = builtin_spec(name, 3)
    X = sample_batch(spec, rng, 200)
    lam = np.sqrt(extract_spectra(X, spec.space))
    paired = [lam, -lam] + ([np.zeros((len(X), 1))] if zero else [])
    expected = np.sort(np.concatenate(paired, axis=1), axis=1)
    assert np.allclose(np.linalg.eigvalsh(X), expected, atol=1e-10)


# -----------
# WEYL DENSITIES
# -----------
def test_weyl_unitary_example():
    density = weyl_density(MatrixSpace("unitary", 2), lambda x: np.ones(len(x)))
    assert density([[0.0, pi]])[0] == pytest.approx(1 / (2 * pi ** 2))


def test_weyl_trivial_prefactors():
    herm = weyl_density(MatrixSpace("herm", 1), lambda x: np.exp(-x[:, 0]))
    assert herm([[0.7]])[0] == pytest.approx(np.exp(-0.7))
    chiral = weyl_density(MatrixSpace("chiral", 1, 0), lambda x: np.exp(-x[:, 0]) / pi)
    assert chiral([[1.3]])[0] == pytest.approx(np.exp(-1.3))


@pytest.mark.parametrize("name, n", [("gue", 2), ("gue", 3), ("chiral", 2), ("io_even", 2), ("io_odd", 2),
                                     ("usp", 2), ("wishart", 2), ("wishart", 3), ("cue", 2), ("cue", 3)])
def test_closed_forms_are_normalised(name, n):
    assert closed_form_density(builtin_spec(name, n)).integrate() == pytest.approx(1.0, rel=1e-10)


def test_closed_form_matches_weyl(real_points):
    spec = builtin_spec("gue", 2)
    assert np.allclose(gue_density(2)(real_points), ensemble_density(spec)(real_points), rtol=1e-10, atol=1e-300)


@hsettings(max_examples=30, deadline=None)
@given(st.lists(st.floats(min_value=0.05, max_value=8.0), min_size=2, max_size=2))
def test_lue_density_symmetric(x):
    f = lue_density(2, 1)
    assert f([x])[0] == pytest.approx(f([x[::-1]])[0], rel=1e-12, abs=1e-300)
    assert f([x])[0] >= 0


def test_cue_density_uniform_marginal():
    theta = np.linspace(-pi, pi, 7)
    values = cue_density(1)(theta[:, None])
    assert np.allclose(values, 1 / (2 * pi))
