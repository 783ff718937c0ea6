"""
Acceptance suites: each binds a derivative-principle prediction to an exact identity, a closed form or
Monte Carlo samples, and returns one ComparisonReport per check.
"""
import logging
from dataclasses import dataclass
from itertools import permutations
from math import pi

import numpy as np
from scipy import stats

from source.core.grid import Axis, GridDensity
from source.core.samplers import haar_unitary, sample_batch, sample_spectra
from source.core.spaces import HALF, Domain, EnsembleSpec, MatrixSpace, SpaceKind, WishartLike
from source.core.spectrum import extract_spectra, lu_diagonals_numeric, principal_minors
from source.derivative.convolution import additive_convolve, multiplicative_spherical, unitary_product_spherical
from source.derivative.principles import (
    derivative_principle_hankel_unified, derivative_principle_herm, derivative_principle_hermplus,
    derivative_principle_io_even, derivative_principle_io_odd, derivative_principle_unitary,
    derivative_principle_usp, eigenvalue_form_io,
)
from source.derivative.weight_model import unitary_coefficients
from source.errors import ConfigurationError
from source.haarparam.haar_model import build_unitary, lu_diagonals, minors_from_coordinates
from source.haarparam.sampling import (
    RadialPoint, haar_density_rphi, radius_bounds, sample_haar_coordinates, sample_haar_unitaries,
)
from source.spherical.group_mc import bessel_mc, gelfand_naimark_mc, hciz_mc
from source.spherical.kernels import bessel_group_kernel, gelfand_naimark, hciz_unitary, spherical_function
from source.spherical.spherical_model import (
    hermplus_normalization_point, spherical_hermplus_matrices, spherical_unitary_matrices,
)
from source.transforms.abel import abel_inverse, abel_inverse_composition, abel_inverse_explicit, abel_inverse_half
from source.transforms.fourier import fourier
from source.transforms.mellin import mellin
from source.transforms.quadrature import gauss_legendre
from source.verify.compare import (
    DistanceKind, compare, make_report, max_abs_report, mc_mean_report, moment_report, two_sample_report,
)
from source.verify.empirical import empirical_density
from source.verify.exact import prove_identity
from source.verify.marginal import gue2_level_density, marginal_level_density
from source.weights.atoms import flat_deriv, mellin_deriv
from source.weights.library import (
    builtin_spec, chiral_diagonal_weight, closed_form_density, cue_density, cue_weight, gaussian_diagonal_weight,
    gue_density, lue_density, wishart_density, wishart_lu_weight,
)
from source.weights.weight_function import WeightFunction

logger = logging.getLogger(__name__)

SUITE_NAMES = ("herm", "hankel", "hermplus", "unitary", "haarparam", "transforms")
CHECK_POINT_COUNT = 1000
POINTWISE_TOLERANCE = 1e-10
FACTOR_SAMPLES = 20_000
KERNEL_SAMPLES = 100_000
LU_DRAWS = 1000
HAAR_KS_DRAWS = 10_000
COEFFICIENT_TOLERANCE = 0.02
NEGATIVE_CONTROL_VARIANCE = 1.5

HERM_AXIS = Axis(-4.0, 4.0, 9)
HALF_AXIS = Axis(0.5, 11.5, 12)


@dataclass(frozen=True)
class SuiteContext:
    """
    Params:
        budget: Monte Carlo sample budget per sampled check
        seed: Root seed; every check draws from its own stream [seed, index]
        workers: Sampling threads
    """
    budget: int
    seed: int
    workers: int = None

    def __post_init__(self):
        if self.budget < 1:
            raise ConfigurationError(f"the sample budget must be positive, got {self.budget}")

    def stream(self, index):
        return [int(self.seed), int(index)]

    def rng(self, index):
        return np.random.default_rng(self.stream(index))

    def capped(self, cap):
        return min(self.budget, cap)


# -----------
# HELPERS
# -----------
def symmetrized(values):
    """Every coordinate permutation of every sample: histograms of the symmetric joint law."""
    values = np.asarray(values)
    return np.concatenate([values[:, list(p)] for p in permutations(range(values.shape[1]))])


def one_value_per_sample(values, rng):
    values = np.asarray(values)
    return values[np.arange(len(values)), rng.integers(0, values.shape[1], len(values))]


def exact_report(test_name, lhs, rhs):
    proof = prove_identity(lhs, rhs)
    return make_report(test_name, DistanceKind.EXACT, 0.0 if proof.proven else 1.0, 0.0,
                       status=proof.status, envelopes=proof.groups)


def check_points(domain, n, rng, count=CHECK_POINT_COUNT):
    if domain == Domain.REAL_LINE:
        return 2.0 * rng.standard_normal((count, n))
    if domain == Domain.HALF_LINE:
        return rng.exponential(2.0, (count, n)) + 1e-3
    return rng.uniform(-pi, pi, (count, n))


def pointwise_report(test_name, lhs, rhs, ctx, index, tolerance=POINTWISE_TOLERANCE, points=None):
    points = check_points(lhs.domain, lhs.n, ctx.rng(index)) if points is None else points
    return max_abs_report(test_name, lhs(points), rhs(points), tolerance, relative=True, seed=ctx.stream(index))


def _kernel_mc(test_name, exact, estimate, count, seed):
    mean, stderr = estimate
    return mc_mean_report(test_name, mean, stderr, exact, count, seed)


def _spherical_mean(space, spectra, s):
    values = spherical_function(space).batch(spectra, s, vary="x")
    return complex(values.mean()), float(np.sqrt(values.real.var() + values.imag.var()) / np.sqrt(len(values)))


# -----------
# HERM
# -----------
def herm_suite(ctx: SuiteContext):
    reports = []
    for n in (2, 3):
        predicted = derivative_principle_herm(gaussian_diagonal_weight(n))
        reports.append(exact_report(f"herm n={n}: principle equals GUE", predicted, gue_density(n)))
        reports.append(pointwise_report(f"herm n={n}: principle equals GUE at random points", predicted,
                                        gue_density(n), ctx, n))

    level = marginal_level_density(gue_density(2), Axis(-4.0, 4.0, 81))
    reports.append(max_abs_report("herm n=2: level density", level.values,
                                  gue2_level_density(level.axes[0].nodes), 1e-6))

    space = MatrixSpace(SpaceKind.HERM, 2)
    sample = sample_spectra(builtin_spec("gue", 2), ctx.budget, ctx.stream(10), ctx.workers)
    predicted = derivative_principle_herm(gaussian_diagonal_weight(2))
    emp = empirical_density(symmetrized(sample.values), HERM_AXIS)
    reports.append(compare(predicted, emp, DistanceKind.L1_HISTOGRAM, "herm n=2: MC joint density", ctx.stream(10)))
    reports.append(compare(gue2_level_density, one_value_per_sample(sample.values, ctx.rng(11)),
                           DistanceKind.KS, "herm n=2: MC level density", ctx.stream(11), support=(-9.0, 9.0)))

    other = sample_spectra(builtin_spec("gue", 2), ctx.budget, ctx.stream(12), ctx.workers)
    reports.append(two_sample_report("herm n=2: disjoint seeds agree", sample.values[:, 0], other.values[:, 0],
                                     ctx.stream(12)))

    convolved = additive_convolve(gaussian_diagonal_weight(2), gaussian_diagonal_weight(2), space)
    reports.append(exact_report("herm n=2: GUE + GUE equals GUE(2)", convolved, gue_density(2, variance=2.0)))

    count = ctx.capped(FACTOR_SAMPLES)
    rng = ctx.rng(13)
    spec = builtin_spec("gue", 2)
    C = extract_spectra(sample_batch(spec, rng, count) + sample_batch(spec, rng, count), space)
    for s in ctx.rng(14).uniform(-1.0, 1.0, (5, 2)):
        mean, stderr = _spherical_mean(space, C, s)
        reports.append(mc_mean_report(f"herm n=2: spherical factorisation at s={np.round(s, 3).tolist()}",
                                      mean, stderr, np.exp(-np.sum(s ** 2)), count, ctx.stream(13)))
    return reports


# -----------
# HANKEL CLASS
# -----------
def hankel_suite(ctx: SuiteContext):
    reports = []
    io_odd = derivative_principle_io_odd(gaussian_diagonal_weight(1))
    reports.append(exact_report("io_odd n=1: -f_diag'(sqrt x)", io_odd, closed_form_density(builtin_spec("io_odd", 1))))
    for name, principle in (("io_even", derivative_principle_io_even), ("io_odd", derivative_principle_io_odd),
                            ("usp", derivative_principle_usp)):
        predicted = principle(gaussian_diagonal_weight(2))
        closed = closed_form_density(builtin_spec(name, 2))
        reports.append(exact_report(f"{name} n=2: principle equals Weyl density", predicted, closed))

    reports.append(exact_report("chiral n=1 nu=0: e^{-x}", derivative_principle_hankel_unified(
        chiral_diagonal_weight(1), 0), lue_density(1)))
    for nu in (0, 1):
        predicted = derivative_principle_hankel_unified(chiral_diagonal_weight(2), nu)
        reports.append(pointwise_report(f"chiral n=2 nu={nu}: principle equals LUE at random points", predicted,
                                        lue_density(2, nu), ctx, 20 + nu, tolerance=1e-8))

    for parity, nu in (("even", -HALF), ("odd", HALF)):
        form = eigenvalue_form_io(gaussian_diagonal_weight(2), parity)
        radial = derivative_principle_hankel_unified(gaussian_diagonal_weight(2), nu)
        lam = check_points(Domain.HALF_LINE, 2, ctx.rng(22))
        reports.append(max_abs_report(f"io_{parity} n=2: signed eigenvalue form", form(lam),
                                      radial(lam ** 2) * np.prod(lam, axis=1), POINTWISE_TOLERANCE, relative=True))

    sample = sample_spectra(builtin_spec("io_odd", 1), ctx.budget, ctx.stream(30), ctx.workers)
    reports.append(compare(io_odd, sample.values, DistanceKind.KS, "io_odd n=1: MC", ctx.stream(30),
                           cdf=stats.chi2(3).cdf))
    emp = empirical_density(sample.values, Axis(0.5, 19.5, 20), Domain.HALF_LINE)
    reports.append(compare(io_odd, emp, DistanceKind.L1_HISTOGRAM, "io_odd n=1: MC histogram", ctx.stream(30)))

    chiral = builtin_spec("chiral", 2)
    sample = sample_spectra(chiral, ctx.budget, ctx.stream(31), ctx.workers)
    emp = empirical_density(symmetrized(sample.values), HALF_AXIS, Domain.HALF_LINE)
    predicted = derivative_principle_hankel_unified(chiral_diagonal_weight(2), 0)
    reports.append(compare(predicted, emp, DistanceKind.L1_HISTOGRAM, "chiral n=2 nu=0: MC joint density",
                           ctx.stream(31)))

    space1 = MatrixSpace(SpaceKind.CHIRAL, 1, 0)
    convolved = additive_convolve(chiral_diagonal_weight(1), chiral_diagonal_weight(1), space1)
    rng = ctx.rng(32)
    spec1 = builtin_spec("chiral", 1)
    summed = extract_spectra(sample_batch(spec1, rng, ctx.budget) + sample_batch(spec1, rng, ctx.budget), space1)
    emp = empirical_density(summed, Axis(0.5, 19.5, 20), Domain.HALF_LINE)
    reports.append(compare(convolved, emp, DistanceKind.L1_HISTOGRAM, "chiral n=1: chiral + chiral MC",
                           ctx.stream(32), threshold=0.02))

    space2 = MatrixSpace(SpaceKind.CHIRAL, 2, 0)
    count = ctx.capped(FACTOR_SAMPLES)
    rng = ctx.rng(33)
    C = extract_spectra(sample_batch(chiral, rng, count) + sample_batch(chiral, rng, count), space2)
    for s in ctx.rng(34).uniform(0.1, 1.0, (5, 2)):
        mean, stderr = _spherical_mean(space2, C, s)
        reports.append(mc_mean_report(f"chiral n=2: spherical factorisation at s={np.round(s, 3).tolist()}",
                                      mean, stderr, np.exp(-2 * np.sum(s)), count, ctx.stream(33)))
    return reports


# -----------
# HERM+
# -----------
def _bartlett_density(n, dof):
    """Joint density of the LU diagonals u_jj ~ Gamma(dof - j + 1) of a complex Wishart matrix."""
    def density(points):
        points = np.atleast_2d(points)
        return np.prod([stats.gamma(dof - j).pdf(points[:, j]) for j in range(n)], axis=0)
    return density


def _sqrtm_psd(A):
    w, V = np.linalg.eigh(A)
    return (V * np.sqrt(w)[..., None, :]) @ np.conj(np.swapaxes(V, -1, -2))


def hermplus_suite(ctx: SuiteContext):
    reports = []
    reports.append(exact_report("herm_plus n=2: Wishart LU weight gives LUE",
                                derivative_principle_hermplus(wishart_lu_weight(2, 2)), lue_density(2, 0)))
    reports.append(exact_report("herm_plus n=3 dof=4: Wishart LU weight gives Wishart density",
                                derivative_principle_hermplus(wishart_lu_weight(3, 4)), wishart_density(3, 4)))

    spec = builtin_spec("wishart", 2)
    sample = sample_spectra(spec, ctx.budget, ctx.stream(40), ctx.workers, auxiliary="lu")
    for j in range(2):
        reports.append(compare(None, sample.auxiliary[:, j], DistanceKind.KS, f"herm_plus n=2: Bartlett u_{j + 1}",
                               ctx.stream(40), cdf=stats.gamma(2 - j).cdf))
    emp = empirical_density(sample.auxiliary, HALF_AXIS, Domain.HALF_LINE)
    reports.append(compare(_bartlett_density(2, 2), emp, DistanceKind.L1_HISTOGRAM,
                           "herm_plus n=2: LU diagonals against the Bartlett law", ctx.stream(40)))
    emp = empirical_density(symmetrized(sample.values), HALF_AXIS, Domain.HALF_LINE)
    reports.append(compare(derivative_principle_hermplus(wishart_lu_weight(2, 2)), emp, DistanceKind.L1_HISTOGRAM,
                           "herm_plus n=2: MC eigenvalue density", ctx.stream(40)))

    dof = 3
    gA = gB = wishart_lu_weight(2, dof)
    count = ctx.capped(FACTOR_SAMPLES)
    rng = ctx.rng(41)
    wishart = EnsembleSpec(MatrixSpace(SpaceKind.HERM_PLUS, 2), WishartLike(dof))
    root = _sqrtm_psd(sample_batch(wishart, rng, count))
    C = root @ sample_batch(wishart, rng, count) @ root
    base = hermplus_normalization_point(2)
    for s in base + ctx.rng(42).uniform(0.0, 0.5, (5, 2)):
        mean, stderr = spherical_hermplus_matrices(C, s)
        expected = complex(multiplicative_spherical(gA, gB, s[None, :])[0])
        reports.append(mc_mean_report(f"herm_plus n=2: multiplicative factorisation at s={np.round(s, 3).tolist()}",
                                      mean, stderr, expected, count, ctx.stream(41)))
    return reports


# -----------
# UNITARY
# -----------
def _exact_coefficients(g: WeightFunction, keys):
    n = g.n
    table = {tuple(a.k for a in atoms): c for atoms, c in g.terms}
    return np.array([complex(table.get(tuple(-k for k in s), 0.0)) * (2 * pi) ** n for s in keys])


def unitary_suite(ctx: SuiteContext):
    reports = []
    for n in (2, 3):
        reports.append(exact_report(f"unitary n={n}: CUE from the permanent weight",
                                    derivative_principle_unitary(cue_weight(n)), cue_density(n)))

    level = marginal_level_density(cue_density(2), Axis(-pi, pi, 33))
    reports.append(max_abs_report("unitary n=2: level density is uniform", level.values,
                                  np.full(33, 1 / (2 * pi)), 1e-8))

    rng = ctx.rng(50)
    U = haar_unitary(2, rng, ctx.budget)
    coefficients = unitary_coefficients(U, cutoff=2)
    keys = list(coefficients)
    estimated = np.array([coefficients[s][0] for s in keys])
    reports.append(max_abs_report("unitary n=2: MC Fourier coefficients of g", estimated,
                                  _exact_coefficients(cue_weight(2), keys), COEFFICIENT_TOLERANCE,
                                  seed=ctx.stream(50)))

    angles = sample_spectra(builtin_spec("cue", 2), ctx.budget, ctx.stream(51), ctx.workers).values
    reports.append(compare(None, one_value_per_sample(angles, ctx.rng(52)), DistanceKind.KS,
                           "unitary n=2: eigenangles uniform", ctx.stream(51),
                           cdf=stats.uniform(-pi, 2 * pi).cdf))

    count = ctx.capped(FACTOR_SAMPLES)
    rng = ctx.rng(53)
    theta_a, theta_b = np.array([0.3, -1.1]), np.array([2.0, 0.4])
    Ka, Kb = haar_unitary(2, rng, count), haar_unitary(2, rng, count)
    A = Ka @ (np.exp(1j * theta_a)[:, None] * np.conj(np.swapaxes(Ka, -1, -2)))
    B = Kb @ (np.exp(1j * theta_b)[:, None] * np.conj(np.swapaxes(Kb, -1, -2)))
    for s in ((1, 0), (2, 0), (0, -1), (2, 1), (1, -1)):
        mean, stderr = spherical_unitary_matrices(A @ B, s)
        expected = complex(unitary_product_spherical(theta_a, theta_b, np.array(s, dtype=float)))
        reports.append(mc_mean_report(f"unitary n=2: product factorisation at s={list(s)}", mean, stderr, expected,
                                      count, ctx.stream(53)))
    return reports


# -----------
# HAAR PARAMETRISATION
# -----------
def haar_total_mass(n, order=16):
    """Integral of the radii/phase density over its range, n = 2 or 3."""
    angles = (2 * pi) ** (n * n - (n - 1) - (n - 1) * (n - 2) // 2)
    if n == 2:
        r, w = gauss_legendre(0.0, 1.0, order)
        values = [haar_density_rphi(2, RadialPoint(0.0, np.array([ri]), np.zeros(1), np.zeros((2, 2)),
                                                   np.zeros((2, 2)))) for ri in r]
        return angles * float(np.dot(w, values))
    if n == 3:
        total = 0.0
        p, wp = gauss_legendre(0.0, pi / 2, order)
        for phi13, w13 in zip(p, wp):
            phi = np.zeros((3, 3))
            phi[0, 2] = phi13
            bounds = radius_bounds(3, phi)
            r1, w1 = gauss_legendre(0.0, bounds[0], order)
            r2, w2 = gauss_legendre(0.0, bounds[1], order)
            for a, wa in zip(r1, w1):
                for b, wb in zip(r2, w2):
                    point = RadialPoint(0.0, np.array([a, b]), np.zeros(2), phi, np.zeros((3, 3)))
                    total += w13 * wa * wb * haar_density_rphi(3, point)
        return angles * total
    raise ConfigurationError(f"total mass is available for n = 2, 3, got {n}")


def _first_minor_radial(n, r, order):
    if n == 2:
        point = RadialPoint(0.0, np.array([r]), np.zeros(1), np.zeros((2, 2)), np.zeros((2, 2)))
        return (2 * pi) ** 2 * haar_density_rphi(2, point)
    # R_1 = cos phi_13 bounds the first radius
    total = 0.0
    p, wp = gauss_legendre(0.0, np.arccos(r), order)
    for phi13, w13 in zip(p, wp):
        phi = np.zeros((3, 3))
        phi[0, 2] = phi13
        r2, w2 = gauss_legendre(0.0, radius_bounds(3, phi)[1], order)
        for b, wb in zip(r2, w2):
            point = RadialPoint(0.0, np.array([r, b]), np.zeros(2), phi, np.zeros((3, 3)))
            total += w13 * wb * haar_density_rphi(3, point)
    return (2 * pi) ** 5 * total


def haar_first_minor_density(n, points, order=16):
    """
    Haar density of the first leading minor in polar form (r_1, phase_1), n = 2 or 3,
    from haar_density_rphi integrated over the other coordinates.
    Params:
        n: Matrix size
        points: array (M, 2) of (r_1, phase_1)
    Returns:
        array (M,)
    """
    if n not in (2, 3):
        raise ConfigurationError(f"first-minor marginal is available for n = 2, 3, got {n}")
    points = np.atleast_2d(np.asarray(points, dtype=float))
    r, phase = points[:, 0], points[:, 1]
    inside = (r > 0) & (r < 1) & (np.abs(phase) <= pi)
    out = np.zeros(len(points))
    # no phase dependence
    radii, index = np.unique(r[inside], return_inverse=True)
    out[inside] = np.array([_first_minor_radial(n, ri, order) for ri in radii])[index]
    return out


def haarparam_suite(ctx: SuiteContext):
    reports = []
    draws = ctx.capped(LU_DRAWS)
    for n in range(2, 6):
        rng = ctx.rng(60 + n)
        closed, numeric, u_closed, u_numeric = [], [], [], []
        for _ in range(draws):
            c = sample_haar_coordinates(n, rng)
            V = build_unitary(c)
            closed.append(minors_from_coordinates(c))
            numeric.append(principal_minors(V))
            u_closed.append(lu_diagonals(c).u)
            u_numeric.append(lu_diagonals_numeric(V))
        reports.append(max_abs_report(f"haarparam n={n}: closed-form leading minors", np.array(closed),
                                      np.array(numeric), 1e-12, seed=ctx.stream(60 + n)))
        reports.append(max_abs_report(f"haarparam n={n}: closed-form LU diagonals", np.array(u_closed),
                                      np.array(u_numeric), 1e-12, relative=True, seed=ctx.stream(60 + n)))

    count = ctx.capped(HAAR_KS_DRAWS)
    for n in (2, 3, 4):
        V = sample_haar_unitaries(n, count, ctx.rng(70 + n))
        Q = haar_unitary(n, ctx.rng(80 + n), count)
        trace_v, trace_q = np.trace(V, axis1=-2, axis2=-1), np.trace(Q, axis1=-2, axis2=-1)
        for part, extract in (("Re", np.real), ("Im", np.imag)):
            reports.append(two_sample_report(f"haarparam n={n}: {part} tr V against QR sampler", extract(trace_v),
                                             extract(trace_q), ctx.stream(70 + n)))
        minors_v, minors_q = np.abs(principal_minors(V)), np.abs(principal_minors(Q))
        for l in range(n - 1):
            reports.append(two_sample_report(f"haarparam n={n}: |det V_{l + 1}| against QR sampler",
                                             minors_v[:, l], minors_q[:, l], ctx.stream(70 + n)))
        reports.append(moment_report(f"haarparam n={n}: E|tr V|^2 = 1", np.abs(trace_v) ** 2, 1.0,
                                     ctx.stream(70 + n)))
        if n < 4:
            bins = (Axis(0.05, 0.95, 10), Axis(-11 * pi / 12, 11 * pi / 12, 12))
            for origin, U in (("coordinate", V), ("QR", Q)):
                first = principal_minors(U)[:, 0]
                hist = empirical_density(np.stack([np.abs(first), np.angle(first)], axis=1), bins)
                reports.append(compare(lambda p, n=n: haar_first_minor_density(n, p), hist, DistanceKind.CHI2,
                                       f"haarparam n={n}: first-minor radius/phase of the {origin} sampler",
                                       ctx.stream(80 + n)))

    for n in (2, 3):
        reports.append(max_abs_report(f"haarparam n={n}: radii/phase density normalisation",
                                      [haar_total_mass(n)], [1.0], 1e-8))
    return reports


# -----------
# TRANSFORMS
# -----------
def transforms_suite(ctx: SuiteContext):
    reports = []
    rng = ctx.rng(90)
    w = gaussian_diagonal_weight(1)
    s = rng.uniform(-3, 3, (20, 1))
    grid = GridDensity.from_function(w, Domain.REAL_LINE, (Axis(-12.0, 12.0, 2401),))
    reports.append(max_abs_report("fourier: grid rule against closed form", fourier(grid, s).values,
                                  fourier(w, s).values, 1e-4, relative=True))

    w2 = WeightFunction.gaussian_product(2, 0.7) + WeightFunction.gaussian_product(2, 1.3, 0.2)
    s2 = rng.uniform(-2, 2, (20, 2))
    reports.append(max_abs_report("fourier: -d/dx eigen-relation", fourier(w2.map_atoms(flat_deriv, 0), s2).values,
                                  1j * s2[:, 0] * fourier(w2, s2).values, 1e-10, relative=True))

    g = WeightFunction.gamma_product(2, power=0.5, rate=1.3) + WeightFunction.gamma_product(2, power=1.0, rate=0.8)
    t = 1.5 + rng.uniform(0, 2, (20, 2)) + 1j * rng.uniform(-2, 2, (20, 2))
    reports.append(max_abs_report("mellin: -x d/dx eigen-relation", mellin(g.map_atoms(mellin_deriv, 0), t).values,
                                  t[:, 0] * mellin(g, t).values, 1e-10, relative=True))
    g1 = WeightFunction.gamma_product(1, power=1.0, rate=1.0)
    grid = GridDensity.from_function(g1, Domain.HALF_LINE, (Axis(0.0, 60.0, 6001),), tol=None)
    t1 = rng.uniform(1.5, 3.0, (10, 1))
    reports.append(max_abs_report("mellin: grid rule against closed form", mellin(grid, t1).values,
                                  mellin(g1, t1).values, 1e-4, relative=True))

    x = rng.uniform(0.2, 3.0, (5, 1))
    for nu in (0, 1, 2):
        composition = abel_inverse_composition(w, nu, x).values
        explicit = abel_inverse_explicit(w, nu, x).values
        reports.append(max_abs_report(f"abel nu={nu}: explicit against composition", explicit, composition, 1e-4,
                                      relative=True))
        reports.append(max_abs_report(f"abel nu={nu}: symbolic against composition", abel_inverse(w, nu)(x),
                                      composition, 1e-4, relative=True))
    fine = GridDensity.from_function(w, Domain.REAL_LINE, (Axis(-8.0, 8.0, 8001),))
    x_axis = Axis(0.2, 3.0, 15)
    for sign in (-HALF, HALF):
        reports.append(max_abs_report(f"abel nu={sign}: closed form against composition",
                                      abel_inverse_half(w, sign)(x), abel_inverse_composition(w, sign, x).values,
                                      1e-5, relative=True))
        symbolic = abel_inverse_half(w, sign)(x_axis.nodes[:, None])
        gridded = abel_inverse_half(fine, sign, (x_axis,)).values
        reports.append(max_abs_report(f"abel nu={sign}: closed form on a grid", gridded, symbolic, 1e-4,
                                      relative=True))

    count = ctx.capped(KERNEL_SAMPLES)
    kernel_points = {
        2: ([0.3, -0.5], [1.0, 0.4], [0.5, 2.0], [1.3, 0.2], [0.4, 1.1], [0.7, 0.3]),
        3: ([0.3, -0.5, 0.9], [1.0, 0.4, -0.2], [0.5, 1.2, 2.0], [2.4, 0.9, 0.2], [0.4, 1.1, 0.7], [0.7, 0.3, 0.5]),
    }
    for n, (x, s, gn_x, gn_s, bx, bs) in kernel_points.items():
        base = 91 if n == 2 else 101
        reports.append(_kernel_mc(f"hciz n={n} against the group average", hciz_unitary(x, s),
                                  hciz_mc(x, s, count, ctx.rng(base)), count, ctx.stream(base)))
        gn_x, gn_s = np.array(gn_x), np.array(gn_s)
        reports.append(_kernel_mc(f"gelfand-naimark n={n} against the group average", gelfand_naimark(gn_x, gn_s),
                                  gelfand_naimark_mc(gn_x, gn_s, count, ctx.rng(base + 1)), count,
                                  ctx.stream(base + 1)))
        for k, nu in enumerate((0, 1, -HALF, HALF)):
            reports.append(_kernel_mc(f"bessel kernel nu={nu} n={n} against the group average",
                                      bessel_group_kernel(bx, bs, nu),
                                      bessel_mc(bx, bs, nu, count, ctx.rng(base + 2 + k)),
                                      count, ctx.stream(base + 2 + k)))
    return reports


# -----------
# NEGATIVE CONTROL
# -----------
def negative_control(ctx: SuiteContext):
    """GUE n=2 samples against the GUE density of the wrong variance; the report must fail."""
    sample = sample_spectra(builtin_spec("gue", 2), ctx.budget, ctx.stream(100), ctx.workers)
    emp = empirical_density(symmetrized(sample.values), HERM_AXIS)
    wrong = gue_density(2, variance=NEGATIVE_CONTROL_VARIANCE)
    return [compare(wrong, emp, DistanceKind.L1_HISTOGRAM,
                    f"negative control: GUE n=2 against variance {NEGATIVE_CONTROL_VARIANCE}", ctx.stream(100))]


SUITES = {
    "herm": herm_suite,
    "hankel": hankel_suite,
    "hermplus": hermplus_suite,
    "unitary": unitary_suite,
    "haarparam": haarparam_suite,
    "transforms": transforms_suite,
}
