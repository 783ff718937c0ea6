import logging
from math import factorial, pi

import numpy as np
from scipy.special import gammaln

from source.core import spectrum
from source.core.spaces import (
    CustomLogDensity, EnsembleSpec, Gaussian, Ginibre, HaarUniform, MatrixSpace, SpaceKind, WishartLike,
    factorial_product, hankel_constant, vandermonde,
)
from source.errors import ConfigurationError

logger = logging.getLogger(__name__)


def weyl_prefactor(space: MatrixSpace):
    """
    Constant in front of Delta(x)^2 (times prod x^nu for the Hankel class) in the Weyl integration formula.
    """
    n = space.n
    if space.kind in (SpaceKind.HERM, SpaceKind.HERM_PLUS):
        return pi ** (n * (n - 1) / 2) / factorial_product(n)
    if space.kind == SpaceKind.UNITARY:
        return 1.0 / ((2 * pi) ** n * factorial(n))
    nu = space.nu_value
    c = hankel_constant(n, nu)
    if space.kind == SpaceKind.USP:
        c *= 2.0 ** (n * (n - 1))
    return pi ** (n * (n + nu)) / (factorial(n) * c)


def weyl_density(space: MatrixSpace, F_on_orbit):
    """
    Joint density of the spectral values from the matrix density restricted to the orbit iota(x).
    Params:
        space: Matrix space
        F_on_orbit: callable, points (M, n) -> F(iota(x)) (M,)
    Returns:
        callable, points (M, n) -> f(x) (M,)
    """
    pref = weyl_prefactor(space)
    kind, nu = space.kind, space.nu_value

    def density(points):
        x = np.atleast_2d(np.asarray(points, dtype=float))
        F = np.asarray(F_on_orbit(x))
        if kind == SpaceKind.UNITARY:
            return pref * np.abs(vandermonde(np.exp(1j * x))) ** 2 * F
        base = pref * vandermonde(x) ** 2 * F
        if space.is_hankel:
            with np.errstate(divide="ignore"):
                base = base * np.prod(x ** nu, axis=-1)
        return base

    return density


def orbit_parameters(spec: EnsembleSpec):
    """
    Exponential-family form of a built-in matrix density on the orbit:
    F(iota(x)) = exp(-log_norm) * prod_j x_j^power * exp(-rate * sum_j x_j^degree).
    Returns:
        (log_norm, rate, power, degree)
    """
    space, density = spec.space, spec.density
    n, kind = space.n, space.kind

    if isinstance(density, HaarUniform):
        return 0.0, 0.0, 0, 1
    if isinstance(density, WishartLike):
        m = density.dof
        log_norm = (n * (n - 1) / 2) * np.log(pi) + sum(gammaln(m - j + 1) for j in range(1, n + 1))
        return log_norm, 1.0, m - n, 1
    if isinstance(density, Ginibre):
        v = density.scale ** 2
        return n * (n + int(space.nu)) * np.log(pi * v), 1.0 / v, 0, 1
    if isinstance(density, Gaussian):
        v = density.scale ** 2
        if kind == SpaceKind.HERM:
            return (n / 2) * np.log(2 * pi * v) + (n * (n - 1) / 2) * np.log(pi * v), 1.0 / (2 * v), 0, 2
        if kind in (SpaceKind.IO_EVEN, SpaceKind.IO_ODD):
            m = space.ambient_shape[0]
            return (m * (m - 1) / 4) * np.log(2 * pi * v), 1.0 / (2 * v), 0, 1
        if kind == SpaceKind.USP:
            return 1.5 * n * np.log(2 * pi * v) + n * (n - 1) * np.log(pi * v), 1.0 / (2 * v), 0, 1

    raise ConfigurationError(f"no orbit density for ({spec.describe()}, {kind.value})")


def orbit_density(spec: EnsembleSpec):
    """
    The normalised matrix density F evaluated on iota(x) for a built-in ensemble,
    or exp(log F) through the callback for a custom one.
    Returns:
        callable, points (M, n) -> values (M,)
    """
    space, density = spec.space, spec.density

    if isinstance(density, CustomLogDensity):
        def custom(points):
            x = np.atleast_2d(np.asarray(points, dtype=float))
            return np.exp([density.log_density(spectrum.embed(space, row)) for row in x])
        return custom

    log_norm, rate, power, degree = orbit_parameters(spec)

    def builtin(points):
        x = np.atleast_2d(np.asarray(points, dtype=float))
        log_f = -rate * (x ** degree).sum(-1) - log_norm
        if power:
            with np.errstate(divide="ignore"):
                log_f = log_f + power * np.log(x).sum(-1)
        return np.exp(log_f)

    return builtin


def ensemble_density(spec: EnsembleSpec):
    """Joint spectral density of a built-in ensemble through the Weyl formula."""
    return weyl_density(spec.space, orbit_density(spec))
