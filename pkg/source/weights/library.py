from itertools import permutations
from math import pi

import numpy as np
from scipy.special import gammaln

from source.core.spaces import (
    Domain, EnsembleSpec, Gaussian, Ginibre, HaarUniform, MatrixSpace, SpaceKind, WishartLike,
)
from source.core.weyl import orbit_parameters, weyl_prefactor
from source.errors import ConfigurationError
from source.weights.atoms import GammaAtom, GaussAtom, TrigAtom
from source.weights.operators import multiply_vandermonde
from source.weights.weight_function import WeightFunction


# -----------
# WEIGHTS
# -----------
def gaussian_diagonal_weight(n, variance=1.0):
    """Product of N(0, variance) densities: f_diag of the Gaussian Herm, io and usp ensembles."""
    return WeightFunction.gaussian_product(n, variance)


def chiral_diagonal_weight(n, scale=1.0):
    """f_diag of the chiral Ginibre ensemble: Re x_ll ~ N(0, scale^2/2)."""
    return WeightFunction.gaussian_product(n, scale ** 2 / 2)


def wishart_lu_weight(n, dof):
    """
    g(u) = prod_j u_j^(dof-n) e^{-u_j} / prod_{j=1}^n Gamma(dof-j+1), the LU weight of the
    complex Wishart ensemble (Bartlett: u_jj ~ Gamma(dof-j+1)).
    """
    if dof < n:
        raise ConfigurationError(f"Wishart degrees of freedom must be >= n={n}, got {dof}")
    coeff = float(np.exp(-sum(gammaln(dof - j + 1) for j in range(1, n + 1))))
    return WeightFunction.gamma_product(n, power=dof - n, rate=1.0, coeff=coeff)


def cue_weight(n):
    """g(theta) = (2 pi)^{-n} perm[e^{-i (j-1) theta_k}]."""
    return WeightFunction(Domain.TORUS, n, [
        ((2 * pi) ** -n, tuple(TrigAtom(-perm[k]) for k in range(n))) for perm in permutations(range(n))
    ])


def diagonal_weight(spec: EnsembleSpec):
    """The built-in weight feeding the derivative principle of a built-in ensemble."""
    space, density = spec.space, spec.density
    if isinstance(density, Gaussian) and space.kind in (SpaceKind.HERM, SpaceKind.IO_EVEN,
                                                        SpaceKind.IO_ODD, SpaceKind.USP):
        return gaussian_diagonal_weight(space.n, density.scale ** 2)
    if isinstance(density, Ginibre):
        return chiral_diagonal_weight(space.n, density.scale)
    if isinstance(density, WishartLike):
        return wishart_lu_weight(space.n, density.dof)
    if isinstance(density, HaarUniform):
        return cue_weight(space.n)
    raise ConfigurationError(f"no closed-form weight for ({spec.describe()}, {space.kind.value})")


# -----------
# CLOSED-FORM SPECTRAL DENSITIES
# -----------
def closed_form_density(spec: EnsembleSpec):
    """
    Joint spectral density of a built-in ensemble as a WeightFunction, from the Weyl formula.
    """
    space = spec.space
    n = space.n
    log_norm, rate, power, degree = orbit_parameters(spec)
    coeff = weyl_prefactor(space) * np.exp(-log_norm)

    if space.kind == SpaceKind.UNITARY:
        base = WeightFunction(Domain.TORUS, n, [(coeff, (TrigAtom(0),) * n)])
        return multiply_vandermonde(multiply_vandermonde(base, step=1), step=-1)

    if space.kind == SpaceKind.HERM:
        base = WeightFunction(Domain.REAL_LINE, n, [(coeff, (GaussAtom(0, rate, 0.0),) * n)])
        return multiply_vandermonde(base, power=2)

    if space.is_hankel:
        power = power + space.nu_value
    base = WeightFunction(Domain.HALF_LINE, n, [(coeff, (GammaAtom(float(power), rate),) * n)])
    return multiply_vandermonde(base, power=2)


def gue_density(n, variance=1.0):
    return closed_form_density(EnsembleSpec(MatrixSpace(SpaceKind.HERM, n), Gaussian(np.sqrt(variance))))


def lue_density(n, nu=0):
    """Squared singular values of the n x (n+nu) complex Ginibre ensemble."""
    return closed_form_density(EnsembleSpec(MatrixSpace(SpaceKind.CHIRAL, n, nu), Ginibre()))


def wishart_density(n, dof):
    return closed_form_density(EnsembleSpec(MatrixSpace(SpaceKind.HERM_PLUS, n), WishartLike(dof)))


def cue_density(n):
    return closed_form_density(EnsembleSpec(MatrixSpace(SpaceKind.UNITARY, n), HaarUniform()))


BUILTINS = {
    "gue": (SpaceKind.HERM,
            lambda n, nu, scale, dof: EnsembleSpec(MatrixSpace(SpaceKind.HERM, n), Gaussian(scale))),
    "io_even": (SpaceKind.IO_EVEN,
                lambda n, nu, scale, dof: EnsembleSpec(MatrixSpace(SpaceKind.IO_EVEN, n), Gaussian(scale))),
    "io_odd": (SpaceKind.IO_ODD,
               lambda n, nu, scale, dof: EnsembleSpec(MatrixSpace(SpaceKind.IO_ODD, n), Gaussian(scale))),
    "usp": (SpaceKind.USP,
            lambda n, nu, scale, dof: EnsembleSpec(MatrixSpace(SpaceKind.USP, n), Gaussian(scale))),
    "chiral": (SpaceKind.CHIRAL,
               lambda n, nu, scale, dof: EnsembleSpec(MatrixSpace(SpaceKind.CHIRAL, n, nu), Ginibre(scale))),
    "lue": (SpaceKind.CHIRAL,
            lambda n, nu, scale, dof: EnsembleSpec(MatrixSpace(SpaceKind.CHIRAL, n, nu), Ginibre(scale))),
    "wishart": (SpaceKind.HERM_PLUS,
                lambda n, nu, scale, dof: EnsembleSpec(MatrixSpace(SpaceKind.HERM_PLUS, n), WishartLike(dof or n))),
    "cue": (SpaceKind.UNITARY,
            lambda n, nu, scale, dof: EnsembleSpec(MatrixSpace(SpaceKind.UNITARY, n), HaarUniform())),
}


def builtin_spec(name, n, nu=0, scale=1.0, dof=None):
    """EnsembleSpec of a named built-in ensemble; dof only applies to wishart (default n)."""
    try:
        _, make = BUILTINS[name]
    except KeyError as e:
        raise ConfigurationError(f"unknown builtin {name!r}, choose from {sorted(BUILTINS)}") from e
    if dof is not None and name != "wishart":
        raise ConfigurationError(f"dof applies to the wishart builtin only, not {name!r}")
    return make(n, nu, scale, dof)
