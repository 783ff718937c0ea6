import logging
from dataclasses import dataclass
from math import factorial, prod
from typing import Callable

import numpy as np

from source.core.spaces import MatrixSpace, SpaceKind, hankel_constant, hankel_sign
from source.core.spectrum import principal_minors
from source.spherical.divided import batch_ratio, determinant_ratio
from source.transforms.hankel import bessel_kernel, check_nu

logger = logging.getLogger(__name__)


def _exp_kernel(x, s):
    return np.exp(1j * x * s)


def _power_kernel(x, s):
    return np.exp(s * np.log(x + 0j))


def _positive_radius(x):
    """Contour radius that keeps clusters of positive nodes away from the origin."""
    return min(0.5, 0.5 * float(np.abs(np.asarray(x)).min()))


def hciz_constant(n):
    """prod_{j=1}^{n-1} j! (-i)^{n(n-1)/2}, the factor absorbing 1/Delta(ix) = (-i)^{n(n-1)/2}/Delta(x)."""
    return prod(factorial(j) for j in range(1, n)) * (-1j) ** (n * (n - 1) // 2)


def hciz_unitary(x, s):
    """
    HCIZ integral prod_{j=1}^{n-1} j! det[e^{i x_j s_k}] / (Delta(ix) Delta(s)).
    Params:
        x, s: n reals each; coinciding entries are handled by divided differences
    Returns:
        complex
    """
    x, s = np.asarray(x, dtype=float).ravel(), np.asarray(s, dtype=float).ravel()
    return hciz_constant(len(x)) * determinant_ratio(_exp_kernel, x, s)


def bessel_constant(n, nu):
    return hankel_sign(n) * hankel_constant(n, nu)


def _bessel(nu):
    def kernel(x, s):
        return bessel_kernel(x * s, nu)
    return kernel


def bessel_group_kernel(x, s, nu):
    """
    Group integral of the Hankel class:
    sigma_n prod_{j=0}^{n-1} j! Gamma(j+nu+1) det[J_nu(2 sqrt(x_j s_k)) (x_j s_k)^{-nu/2}] / (Delta(x) Delta(s)),
    sigma_n = (-1)^{n(n-1)/2} so that the kernel is 1 at s = 0.
    """
    nu = check_nu(nu)
    x, s = np.asarray(x, dtype=float).ravel(), np.asarray(s, dtype=float).ravel()
    return bessel_constant(len(x), nu) * determinant_ratio(_bessel(nu), x, s).real


def gelfand_naimark(x, s):
    """
    Multiplicative spherical function prod_{j=0}^{n-1} j! det[x_j^{s_k}] / (Delta(x) Delta(s)).
    Params:
        x: n positive (or unit-modulus) nodes
        s: n complex parameters
    Returns:
        complex; equal to 1 at s = (n-1, ..., 0)
    """
    x = np.asarray(x).ravel()
    s = np.asarray(s).ravel()
    n = len(x)
    return prod(factorial(j) for j in range(n)) * determinant_ratio(
        _power_kernel, x, s, radius_x=_positive_radius(x))


def trivial_weight(n):
    """s_0 = (n-1, ..., 0)."""
    return np.arange(n - 1, -1, -1, dtype=float)


def generalized_power(X, s):
    """
    |X|^s = prod_l (det X_{l x l})^{s_l - s_{l+1}}, s_{n+1} = 0, from the leading principal minors.
    Params:
        X: array (..., n, n)
        s: n complex exponents
    Returns:
        array (...)
    """
    s = np.asarray(s)
    minors = principal_minors(X).astype(complex)
    steps = s - np.concatenate([s[1:], [0]])
    return np.prod(np.exp(steps * np.log(minors)), axis=-1)


@dataclass(frozen=True)
class SphericalFunction:
    """
    phi(x, s) of a matrix space, symmetric in x and in s separately.
    Coinciding arguments go through the divided-difference limit of the determinant ratio.
    """
    space: MatrixSpace
    evaluator: Callable
    degenerate_strategy: str = "divided differences"

    def __call__(self, x, s):
        return self.evaluator(x, s)

    def batch(self, X, s, vary="x"):
        """phi over many x rows with s fixed (vary="x"), or many s rows with x fixed (vary="s")."""
        kind, n = self.space.kind, self.space.n
        if kind == SpaceKind.HERM:
            return hciz_constant(n) * batch_ratio(_exp_kernel, X, s, vary)
        if self.space.is_hankel:
            nu = self.space.nu_value
            return bessel_constant(n, nu) * batch_ratio(_bessel(nu), X, s, vary).real
        const = prod(factorial(j) for j in range(n))
        if kind == SpaceKind.UNITARY:
            return const * batch_ratio(_power_kernel, X, s, vary)
        # positive nodes: keep the contour of the fixed x side away from 0
        if vary == "s":
            return const * batch_ratio(_power_kernel, X, s, vary, radius_fixed=_positive_radius(s))
        return const * batch_ratio(_power_kernel, X, s, vary, radius_vary=_positive_radius(X))


def spherical_function(space: MatrixSpace):
    """The spherical function of a space; unitary nodes are e^{i theta}."""
    kind = space.kind
    if kind == SpaceKind.HERM:
        return SphericalFunction(space, hciz_unitary)
    if space.is_hankel:
        nu = space.nu_value
        return SphericalFunction(space, lambda x, s: bessel_group_kernel(x, s, nu))
    return SphericalFunction(space, gelfand_naimark)
