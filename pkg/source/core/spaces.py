import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial, prod
from typing import Callable, Optional

import numpy as np
from scipy.special import gamma

from source.errors import ConfigurationError

logger = logging.getLogger(__name__)


class SpaceKind(str, Enum):
    HERM = "herm"
    IO_EVEN = "io_even"
    IO_ODD = "io_odd"
    USP = "usp"
    CHIRAL = "chiral"
    HERM_PLUS = "herm_plus"
    UNITARY = "unitary"


class Domain(str, Enum):
    REAL_LINE = "real_line"
    HALF_LINE = "half_line"
    TORUS = "torus"


HANKEL_KINDS = frozenset({SpaceKind.IO_EVEN, SpaceKind.IO_ODD, SpaceKind.USP, SpaceKind.CHIRAL})

HALF = Fraction(1, 2)

# nu fixed by the space; chiral is the only kind with a free parameter
_IMPLIED_NU = {
    SpaceKind.IO_EVEN: -HALF,
    SpaceKind.IO_ODD: HALF,
    SpaceKind.USP: HALF,
}


def as_fraction(value):
    """
    Converts a Hankel parameter given as int, float, str or Fraction.
    Params:
        value: 0, 1, 2, ..., -1/2, 1/2 in any of the accepted spellings
    Returns:
        Fraction
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value).limit_denominator(2)


@dataclass(frozen=True)
class MatrixSpace:
    """
    One of the seven matrix spaces with its number of independent spectral values.
    nu is derived for io_even (-1/2), io_odd and usp (+1/2), free in {0, 1, ...} for chiral
    and unused (0) for herm, herm_plus and unitary.
    """
    kind: SpaceKind
    n: int
    nu: Optional[Fraction] = None

    def __post_init__(self):
        try:
            kind = SpaceKind(self.kind)
        except ValueError as e:
            raise ConfigurationError(f"unknown matrix space {self.kind!r}") from e
        object.__setattr__(self, "kind", kind)

        if int(self.n) != self.n or self.n < 1:
            raise ConfigurationError(f"n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

        nu = None if self.nu is None else as_fraction(self.nu)
        if kind in _IMPLIED_NU:
            if nu is not None and nu != _IMPLIED_NU[kind]:
                raise ConfigurationError(f"{kind.value} requires nu={_IMPLIED_NU[kind]}, got {nu}")
            nu = _IMPLIED_NU[kind]
        elif kind == SpaceKind.CHIRAL:
            nu = Fraction(0) if nu is None else nu
            if nu.denominator != 1 or nu < 0:
                raise ConfigurationError(f"chiral requires nu in {{0, 1, 2, ...}}, got {nu}")
        else:
            if nu not in (None, 0):
                raise ConfigurationError(f"{kind.value} takes no nu parameter, got {nu}")
            nu = Fraction(0)
        object.__setattr__(self, "nu", nu)

    @property
    def is_hankel(self):
        return self.kind in HANKEL_KINDS

    @property
    def nu_value(self):
        return float(self.nu)

    @property
    def ambient_shape(self):
        n = self.n
        if self.kind in (SpaceKind.IO_EVEN, SpaceKind.USP):
            return 2 * n, 2 * n
        if self.kind == SpaceKind.IO_ODD:
            return 2 * n + 1, 2 * n + 1
        if self.kind == SpaceKind.CHIRAL:
            return n, n + int(self.nu)
        return n, n

    @property
    def spectral_domain(self):
        if self.kind == SpaceKind.HERM:
            return Domain.REAL_LINE
        if self.kind == SpaceKind.UNITARY:
            return Domain.TORUS
        return Domain.HALF_LINE

    @property
    def weight_domain(self):
        """Domain of f_diag (Herm, Hankel class, as functions of lambda) or of the LU / torus weight."""
        if self.kind == SpaceKind.HERM_PLUS:
            return Domain.HALF_LINE
        if self.kind == SpaceKind.UNITARY:
            return Domain.TORUS
        return Domain.REAL_LINE

    def label(self):
        if self.kind == SpaceKind.CHIRAL:
            return f"{self.kind.value}(n={self.n}, nu={self.nu})"
        return f"{self.kind.value}(n={self.n})"


# -----------
# DENSITIES
# -----------
@dataclass(frozen=True)
class Gaussian:
    scale: float = 1.0


@dataclass(frozen=True)
class Ginibre:
    scale: float = 1.0


@dataclass(frozen=True)
class WishartLike:
    dof: int


@dataclass(frozen=True)
class HaarUniform:
    pass


@dataclass(frozen=True)
class CustomLogDensity:
    """Matrix density given by a callback returning log F(X); invariance is declared, not checked."""
    log_density: Callable[[np.ndarray], float]
    name: str = "custom"


SUPPORTED_DENSITIES = {
    SpaceKind.HERM: (Gaussian,),
    SpaceKind.IO_EVEN: (Gaussian,),
    SpaceKind.IO_ODD: (Gaussian,),
    SpaceKind.USP: (Gaussian,),
    SpaceKind.CHIRAL: (Ginibre,),
    SpaceKind.HERM_PLUS: (WishartLike,),
    SpaceKind.UNITARY: (HaarUniform,),
}


@dataclass(frozen=True)
class EnsembleSpec:
    space: MatrixSpace
    density: object

    def __post_init__(self):
        allowed = SUPPORTED_DENSITIES[self.space.kind] + (CustomLogDensity,)
        if not isinstance(self.density, allowed):
            raise ConfigurationError(
                f"density {type(self.density).__name__} is not supported on {self.space.kind.value}"
            )
        if isinstance(self.density, (Gaussian, Ginibre)) and not self.density.scale > 0:
            raise ConfigurationError(f"scale must be positive, got {self.density.scale}")
        if isinstance(self.density, WishartLike) and self.density.dof < self.space.n:
            raise ConfigurationError(
                f"Wishart degrees of freedom must be >= n={self.space.n}, got {self.density.dof}"
            )

    def describe(self):
        d = self.density
        if isinstance(d, (Gaussian, Ginibre)):
            return f"{type(d).__name__.lower()}(scale={d.scale})"
        if isinstance(d, WishartLike):
            return f"wishart(dof={d.dof})"
        if isinstance(d, HaarUniform):
            return "haar"
        return d.name


@dataclass
class SpectralSample:
    """
    Spectral values of one draw (shape (n,)) or of a batch (shape (count, n)).
    auxiliary holds pseudo-diagonal entries, LU diagonals or minor moduli when requested.
    """
    values: np.ndarray
    auxiliary: Optional[np.ndarray] = None


# -----------
# CONSTANTS
# -----------
def vandermonde(x):
    """
    Computes Delta(x) = prod_{j<k} (x_k - x_j) over the last axis.
    Params:
        x: array (..., n), real or complex
    Returns:
        array (...)
    """
    x = np.asarray(x)
    n = x.shape[-1]
    out = np.ones(x.shape[:-1], dtype=np.result_type(x.dtype, float))
    for j in range(n):
        for k in range(j + 1, n):
            out = out * (x[..., k] - x[..., j])
    return out


def factorial_product(n):
    """prod_{j=0}^{n} j!"""
    return prod(factorial(j) for j in range(n + 1))


def hankel_constant(n, nu):
    """C_nu = prod_{j=0}^{n-1} j! Gamma(j + nu + 1)."""
    nu = float(nu)
    return float(prod(factorial(j) * gamma(j + nu + 1) for j in range(n)))


def hankel_sign(n):
    """(-1)^{n(n-1)/2}, the orientation sign of the Bessel determinant."""
    return -1.0 if (n * (n - 1) // 2) % 2 else 1.0
