from dataclasses import dataclass
from enum import Enum
from math import factorial

from source.core.spaces import MatrixSpace, SpaceKind, factorial_product, hankel_constant, hankel_sign
from source.errors import ConfigurationError
from source.weights.operators import OperatorKind, VandermondeOperator


class WeightPreprocessor(str, Enum):
    IDENTITY = "identity"
    ABEL_INVERSE = "abel_inverse"
    ABEL_HALF = "abel_half"
    LU_WEIGHT = "lu_weight"
    TORUS_WEIGHT = "torus_weight"


@dataclass(frozen=True)
class PrincipleCase:
    """
    The data of one derivative principle: f = prefactor * Delta(x) * Delta(D) [preprocessed weight].
    For the Hankel class the pi^{n/2} of the half-integer Abel inversion lives in the preprocessor.
    """
    space: MatrixSpace
    operator: VandermondeOperator
    prefactor: float
    weight_preprocessor: WeightPreprocessor


def principle_case(space: MatrixSpace):
    """
    Params:
        space: Matrix space
    Returns:
        PrincipleCase
    """
    n, kind = space.n, space.kind
    if kind == SpaceKind.HERM:
        return PrincipleCase(space, VandermondeOperator(OperatorKind.FLAT, n), 1.0 / factorial_product(n),
                             WeightPreprocessor.IDENTITY)
    if space.is_hankel:
        nu = space.nu
        pref = hankel_sign(n) / (factorial(n) * hankel_constant(n, nu))
        pre = WeightPreprocessor.ABEL_INVERSE if nu.denominator == 1 else WeightPreprocessor.ABEL_HALF
        return PrincipleCase(space, VandermondeOperator(OperatorKind.HANKEL, n, nu), pref, pre)
    if kind == SpaceKind.HERM_PLUS:
        return PrincipleCase(space, VandermondeOperator(OperatorKind.MELLIN, n), 1.0 / factorial_product(n),
                             WeightPreprocessor.LU_WEIGHT)
    if kind == SpaceKind.UNITARY:
        return PrincipleCase(space, VandermondeOperator(OperatorKind.TORUS, n), 1.0 / factorial_product(n),
                             WeightPreprocessor.TORUS_WEIGHT)
    raise ConfigurationError(f"no derivative principle for {kind.value}")
