from source.weights.atoms import GammaAtom, GaussAtom, TrigAtom
from source.weights.weight_function import WeightFunction
from source.weights.operators import (
    OperatorKind, VandermondeOperator, apply_one_dim, apply_vandermonde, multiply_vandermonde,
)
from source.weights.finite_difference import finite_difference_oracle
