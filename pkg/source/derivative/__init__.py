from source.derivative.cases import PrincipleCase, WeightPreprocessor, principle_case
from source.derivative.convolution import additive_convolve, multiplicative_spherical, unitary_product_spherical
from source.derivative.principles import (
    check_nonnegative, derivative_principle, derivative_principle_hankel_unified, derivative_principle_herm,
    derivative_principle_hermplus, derivative_principle_io_even, derivative_principle_io_odd,
    derivative_principle_unitary, derivative_principle_usp, eigenvalue_form_io,
)
from source.derivative.weight_model import (
    lu_weight_hermplus, polynomial_ensemble_weight, unitary_coefficients, unitary_weight_g,
)
