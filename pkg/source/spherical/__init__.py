from source.spherical.divided import batch_ratio, determinant_ratio, divided_difference_functionals
from source.spherical.group_mc import bessel_mc, gelfand_naimark_mc, hciz_mc
from source.spherical.kernels import (
    SphericalFunction, bessel_group_kernel, gelfand_naimark, generalized_power, hciz_unitary, spherical_function,
    trivial_weight,
)
from source.spherical.spherical_model import (
    hankel_space, hermplus_normalization_point, spherical_forward, spherical_hankel, spherical_hankel_inverse,
    spherical_herm, spherical_herm_inverse, spherical_hermplus, spherical_hermplus_inverse,
    spherical_hermplus_matrices, spherical_unitary, spherical_unitary_inverse, spherical_unitary_matrices,
)
