from source.transforms.abel import (
    abel_inverse, abel_inverse_composition, abel_inverse_explicit, abel_inverse_half,
)
from source.transforms.fourier import fourier, fourier_atom, fourier_inverse
from source.transforms.fourier_series import (
    fourier_series, fourier_series_inverse, index_box, trig_weight_from_coefficients,
)
from source.transforms.hankel import bessel_kernel, hankel, hankel_inverse
from source.transforms.mellin import fundamental_strip, mellin, mellin_inverse, mellin_on_contour
from source.transforms.quadrature import TransformResult, regularized_limit
