from source.haarparam.coordinates import UnitaryCoordinates
from source.haarparam.haar_model import (
    LUDiagonals, build_unitary, h_matrix_entries, h_matrix_product, lu_diagonals, minors_from_coordinates,
    phi_factor,
)
from source.haarparam.sampling import (
    RadialPoint, haar_density_rphi, haar_normalization, radius_bounds, sample_haar_coordinates,
    sample_haar_unitaries, to_radial,
)
