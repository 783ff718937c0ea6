from source.core.spaces import (
    CustomLogDensity, Domain, EnsembleSpec, Gaussian, Ginibre, HaarUniform, MatrixSpace, SpaceKind,
    SpectralSample, WishartLike,
)
from source.core.grid import Axis, GridDensity
