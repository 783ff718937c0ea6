import logging
from dataclasses import dataclass
from math import factorial, pi

import numpy as np

from source.core.samplers import as_generator
from source.errors import DomainError
from source.haarparam.coordinates import UnitaryCoordinates
from source.haarparam.haar_model import build_unitary, lu_diagonals

logger = logging.getLogger(__name__)

RANGE_TOLERANCE = 1e-12


def sample_haar_coordinates(n, rng):
    """
    Haar-distributed coordinates: alpha and psi uniform on [-pi, pi), phi_{j,k} with density
    2(k-j) cos^{2(k-j)-1}(phi) sin(phi), drawn as arccos(U^{1/(2(k-j))}).
    Params:
        n: Matrix size
        rng: Generator, SeedSequence or seed
    Returns:
        UnitaryCoordinates
    """
    rng = as_generator(rng)
    alpha = rng.uniform(-pi, pi, n)
    phi = np.zeros((n, n))
    psi = np.zeros((n, n))
    for k in range(n):
        for j in range(k):
            phi[j, k] = np.arccos(rng.uniform() ** (1.0 / (2 * (k - j))))
            psi[j, k] = rng.uniform(-pi, pi)
    return UnitaryCoordinates(n, alpha, phi, psi)


def sample_haar_unitaries(n, count, rng):
    """Haar unitary matrices (count, n, n) built from sampled coordinates."""
    rng = as_generator(rng)
    return np.stack([build_unitary(sample_haar_coordinates(n, rng)) for _ in range(count)])


# -----------
# RADIAL COORDINATES
# -----------
@dataclass(frozen=True)
class RadialPoint:
    """
    A point of U(n) in the coordinates entering the spherical transform: alpha_1, the radii r_l and phases
    of the leading minors (l < n), the angles phi_{j,k} with k > j + 1 and every psi_{j,k}.
    phi and psi are (n, n) arrays read above the diagonal; phi_{j,j+1} entries are ignored.
    """
    alpha1: float
    radii: np.ndarray
    phases: np.ndarray
    phi: np.ndarray
    psi: np.ndarray


def to_radial(c: UnitaryCoordinates):
    lu = lu_diagonals(c)
    return RadialPoint(float(c.alpha[0]), lu.radii, lu.phases[:-1], c.phi.copy(), c.psi.copy())


def radius_bounds(n, phi):
    """R_j = prod_{l<=j} prod_{k>j} cos phi_{l,k} / cos phi_{j,j+1}, independent of the phi_{j,j+1} themselves."""
    cos = np.cos(np.asarray(phi, dtype=float))
    out = np.empty(n - 1)
    for j in range(1, n):
        block = cos[:j, j:].copy()
        block[j - 1, 0] = 1.0
        out[j - 1] = np.prod(block)
    return out


def haar_normalization(n):
    return float(np.prod([factorial(k - 1) / (2 * pi ** k) for k in range(1, n + 1)]))


def haar_density_rphi(n, point: RadialPoint):
    """
    Density of the Haar measure in (alpha_1, r, phases, phi_{j,k>j+1}, psi):
    prod_k (k-1)!/(2 pi^k) prod_l r_l prod_{k>j+1} tan phi_{j,k}, on 0 < r_j <= R_j.
    Params:
        n: Matrix size
        point: RadialPoint
    Returns:
        float
    """
    radii = np.asarray(point.radii, dtype=float)
    if radii.shape != (n - 1,):
        raise DomainError(f"expected {n - 1} radii, got {radii.size}")
    phi = np.asarray(point.phi, dtype=float)
    bounds = radius_bounds(n, phi) if n > 1 else np.empty(0)
    if np.any(radii <= 0) or np.any(radii > bounds * (1 + RANGE_TOLERANCE)):
        raise DomainError(f"radii {radii} outside (0, R] with R = {bounds}")
    if np.any(np.abs(point.phases) > pi + RANGE_TOLERANCE) or abs(point.alpha1) > pi + RANGE_TOLERANCE:
        raise DomainError("phases must lie in [-pi, pi]")
    tangent = np.prod([np.tan(phi[j, k]) for k in range(n) for j in range(k - 1)]) if n > 2 else 1.0
    return haar_normalization(n) * float(np.prod(radii)) * float(tangent)
