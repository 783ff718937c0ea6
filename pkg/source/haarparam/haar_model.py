"""
The recursive U(n) parametrisation: the Phi factors, the closed-form entries of H_n and the
LU diagonals of V_n.
"""
import logging
from typing import NamedTuple

import numpy as np

from source import settings
from source.errors import DegenerateSampleError, DomainError
from source.haarparam.coordinates import UnitaryCoordinates

logger = logging.getLogger(__name__)


def _wrap(angle):
    return (np.asarray(angle) + np.pi) % (2 * np.pi) - np.pi


# -----------
# CONSTRUCTION
# -----------
def phi_factor(c: UnitaryCoordinates, j, k):
    """
    Phi_{j,k} as a k x k matrix (1-based 1 <= j < k <= n); Phi_{1,k} carries e^{+-i alpha_k} on its diagonal.
    """
    if not 1 <= j < k <= c.n:
        raise DomainError(f"Phi_{{{j},{k}}} needs 1 <= j < k <= {c.n}")
    cos, sin = np.cos(c.phi[j - 1, k - 1]), np.sin(c.phi[j - 1, k - 1])
    psi = c.psi[j - 1, k - 1]
    out = np.eye(k, dtype=complex)
    out[j - 1, j - 1] = cos
    out[j - 1, k - 1] = np.exp(1j * psi) * sin
    out[k - 1, j - 1] = -np.exp(-1j * psi) * sin
    out[k - 1, k - 1] = cos
    if j == 1:
        out[0, 0] *= np.exp(1j * c.alpha[k - 1])
        out[k - 1, k - 1] *= np.exp(-1j * c.alpha[k - 1])
    return out


def h_matrix_product(c: UnitaryCoordinates, k):
    """H_k = Phi_{1,k} Phi_{2,k} ... Phi_{k-1,k}."""
    out = np.eye(k, dtype=complex)
    for j in range(1, k):
        out = out @ phi_factor(c, j, k)
    return out


def h_matrix_entries(c: UnitaryCoordinates, n=None):
    """
    Closed-form entries of H_n. Rows j < n: zero below the diagonal, h_11 = e^{i alpha_n} cos phi_1n,
    h_jj = cos phi_jn, h_jk = -e^{i(psi_jn - psi_kn)} sin phi_kn sin phi_jn prod_{j<l<k} cos phi_ln (k < n),
    h_jn = e^{i psi_jn} sin phi_jn prod_{l>j} cos phi_ln. Row n: -e^{-i psi_1n} sin phi_1n,
    -e^{-i(psi_kn + alpha_n)} sin phi_kn prod_{l<k} cos phi_ln and e^{-i alpha_n} prod_l cos phi_ln.
    Params:
        c: Coordinates
        n: Level of the recursion, 2 <= n <= c.n (default c.n)
    Returns:
        complex array (n, n)
    """
    n = c.n if n is None else n
    if not 2 <= n <= c.n:
        raise DomainError(f"H_n is defined for 2 <= n <= {c.n}, got {n}")
    col = n - 1
    cos = np.cos(c.phi[:col, col])
    sin = np.sin(c.phi[:col, col])
    psi = c.psi[:col, col]
    alpha = c.alpha[col]
    h = np.zeros((n, n), dtype=complex)
    for j in range(col):
        h[j, j] = np.exp(1j * alpha) * cos[0] if j == 0 else cos[j]
        for k in range(j + 1, col):
            h[j, k] = -np.exp(1j * (psi[j] - psi[k])) * sin[k] * sin[j] * np.prod(cos[j + 1:k])
        h[j, col] = np.exp(1j * psi[j]) * sin[j] * np.prod(cos[j + 1:])
    h[col, 0] = -np.exp(-1j * psi[0]) * sin[0]
    for k in range(1, col):
        h[col, k] = -np.exp(-1j * (psi[k] + alpha)) * sin[k] * np.prod(cos[:k])
    h[col, col] = np.exp(-1j * alpha) * np.prod(cos)
    return h


def build_unitary(c: UnitaryCoordinates):
    """
    V_n by the recursion V_1 = e^{i alpha_1}, V_k = diag(V_{k-1}, 1) H_k.
    Returns:
        complex array (n, n)
    """
    V = np.array([[np.exp(1j * c.alpha[0])]])
    for k in range(2, c.n + 1):
        padded = np.eye(k, dtype=complex)
        padded[:k - 1, :k - 1] = V
        V = padded @ h_matrix_product(c, k)
    return V


# -----------
# LU DIAGONALS
# -----------
class LUDiagonals(NamedTuple):
    u: np.ndarray
    radii: np.ndarray
    phases: np.ndarray


def lu_diagonals(c: UnitaryCoordinates, tolerance=settings.DEGENERACY_TOLERANCE):
    """
    Diagonal of U in V_n = L U (unit lower L) from the angles:
    u_11 = e^{i sum alpha} prod_{k>=2} cos phi_1k, u_ll = e^{-i alpha_l} prod_{k>l} cos phi_lk / prod_{j<l} cos phi_jl.
    The leading minors u_11...u_ll have radii r_l and phases alpha_1 + sum_{j>l} alpha_j; the full product is e^{i alpha_1}.
    Params:
        c: Coordinates
        tolerance: Smallest accepted radius
    Returns:
        LUDiagonals(u (n,), radii (n-1,), phases (n,) in [-pi, pi))
    """
    n = c.n
    cos = np.cos(c.phi)
    radii = c.radii
    if np.any(radii <= tolerance):
        raise DegenerateSampleError("a leading principal minor vanishes: the LU factorisation does not exist")
    u = np.empty(n, dtype=complex)
    u[0] = np.exp(1j * c.alpha.sum()) * np.prod(cos[0, 1:])
    for l in range(1, n):
        u[l] = np.exp(-1j * c.alpha[l]) * np.prod(cos[l, l + 1:]) / np.prod(cos[:l, l])
    phases = np.array([c.alpha[0] + c.alpha[l + 1:].sum() for l in range(n)])
    return LUDiagonals(u, radii, _wrap(phases))


def minors_from_coordinates(c: UnitaryCoordinates):
    """Leading principal minors det V_{l x l} = r_l e^{i phase_l}, with det V = e^{i alpha_1}."""
    lu = lu_diagonals(c)
    radii = np.concatenate([lu.radii, [1.0]])
    return radii * np.exp(1j * lu.phases)
