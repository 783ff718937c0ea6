import logging

import numpy as np

from source import settings
from source.core.spaces import MatrixSpace, SpaceKind, SpectralSample
from source.errors import ConfigurationError, DataError, DegenerateSampleError, NumericError

logger = logging.getLogger(__name__)


def _check_finite(X):
    if not np.all(np.isfinite(X)):
        raise NumericError("matrix contains non-finite entries")


def extract_spectra(X, space: MatrixSpace):
    """
    Spectral values of a stack of matrices, sorted ascending along the last axis.
    Params:
        X: array (..., rows, cols) in the ambient space
        space: Matrix space of X
    Returns:
        array (..., n): eigenvalues (herm, herm_plus), squared singular values (Hankel class)
        or principal-branch eigenangles (unitary)
    """
    X = np.asarray(X)
    _check_finite(X)
    n, kind = space.n, space.kind

    if kind in (SpaceKind.HERM, SpaceKind.HERM_PLUS):
        return np.linalg.eigvalsh(X)

    if kind in (SpaceKind.IO_EVEN, SpaceKind.USP):
        eig = np.linalg.eigvalsh(X)
        return eig[..., n:] ** 2

    if kind == SpaceKind.IO_ODD:
        eig = np.linalg.eigvalsh(X)
        zero = np.abs(eig[..., n])
        norm = np.abs(X).max(axis=(-2, -1))
        if np.any(zero > settings.IO_ODD_ZERO_TOLERANCE * np.maximum(norm, 1.0)):
            raise NumericError("odd antisymmetric matrix has no structural zero eigenvalue")
        return eig[..., n + 1:] ** 2

    if kind == SpaceKind.CHIRAL:
        sv = np.linalg.svd(X, compute_uv=False)
        return np.sort(sv ** 2, axis=-1)

    if kind == SpaceKind.UNITARY:
        return np.sort(np.angle(np.linalg.eigvals(X)), axis=-1)

    raise ConfigurationError(f"unknown space {kind}")


def extract_spectrum(X, space: MatrixSpace):
    """Spectral values of a single matrix wrapped in a SpectralSample."""
    return SpectralSample(values=extract_spectra(X, space))


def extract_pseudo_diagonal(X, space: MatrixSpace):
    """
    Real entries along the image of the embedding iota.
    Params:
        X: array (..., rows, cols)
        space: Matrix space of X
    Returns:
        array (..., n)
    """
    X = np.asarray(X)
    n, kind = space.n, space.kind
    idx = np.arange(n)

    if kind == SpaceKind.HERM:
        return np.diagonal(X, axis1=-2, axis2=-1).real
    if kind in (SpaceKind.IO_EVEN, SpaceKind.IO_ODD):
        return (-1j * X[..., 2 * idx, 2 * idx + 1]).real
    if kind == SpaceKind.USP:
        return X[..., 2 * idx + 1, 2 * idx + 1].real
    if kind == SpaceKind.CHIRAL:
        return X[..., idx, idx].real

    raise ConfigurationError(f"{kind.value} has no pseudo-diagonal; use LU diagonals or principal minors")


def embed(space: MatrixSpace, x):
    """
    The embedding iota of spectral values into the ambient space.
    Params:
        space: Matrix space
        x: array (n,) of spectral values (angles for unitary)
    Returns:
        matrix of shape space.ambient_shape
    """
    x = np.asarray(x, dtype=float)
    n, kind = space.n, space.kind
    out = np.zeros(space.ambient_shape, dtype=complex)

    if kind in (SpaceKind.HERM, SpaceKind.HERM_PLUS):
        out[np.arange(n), np.arange(n)] = x
    elif kind == SpaceKind.UNITARY:
        out[np.arange(n), np.arange(n)] = np.exp(1j * x)
    elif kind in (SpaceKind.IO_EVEN, SpaceKind.IO_ODD):
        lam = np.sqrt(x)
        for l in range(n):
            out[2 * l, 2 * l + 1] = 1j * lam[l]
            out[2 * l + 1, 2 * l] = -1j * lam[l]
    elif kind == SpaceKind.USP:
        lam = np.sqrt(x)
        for l in range(n):
            out[2 * l, 2 * l] = -lam[l]
            out[2 * l + 1, 2 * l + 1] = lam[l]
    elif kind == SpaceKind.CHIRAL:
        out[np.arange(n), np.arange(n)] = np.sqrt(x)
    return out


def principal_minors(X):
    """
    Leading principal minors det X_{l x l}, l = 1..n.
    Params:
        X: array (..., n, n)
    Returns:
        array (..., n)
    """
    X = np.asarray(X)
    n = X.shape[-1]
    return np.stack([np.linalg.det(X[..., :l, :l]) for l in range(1, n + 1)], axis=-1)


def lu_diagonals_numeric(X):
    """
    Diagonal of U in the pivot-free factorisation X = L U (unit lower L).
    Hermitian positive-definite input goes through Cholesky, anything else through minor ratios.
    Params:
        X: array (..., n, n)
    Returns:
        array (..., n)
    """
    X = np.asarray(X)
    _check_finite(X)
    hermitian = np.allclose(X, np.conj(np.swapaxes(X, -1, -2)))
    if hermitian:
        try:
            L = np.linalg.cholesky(X)
        except np.linalg.LinAlgError as e:
            raise DataError("sample is not positive definite") from e
        return np.abs(np.diagonal(L, axis1=-2, axis2=-1)) ** 2

    minors = principal_minors(X)
    scale = np.abs(X).max(axis=(-2, -1), keepdims=False)
    if np.any(np.abs(minors) <= 1e-300 + 1e-15 * scale[..., None] ** np.arange(1, X.shape[-1] + 1)):
        raise DegenerateSampleError("vanishing leading principal minor, LU without pivoting does not exist")
    prev = np.concatenate([np.ones(minors.shape[:-1] + (1,), dtype=minors.dtype), minors[..., :-1]], axis=-1)
    return minors / prev
