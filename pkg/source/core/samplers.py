import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from source import settings
from source.core import spectrum
from source.core.spaces import (
    CustomLogDensity, EnsembleSpec, Gaussian, Ginibre, HaarUniform, SpaceKind, SpectralSample, WishartLike,
)
from source.errors import ConfigurationError

logger = logging.getLogger(__name__)


def as_generator(rng_stream):
    """Accepts a Generator, a SeedSequence or an integer seed."""
    if isinstance(rng_stream, np.random.Generator):
        return rng_stream
    return np.random.default_rng(rng_stream)


def _complex_normal(rng, shape, variance=1.0):
    """Complex normal entries with E|z|^2 = variance."""
    s = np.sqrt(variance / 2)
    return s * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def haar_unitary(n, rng, size=None):
    """
    Haar distributed unitary matrices via QR of a complex Ginibre matrix with phase correction.
    Params:
        n: Matrix size
        rng: numpy Generator
        size: Number of matrices (None for a single matrix)
    Returns:
        array (n, n) or (size, n, n)
    """
    shape = (n, n) if size is None else (size, n, n)
    q, r = np.linalg.qr(_complex_normal(rng, shape))
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[..., None, :]


def haar_orthogonal(m, rng, size=None):
    """Haar distributed real orthogonal matrices, QR with sign correction."""
    shape = (m, m) if size is None else (size, m, m)
    q, r = np.linalg.qr(rng.standard_normal(shape))
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * np.sign(d)[..., None, :]


# -----------
# BUILT-IN SAMPLERS
# -----------
def _herm_gaussian(n, scale, rng, count):
    g = scale * (rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n)))
    return (g + np.conj(np.swapaxes(g, -1, -2))) / 2


def _io_gaussian(m, scale, rng, count):
    a = np.triu(scale * rng.standard_normal((count, m, m)), 1)
    return 1j * (a - np.swapaxes(a, -1, -2))


def _usp_gaussian(n, scale, rng, count):
    h = np.zeros((count, 2 * n, 2 * n), dtype=complex)
    a = scale * rng.standard_normal((count, n))
    b = _complex_normal(rng, (count, n), 2 * scale ** 2)
    for l in range(n):
        i, j = 2 * l, 2 * l + 1
        h[:, i, i] = -a[:, l]
        h[:, j, j] = a[:, l]
        h[:, i, j] = b[:, l]
        h[:, j, i] = np.conj(b[:, l])
    for l in range(n):
        for k in range(l + 1, n):
            alpha = _complex_normal(rng, count, scale ** 2)
            beta = _complex_normal(rng, count, scale ** 2)
            block = np.empty((count, 2, 2), dtype=complex)
            block[:, 0, 0] = alpha
            block[:, 0, 1] = beta
            block[:, 1, 0] = np.conj(beta)
            block[:, 1, 1] = -np.conj(alpha)
            h[:, 2 * l:2 * l + 2, 2 * k:2 * k + 2] = block
            h[:, 2 * k:2 * k + 2, 2 * l:2 * l + 2] = np.conj(np.swapaxes(block, -1, -2))
    return h


def _chiral_ginibre(n, nu, scale, rng, count):
    return _complex_normal(rng, (count, n, n + nu), scale ** 2)


def _wishart(n, dof, rng, count):
    g = _complex_normal(rng, (count, dof, n))
    return np.conj(np.swapaxes(g, -1, -2)) @ g


def sample_batch(spec: EnsembleSpec, rng_stream, count):
    """
    Draws count matrices of the ensemble.
    Params:
        spec: Ensemble specification
        rng_stream: Seeded random source
        count: Number of matrices
    Returns:
        array (count, *ambient_shape)
    """
    rng = as_generator(rng_stream)
    space, density = spec.space, spec.density
    n = space.n

    if isinstance(density, CustomLogDensity):
        raise ConfigurationError(f"no sampler for custom density {density.name!r} on {space.kind.value}")

    kind = space.kind
    if kind == SpaceKind.HERM and isinstance(density, Gaussian):
        return _herm_gaussian(n, density.scale, rng, count)
    if kind in (SpaceKind.IO_EVEN, SpaceKind.IO_ODD) and isinstance(density, Gaussian):
        return _io_gaussian(space.ambient_shape[0], density.scale, rng, count)
    if kind == SpaceKind.USP and isinstance(density, Gaussian):
        return _usp_gaussian(n, density.scale, rng, count)
    if kind == SpaceKind.CHIRAL and isinstance(density, Ginibre):
        return _chiral_ginibre(n, int(space.nu), density.scale, rng, count)
    if kind == SpaceKind.HERM_PLUS and isinstance(density, WishartLike):
        return _wishart(n, density.dof, rng, count)
    if kind == SpaceKind.UNITARY and isinstance(density, HaarUniform):
        return haar_unitary(n, rng, size=count)

    raise ConfigurationError(f"unsupported pair ({spec.describe()}, {kind.value})")


def sample_matrix(spec: EnsembleSpec, rng_stream):
    """Single matrix in the ambient space of spec."""
    return sample_batch(spec, rng_stream, 1)[0]


def _auxiliary(matrices, space, auxiliary):
    if auxiliary == "none":
        return None
    if auxiliary == "pseudo":
        return spectrum.extract_pseudo_diagonal(matrices, space)
    if auxiliary == "lu":
        if space.kind == SpaceKind.HERM_PLUS:
            return spectrum.lu_diagonals_numeric(matrices).real
        if space.kind == SpaceKind.UNITARY:
            return np.abs(spectrum.principal_minors(matrices))
    raise ConfigurationError(f"auxiliary {auxiliary!r} is not available on {space.kind.value}")


def sample_spectra(spec: EnsembleSpec, count, seed=settings.DEFAULT_SEED, workers=None, auxiliary="none"):
    """
    Draws count spectral samples in chunks, each chunk with its own child stream of one SeedSequence.
    The output does not depend on the number of workers.
    Params:
        spec: Ensemble specification
        count: Number of samples
        seed: Root seed
        workers: Thread count (defaults to RMT_THREADS)
        auxiliary: "none", "pseudo" or "lu"
    Returns:
        SpectralSample with values (count, n) and auxiliary (count, n) or None
    """
    if count < 1:
        raise ConfigurationError(f"count must be positive, got {count}")

    chunk = settings.SAMPLE_CHUNK_SIZE
    sizes = [min(chunk, count - start) for start in range(0, count, chunk)]
    streams = np.random.SeedSequence(seed).spawn(len(sizes))
    workers = workers or settings.max_workers()

    def draw(index):
        rng = np.random.default_rng(streams[index])
        matrices = sample_batch(spec, rng, sizes[index])
        values = spectrum.extract_spectra(matrices, spec.space)
        return values, _auxiliary(matrices, spec.space, auxiliary)

    logger.info("sampling %d matrices of %s in %d chunks with %d workers",
                count, spec.space.label(), len(sizes), workers)

    if workers == 1 or len(sizes) == 1:
        parts = [draw(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(draw, range(len(sizes))))

    values = np.concatenate([p[0] for p in parts])
    aux = None if auxiliary == "none" else np.concatenate([p[1] for p in parts])
    return SpectralSample(values=values, auxiliary=aux)
