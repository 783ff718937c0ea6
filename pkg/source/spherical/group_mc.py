"""
Monte Carlo group averages over Haar-distributed unitary and orthogonal matrices (QR sampler),
independent oracles for the closed-form spherical functions.
"""
import logging

import numpy as np

from source.core.samplers import as_generator, haar_orthogonal, haar_unitary
from source.core.spaces import HALF, MatrixSpace, SpaceKind, as_fraction
from source.core.spectrum import embed
from source.spherical.kernels import generalized_power, trivial_weight

logger = logging.getLogger(__name__)


def _mean(values):
    values = np.asarray(values)
    count = len(values)
    stderr = float(np.sqrt(values.real.var() + values.imag.var()) / np.sqrt(count)) if count > 1 else float("inf")
    return complex(values.mean()), stderr


def _batches(count, batch=20_000):
    for start in range(0, count, batch):
        yield min(batch, count - start)


def hciz_mc(x, s, count, rng):
    """
    E_K exp(i tr(K diag(x) K^dag diag(s))) over Haar U(n).
    Returns:
        (mean, standard error)
    """
    rng = as_generator(rng)
    x, s = np.asarray(x, dtype=float), np.asarray(s, dtype=float)
    values = []
    for size in _batches(count):
        K = haar_unitary(len(x), rng, size)
        phase = np.einsum("j,mjk,k->m", s, np.abs(K) ** 2, x)
        values.append(np.exp(1j * phase))
    return _mean(np.concatenate(values))


def bessel_mc(x, s, nu, count, rng):
    """
    Group average defining the Hankel-class kernel.
    Integer nu: E exp(2i Re tr(K1 Y_x K2^dag Y_s^dag)) over U(n) x U(n+nu), Y = sqrt-diagonal n x (n+nu).
    nu = -1/2, +1/2: E exp(-i tr(K A_x K^T A_s)) over O(2n) or O(2n+1), A = iota of the io space.
    Returns:
        (mean, standard error)
    """
    rng = as_generator(rng)
    x, s = np.asarray(x, dtype=float), np.asarray(s, dtype=float)
    n = len(x)
    nu = as_fraction(nu)
    values = []
    if nu.denominator == 1:
        space = MatrixSpace(SpaceKind.CHIRAL, n, int(nu))
        Yx, Ys = embed(space, x), embed(space, s)
        for size in _batches(count):
            K1 = haar_unitary(n, rng, size)
            K2 = haar_unitary(n + int(nu), rng, size)
            M = K1 @ Yx @ np.conj(np.swapaxes(K2, -1, -2)) @ np.conj(Ys.T)
            values.append(np.exp(2j * np.trace(M, axis1=-2, axis2=-1).real))
    else:
        space = MatrixSpace(SpaceKind.IO_EVEN if nu == -HALF else SpaceKind.IO_ODD, n)
        Ax, As = embed(space, x), embed(space, s)
        for size in _batches(count):
            K = haar_orthogonal(space.ambient_shape[0], rng, size)
            M = K @ Ax @ np.swapaxes(K, -1, -2) @ As
            values.append(np.exp(-1j * np.trace(M, axis1=-2, axis2=-1).real))
    return _mean(np.concatenate(values))


def gelfand_naimark_mc(x, s, count, rng):
    """
    E_K |K diag(x) K^dag|^{s - s_0} over Haar U(n), s_0 = (n-1, ..., 0); x positive or unit-modulus.
    Returns:
        (mean, standard error)
    """
    rng = as_generator(rng)
    x = np.asarray(x)
    shifted = np.asarray(s) - trivial_weight(len(x))
    values = []
    for size in _batches(count):
        K = haar_unitary(len(x), rng, size)
        X = K @ (x[:, None] * np.conj(np.swapaxes(K, -1, -2)))
        values.append(generalized_power(X, shifted))
    return _mean(np.concatenate(values))
