import logging
from itertools import product
from math import pi

import numpy as np

from source.core.grid import GridDensity
from source.core.spaces import Domain
from source.errors import ConfigurationError, DomainMismatchError
from source.transforms.quadrature import TransformResult, grid_apply, regularized_limit, resolve_points
from source.weights.atoms import TrigAtom
from source.weights.weight_function import WeightFunction

logger = logging.getLogger(__name__)


def _integer_points(s, n):
    points, _ = resolve_points(s, n)
    ints = np.rint(np.real(points)).astype(int)
    if np.any(np.abs(points - ints) > 0):
        raise ConfigurationError("Fourier-series indices must be integers")
    return ints


def fourier_series(f, s):
    """
    Fourier coefficients F f(s) = int_{[0,2pi)^n} f(theta) prod_j e^{i s_j theta_j} dtheta at integer s.
    Params:
        f: Trig-polynomial WeightFunction (exact) or periodic GridDensity (trapezoid, spectrally accurate)
        s: Integer multi-indices (M, n)
    Returns:
        TransformResult
    """
    if isinstance(f, WeightFunction):
        if f.domain != Domain.TORUS:
            raise DomainMismatchError(f"Fourier series of a {f.domain.value} weight")
        points = _integer_points(s, f.n)
        lookup = {tuple(a.k for a in atoms): c for atoms, c in f.terms}
        values = np.array([lookup.get(tuple(-k for k in row), 0.0) for row in points], dtype=complex)
        return TransformResult(values * (2 * pi) ** f.n, points, None, {"scheme": "exact", "nodes": 0, "error": 0.0})

    if isinstance(f, GridDensity):
        if any(not a.periodic for a in f.axes):
            raise DomainMismatchError("Fourier series needs periodic grid axes")
        points = _integer_points(s, f.n)

        def kernel(j, outputs, nodes):
            return np.exp(1j * outputs * nodes)
        values = grid_apply(f.values, f.axes, points, kernel)
        return TransformResult(values, points, None, {"scheme": "trapezoid", "nodes": int(np.prod(f.shape))})

    raise ConfigurationError(f"cannot expand {type(f).__name__} in a Fourier series")


def index_box(n, cutoff):
    """All integer multi-indices with |s_j| <= cutoff, shape (M, n)."""
    return np.array(list(product(range(-cutoff, cutoff + 1), repeat=n)), dtype=int).reshape(-1, n)


def fourier_series_inverse(coeffs: TransformResult, theta, epsilon=0.0, tolerance=1e-10):
    """
    (2 pi)^{-n} sum_s F(s) prod_j e^{-i s_j theta_j - eps s_j^2}.
    Params:
        coeffs: Coefficients at integer points
        theta: Angles (M, n)
        epsilon: Fixed regulator, None for the halving schedule
    Returns:
        TransformResult
    """
    s = np.asarray(coeffs.points)
    n = s.shape[1]
    c = np.asarray(coeffs.values, dtype=complex)
    points, axes = resolve_points(theta, n)

    def evaluate(eps):
        phase = np.exp(-1j * points @ s.T - eps * (s ** 2).sum(-1)[None, :])
        return phase @ c / (2 * pi) ** n

    out, meta = regularized_limit(evaluate, epsilon, tolerance)
    meta["scheme"] = "finite sum"
    return TransformResult(np.real_if_close(out, tol=1e6), points, axes, meta)


def trig_weight_from_coefficients(coeffs: TransformResult):
    """The trig polynomial (2 pi)^{-n} sum_s F(s) e^{-i s theta} as an exact WeightFunction."""
    s = np.asarray(coeffs.points)
    n = s.shape[1]
    return WeightFunction(Domain.TORUS, n, [
        (complex(v) / (2 * pi) ** n, tuple(TrigAtom(-int(k)) for k in row))
        for row, v in zip(s, coeffs.values) if v != 0
    ])
