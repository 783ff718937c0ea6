import logging
from math import pi

import numpy as np

from source import settings
from source.core.grid import GridDensity
from source.core.spaces import Domain
from source.errors import AccuracyError, ConfigurationError, DomainMismatchError
from source.transforms.quadrature import (
    TransformResult, grid_apply, nested_error, regularized_limit, resolve_points, separable_transform, tail_mass,
)
from source.weights.atoms import GaussAtom, gaussian_moment
from source.weights.weight_function import WeightFunction

logger = logging.getLogger(__name__)


def fourier_atom(atom: GaussAtom, s):
    """
    int x^m e^{-a x^2 + b x} e^{i s x} dx = sqrt(pi/a) e^{c^2/4a} E[X^m], X ~ N(c/2a, 1/2a), c = b + i s.
    s may be complex.
    """
    if not atom.a > 0:
        raise AccuracyError("non-integrable tails: Gaussian atom with a <= 0")
    c = atom.b + 1j * np.asarray(s)
    a = atom.a
    return np.sqrt(pi / a) * np.exp(c ** 2 / (4 * a)) * gaussian_moment(atom.power, c / (2 * a), 1 / (2 * a))


def _exp_kernel(sign):
    def kernel(j, outputs, nodes):
        return np.exp(sign * 1j * outputs * nodes)
    return kernel


def fourier(f, s, tolerance=1e-8):
    """
    Multivariate Fourier transform F f(s) = int f(x) prod_j e^{i x_j s_j} dx.
    Params:
        f: WeightFunction on the real line (closed form) or GridDensity (trapezoid rule)
        s: Frequency points (M, n), or Axis / axes for a tensor grid of frequencies
        tolerance: Largest accepted boundary value of a grid relative to its maximum
    Returns:
        TransformResult
    """
    if isinstance(f, WeightFunction):
        if f.domain != Domain.REAL_LINE:
            raise DomainMismatchError(f"Fourier transform of a {f.domain.value} weight")
        points, axes = resolve_points(s, f.n)
        values = separable_transform(f, points, fourier_atom)
        return TransformResult(values, points, axes, {"scheme": "closed form", "nodes": 0, "error": 0.0})

    if isinstance(f, GridDensity):
        if any(d != Domain.REAL_LINE for d in f.domain):
            raise DomainMismatchError("Fourier transform needs a real-line grid")
        tail = tail_mass(f.values, f.axes)
        if tail > tolerance:
            raise AccuracyError("non-integrable tails detected on the grid", achieved=tail, tolerance=tolerance)
        points, axes = resolve_points(s, f.n)
        kernel = _exp_kernel(+1)
        values = grid_apply(f.values, f.axes, points, kernel)
        error = nested_error(f.values, f.axes, points, kernel, "trapezoid", values)
        logger.debug("fourier on %s grid: nested error %s", f.shape, error)
        return TransformResult(values, points, axes, {
            "scheme": "trapezoid", "nodes": int(np.prod(f.shape)), "error": error,
        })

    raise ConfigurationError(f"cannot Fourier-transform {type(f).__name__}")


def fourier_inverse(g: TransformResult, x, epsilon=None, tolerance=settings.EPSILON_TOLERANCE):
    """
    (2 pi)^{-n} int g(s) prod_j e^{-i x_j s_j - eps s_j^2} ds on the frequency grid of g.
    Params:
        g: Transform values on a tensor grid of frequencies
        x: Output points (M, n) or axes
        epsilon: Fixed regulator; None runs the halving schedule, 0 needs an integrable g
        tolerance: Target of the regulator schedule
    Returns:
        TransformResult with real values when the imaginary part is negligible
    """
    if g.axes is None:
        raise ConfigurationError("the inverse Fourier transform needs g on a tensor grid")
    axes = g.axes
    n = len(axes)
    values = g.grid_values()
    if epsilon == 0:
        tail = tail_mass(values, axes)
        if tail > tolerance:
            raise AccuracyError("g is not integrable on its grid, use a regulator", achieved=tail, tolerance=tolerance)
    points, out_axes = resolve_points(x, n)

    def evaluate(eps):
        def kernel(j, outputs, nodes):
            return np.exp(-1j * outputs * nodes - eps * nodes ** 2) / (2 * pi)
        return grid_apply(values, axes, points, kernel)

    out, meta = regularized_limit(evaluate, epsilon, tolerance)
    eps = meta["epsilon"]

    def final_kernel(j, outputs, nodes):
        return np.exp(-1j * outputs * nodes - eps * nodes ** 2) / (2 * pi)
    meta["error"] = nested_error(values, axes, points, final_kernel, "trapezoid", out)
    meta["scheme"] = "trapezoid"
    return TransformResult(np.real_if_close(out, tol=1e6), points, out_axes, meta)
