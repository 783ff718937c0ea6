import logging

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma, hyp0f1, hyp1f1

from source import settings
from source.core.grid import GridDensity
from source.core.spaces import Domain, as_fraction
from source.errors import ConfigurationError, DomainError, DomainMismatchError
from source.transforms.quadrature import (
    TransformResult, bessel_oscillatory_integral, grid_apply, nested_error, regularized_limit, resolve_points,
    separable_transform,
)
from source.weights.atoms import GammaAtom
from source.weights.weight_function import WeightFunction

logger = logging.getLogger(__name__)


def check_nu(nu):
    """nu must lie in {0, 1, 2, ...} or be +-1/2."""
    f = as_fraction(nu)
    if not (f.denominator == 1 and f >= 0) and abs(f) != as_fraction("1/2"):
        raise ConfigurationError(f"Hankel parameter must be a nonnegative integer or +-1/2, got {nu}")
    return float(f)


def bessel_kernel(z, nu):
    """J_nu(2 sqrt(z)) z^{-nu/2}, entire in z and equal to 1/Gamma(nu+1) at z = 0."""
    return hyp0f1(nu + 1, -np.asarray(z)) / gamma(nu + 1)


def hankel_atom(atom: GammaAtom, s, nu):
    """int_0^inf x^p e^{-a x} J_nu(2 sqrt(xs)) (xs)^{-nu/2} dx = Gamma(p+1)/(Gamma(nu+1) a^{p+1}) 1F1(p+1; nu+1; -s/a)."""
    p, a = atom.power, atom.a
    if not a > 0 or not p > -1:
        raise DomainError(f"x^{p} e^{{-{a} x}} is not integrable on the half line")
    s = np.asarray(s, dtype=float)
    return gamma(p + 1) / (gamma(nu + 1) * a ** (p + 1)) * hyp1f1(p + 1, nu + 1, -s / a)


def _rule(axes):
    if all(not a.periodic and a.count % 2 == 1 and a.count >= 3 for a in axes):
        return "simpson"
    return "trapezoid"


def _oscillatory(fn, nu, scale, tolerance):
    """int_0^inf fn(t) dt where fn oscillates like J_nu(scale t)."""
    if scale == 0:
        return quad(fn, 0, np.inf, limit=200)[0], 0.0
    return bessel_oscillatory_integral(fn, nu, scale, tolerance)


def hankel(f, s, nu, sqrt_grid=False, tolerance=1e-10):
    """
    Hankel transform H_nu f(s) = int f(x) prod_j J_nu(2 sqrt(x_j s_j)) (x_j s_j)^{-nu/2} dx.
    Params:
        f: WeightFunction on the half line (closed form), GridDensity on the half line (Simpson rule)
           or a callable of one variable (oscillatory quadrature between Bessel zeros)
        s: Frequency points or axes
        nu: Hankel parameter
        sqrt_grid: Interpret frequency axes as t = sqrt(s); required by the inverse when nu < 0
        tolerance: Absolute tolerance of the oscillatory quadrature
    Returns:
        TransformResult
    """
    nu = check_nu(nu)
    n = f.n if isinstance(f, (WeightFunction, GridDensity)) else 1
    points, axes = resolve_points(s, n)
    meta = {"nu": nu, "sqrt_grid": bool(sqrt_grid and axes is not None)}
    if meta["sqrt_grid"]:
        points = points ** 2

    if isinstance(f, WeightFunction):
        if f.domain != Domain.HALF_LINE:
            raise DomainMismatchError(f"Hankel transform of a {f.domain.value} weight")
        values = separable_transform(f, points, lambda atom, sj: hankel_atom(atom, sj, nu))
        meta.update(scheme="closed form", nodes=0, error=0.0)
        return TransformResult(values.real, points, axes, meta)

    if isinstance(f, GridDensity):
        if any(d != Domain.HALF_LINE for d in f.domain):
            raise DomainMismatchError("Hankel transform needs a half-line grid")
        rule = _rule(f.axes)

        def kernel(j, outputs, nodes):
            return bessel_kernel(outputs * nodes, nu)
        values = grid_apply(f.values, f.axes, points, kernel, rule)
        meta.update(scheme=rule, nodes=int(np.prod(f.shape)),
                    error=nested_error(f.values, f.axes, points, kernel, rule, values))
        return TransformResult(values.real, points, axes, meta)

    if callable(f):
        out, errors = [], []
        for (sj,) in points:
            # x = t^2 turns the kernel into J_nu(2 sqrt(s) t)
            value, err = _oscillatory(lambda t: 2 * t * f(t * t) * bessel_kernel(t * t * sj, nu), nu,
                                      2 * np.sqrt(sj), tolerance)
            out.append(value)
            errors.append(err)
        meta.update(scheme="bessel zeros + shanks", nodes=0, error=max(errors, default=0.0))
        return TransformResult(np.array(out), points, axes, meta)

    raise ConfigurationError(f"cannot Hankel-transform {type(f).__name__}")


def hankel_inverse(g, x, nu, epsilon=None, tolerance=settings.EPSILON_TOLERANCE):
    """
    H_nu^{-1} g(x) = lim_{eps->0} int g(s) prod_j J_nu(2 sqrt(x_j s_j)) (x_j s_j)^{nu/2} e^{-eps s_j} ds.
    Params:
        g: TransformResult on a tensor grid, or a callable of one variable
        x: Output points or axes
        nu: Hankel parameter
        epsilon: Fixed regulator, None for the halving schedule
        tolerance: Target of the regulator schedule (and of the oscillatory quadrature)
    Returns:
        TransformResult
    """
    nu = check_nu(nu)

    if isinstance(g, TransformResult):
        if g.axes is None:
            raise ConfigurationError("the inverse Hankel transform needs g on a tensor grid")
        axes = g.axes
        values = g.grid_values()
        points, out_axes = resolve_points(x, len(axes))
        rule = _rule(axes)
        sqrt_grid = g.meta.get("sqrt_grid", False)
        if nu < 0 and not sqrt_grid:
            raise ConfigurationError("nu = -1/2 inversion needs frequencies on a sqrt grid (hankel(..., sqrt_grid=True))")

        def make_kernel(eps):
            def kernel(j, outputs, nodes):
                if sqrt_grid:
                    z = outputs * nodes ** 2
                    with np.errstate(divide="ignore", invalid="ignore"):
                        return 2 * nodes ** (2 * nu + 1) * outputs ** nu * bessel_kernel(z, nu) * np.exp(-eps * nodes ** 2)
                z = outputs * nodes
                return z ** nu * bessel_kernel(z, nu) * np.exp(-eps * nodes)
            return kernel

        out, meta = regularized_limit(lambda eps: grid_apply(values, axes, points, make_kernel(eps), rule),
                                      epsilon, tolerance)
        meta.update(scheme=rule, nu=nu,
                    error=nested_error(values, axes, points, make_kernel(meta["epsilon"]), rule, out))
        return TransformResult(np.real_if_close(out, tol=1e6), points, out_axes, meta)

    if callable(g):
        points, out_axes = resolve_points(x, 1)

        def evaluate(eps):
            out = []
            for (xj,) in points:
                value, _ = _oscillatory(
                    lambda t: 2 * t ** (2 * nu + 1) * xj ** nu * g(t * t) * bessel_kernel(xj * t * t, nu)
                    * np.exp(-eps * t * t),
                    nu, 2 * np.sqrt(xj), tolerance * 1e-3)
                out.append(value)
            return np.array(out)

        out, meta = regularized_limit(evaluate, epsilon, tolerance)
        meta.update(scheme="bessel zeros + shanks", nu=nu)
        return TransformResult(out, points, out_axes, meta)

    raise ConfigurationError(f"cannot invert {type(g).__name__}")
