import logging
from math import pi

import numpy as np
from scipy.special import gamma

from source import settings
from source.core.grid import Axis, GridDensity, tensor_mesh
from source.core.spaces import Domain
from source.errors import ConfigurationError, DomainError, DomainMismatchError
from source.transforms.quadrature import (
    TransformResult, grid_apply, nested_error, regularized_limit, resolve_points, separable_transform,
)
from source.weights.atoms import GammaAtom
from source.weights.weight_function import WeightFunction

logger = logging.getLogger(__name__)

# relative nested-rule difference above which a grid Mellin integral is treated as divergent
DIVERGENCE_THRESHOLD = 1e-2


def mellin_atom(atom: GammaAtom, s):
    """int_0^inf x^p e^{-a x} x^{s-1} dx = Gamma(p+s)/a^{p+s}, Re(p+s) > 0."""
    s = np.asarray(s)
    if np.any(np.real(atom.power + s) <= 0):
        raise DomainError(f"Mellin argument outside the fundamental strip Re s > {-atom.power}")
    if not atom.a > 0:
        raise DomainError("Mellin transform of a non-decaying atom")
    return gamma(atom.power + s) / atom.a ** (atom.power + s)


def fundamental_strip(w: WeightFunction):
    """
    Fundamental strip (lo, hi) shared by every argument of a gamma-family weight: Re s > -min power.
    """
    if w.domain != Domain.HALF_LINE:
        raise DomainMismatchError(f"Mellin strip of a {w.domain.value} weight")
    lowest = min((a.power for atoms, _ in w.terms for a in atoms), default=0.0)
    return -lowest, np.inf


def _check_strip(points, strip):
    if strip is None:
        return
    lo, hi = strip
    re = np.real(points)
    if np.any(re <= lo) or np.any(re >= hi):
        raise DomainError(f"Mellin argument outside the declared strip ({lo}, {hi})")


def _power_kernel(j, outputs, nodes):
    with np.errstate(divide="ignore", invalid="ignore"):
        at_zero = np.where(outputs == 1, 1.0, 0.0)
        return np.where(nodes > 0, nodes ** (outputs - 1.0 + 0j), at_zero)


def mellin(f, s, strip=None):
    """
    Multivariate Mellin transform M f(s) = int f(x) prod_j x_j^{s_j - 1} dx.
    Params:
        f: WeightFunction on the half line (closed form) or GridDensity on the half line
        s: Complex points (M, n) or axes
        strip: Declared fundamental strip (lo, hi) for every argument
    Returns:
        TransformResult
    """
    if isinstance(f, WeightFunction):
        if f.domain != Domain.HALF_LINE:
            raise DomainMismatchError(f"Mellin transform of a {f.domain.value} weight")
        points, axes = resolve_points(s, f.n)
        _check_strip(points, strip)
        values = separable_transform(f, points, mellin_atom)
        return TransformResult(values, points, axes, {"scheme": "closed form", "nodes": 0, "error": 0.0})

    if isinstance(f, GridDensity):
        if any(d != Domain.HALF_LINE for d in f.domain):
            raise DomainMismatchError("Mellin transform needs a half-line grid")
        points, axes = resolve_points(s, f.n)
        _check_strip(points, strip)
        touches_zero = any(a.lo <= 0 for a in f.axes)
        if touches_zero and np.any(np.real(points) < 1):
            raise DomainError("grid includes x=0 and Re s < 1: the Mellin integral diverges there")
        values = grid_apply(f.values, f.axes, points, _power_kernel)
        error = nested_error(f.values, f.axes, points, _power_kernel, "trapezoid", values)
        scale = max(1.0, float(np.abs(values).max()) if values.size else 0.0)
        if error is not None and error > DIVERGENCE_THRESHOLD * scale:
            raise DomainError(f"Mellin quadrature diverges (nested difference {error:.3e}): s outside the strip")
        return TransformResult(values, points, axes, {
            "scheme": "trapezoid", "nodes": int(np.prod(f.shape)), "error": error,
        })

    raise ConfigurationError(f"cannot Mellin-transform {type(f).__name__}")


def mellin_on_contour(f, c, t_axes):
    """
    M f on the vertical contour s_j = c_j + i t_j over tensor axes in t.
    Params:
        c: Real parts, one per argument
        t_axes: Axis or axes of imaginary parts
    Returns:
        TransformResult whose axes are the t axes, meta["contour"] = c
    """
    n = f.n
    c = np.broadcast_to(np.asarray(c, dtype=float), (n,)).copy()
    t_axes = (t_axes,) * n if isinstance(t_axes, Axis) else tuple(t_axes)
    points = c[None, :] + 1j * tensor_mesh(t_axes)
    res = mellin(f, points)
    res.axes = t_axes
    res.meta["contour"] = c.tolist()
    return res


def mellin_inverse(g, x, c=None, epsilon=None, tolerance=settings.EPSILON_TOLERANCE):
    """
    M^{-1} g(x) = lim_{eps->0} (2 pi i)^{-n} int_{c+iR^n} g(s) prod_j x_j^{-s_j} e^{eps s_j^2} ds.
    Params:
        g: TransformResult from mellin_on_contour
        x: Positive output points or axes
        c: Contour real parts (defaults to the ones recorded in g)
        epsilon: Fixed regulator, None for the halving schedule
    Returns:
        TransformResult
    """
    if g.axes is None or "contour" not in g.meta:
        raise ConfigurationError("the inverse Mellin transform needs values from mellin_on_contour")
    axes = g.axes
    contour = np.asarray(g.meta["contour"] if c is None else c, dtype=float)
    values = g.grid_values()
    points, out_axes = resolve_points(x, len(axes))
    if np.any(points <= 0):
        raise DomainError("inverse Mellin transform is defined for x > 0")

    def make_kernel(eps):
        def kernel(j, outputs, nodes):
            s = contour[j] + 1j * nodes
            return np.exp(-s * np.log(outputs) + eps * s ** 2) / (2 * pi)
        return kernel

    out, meta = regularized_limit(lambda eps: grid_apply(values, axes, points, make_kernel(eps)), epsilon, tolerance)
    meta.update(scheme="trapezoid", contour=contour.tolist(),
                error=nested_error(values, axes, points, make_kernel(meta["epsilon"]), "trapezoid", out))
    return TransformResult(np.real_if_close(out, tol=1e6), points, out_axes, meta)
