import logging

import numpy as np

from source.core.grid import Axis, GridDensity
from source.core.spaces import Domain
from source.errors import AccuracyError, ConfigurationError
from source.transforms.quadrature import gauss_legendre, tensor_rule

logger = logging.getLogger(__name__)

MAX_MARGINAL_N = 3
MARGINAL_TOLERANCE = 1e-6
DEFAULT_BOUNDS = {
    Domain.REAL_LINE: (-8.0, 8.0),
    Domain.HALF_LINE: (0.0, 40.0),
    Domain.TORUS: (-np.pi, np.pi),
}


def _integrate_out(joint, x, n, j, rule):
    """Integral of joint over every coordinate but j, with coordinate j pinned to x."""
    points, weights = rule
    out = np.empty(len(x))
    for i, xi in enumerate(x):
        full = np.insert(points, j, xi, axis=1)
        out[i] = float(np.real(np.sum(np.asarray(joint(full)) * weights)))
    return out


def marginal_level_density(joint, axis, n=None, domain=None, bounds=None, order=40, panels=4,
                           tolerance=MARGINAL_TOLERANCE):
    """
    One-point function rho(x) = (1/n) sum_j int f(x_1..x_{j-1}, x, x_{j+1}..x_n) over the other coordinates.
    Params:
        joint: Joint density (WeightFunction, GridDensity or callable points (M, n) -> values)
        axis: Axis of the result
        n: Number of coordinates (taken from joint when it has one)
        domain: Domain of the coordinates (taken from joint when it has one)
        bounds: (lo, hi) integration range of the other coordinates
        order: Gauss-Legendre order per panel
        panels: Panels per coordinate
        tolerance: Largest accepted gap between the full and the half-order rule
    Returns:
        GridDensity on axis (signed, unnormalised-check off)
    """
    n = getattr(joint, "n", n)
    if n is None:
        raise ConfigurationError("the number of coordinates is required for a plain callable")
    if n > MAX_MARGINAL_N:
        raise ConfigurationError(f"marginalisation is limited to n <= {MAX_MARGINAL_N}, got {n}")
    if domain is None:
        domain = joint.domain[0] if isinstance(joint, GridDensity) else getattr(joint, "domain", Domain.REAL_LINE)
    domain = Domain(domain)
    if isinstance(joint, GridDensity) and bounds is None:
        bounds = (joint.axes[0].lo, joint.axes[0].hi)
    lo, hi = bounds or DEFAULT_BOUNDS[domain]
    axis = axis if isinstance(axis, Axis) else Axis(*axis)
    x = axis.nodes

    if n == 1:
        values = np.real(np.asarray(joint(x[:, None]))).ravel()
        return GridDensity(domain, (axis,), values, tol=None, signed=True, meta={"order": 0, "error": 0.0})

    def level(order_):
        rule = tensor_rule([gauss_legendre(lo, hi, order_, panels)] * (n - 1))
        return sum(_integrate_out(joint, x, n, j, rule) for j in range(n)) / n

    values = level(order)
    coarse = level(max(order // 2, 2))
    error = float(np.max(np.abs(values - coarse))) if values.size else 0.0
    scale = max(float(np.max(np.abs(values))), 1e-300)
    if error > tolerance * max(scale, 1.0):
        raise AccuracyError("marginal quadrature did not converge", achieved=error, tolerance=tolerance)
    logger.debug("marginal of a %d-point density: quadrature gap %.2e", n, error)
    return GridDensity(domain, (axis,), values, tol=None, signed=True,
                       meta={"order": order, "panels": panels, "bounds": (lo, hi), "error": error})


def gue2_level_density(x, variance=1.0):
    """Closed GUE n=2 one-point function (1/2) phi(x) (1 + x^2) for unit variance, rescaled otherwise."""
    s = np.sqrt(variance)
    y = np.asarray(x) / s
    return 0.5 * np.exp(-y ** 2 / 2) / np.sqrt(2 * np.pi) * (1 + y ** 2) / s
