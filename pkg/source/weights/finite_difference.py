import logging
from itertools import permutations
from math import factorial

import numpy as np

from source import settings
from source.core.grid import Axis, GridDensity
from source.errors import AccuracyError, ConfigurationError, DomainError, DomainMismatchError
from source.weights.operators import OPERATOR_DOMAINS, OperatorKind, VandermondeOperator, _permutation_sign

logger = logging.getLogger(__name__)


def _grad(values, axis, step, periodic):
    if periodic:
        return (np.roll(values, -1, axis=axis) - np.roll(values, 1, axis=axis)) / (2 * step)
    return np.gradient(values, step, axis=axis, edge_order=2)


def _apply_axis(kind, nu, values, axis, nodes, step, periodic):
    shape = [1] * values.ndim
    shape[axis] = -1
    x = nodes.reshape(shape)
    if kind == OperatorKind.FLAT or kind == OperatorKind.HALF_LINE:
        return -_grad(values, axis, step, periodic)
    if kind == OperatorKind.FLAT_SECOND:
        return -_grad(_grad(values, axis, step, periodic), axis, step, periodic)
    if kind == OperatorKind.MELLIN:
        return -x * _grad(values, axis, step, periodic)
    if kind == OperatorKind.SQRT:
        return -np.sqrt(x) * _grad(values, axis, step, periodic)
    if kind == OperatorKind.HANKEL:
        nu = float(nu)
        inner = x ** (1 - nu) * _grad(values, axis, step, periodic)
        return -x ** nu * _grad(inner, axis, step, periodic)
    if kind == OperatorKind.TORUS:
        return 1j * _grad(values, axis, step, periodic)
    raise ConfigurationError(f"no finite-difference rule for {kind}")


def _vandermonde_on_grid(op, values, axes):
    n = len(axes)
    out = np.zeros(values.shape, dtype=complex if op.kind == OperatorKind.TORUS else values.dtype)
    for perm in permutations(range(n)):
        term = values
        for j in range(n):
            for _ in range(perm[j]):
                term = _apply_axis(op.kind, op.nu, term, j, axes[j].nodes, axes[j].step, axes[j].periodic)
        out = out + _permutation_sign(perm) * term
    return out


def finite_difference_oracle(op: VandermondeOperator, w_numeric: GridDensity,
                             tolerance=settings.FINITE_DIFFERENCE_TOLERANCE):
    """
    Central-difference composition of the one-dimensional operators on a grid, with a
    Richardson estimate (h against 2h) of the O(h^2) error.
    Params:
        op: Vandermonde operator
        w_numeric: Gridded weight
        tolerance: Largest accepted absolute error estimate
    Returns:
        GridDensity (signed) with meta["error"]
    """
    if op.n != w_numeric.n:
        raise DomainMismatchError(f"operator of arity {op.n} applied to a grid of dimension {w_numeric.n}")
    if any(d != OPERATOR_DOMAINS[op.kind] for d in w_numeric.domain):
        raise DomainMismatchError(f"{op.kind.value} operator on a {w_numeric.domain[0].value} grid")
    if op.kind == OperatorKind.HANKEL and any(a.lo <= 0 for a in w_numeric.axes):
        raise DomainError("Hankel-derivative grids must exclude x=0")
    if not all(a.can_halve() for a in w_numeric.axes):
        raise ConfigurationError("finite-difference grids need 2k+1 points per axis (2k on the torus)")

    fine = _vandermonde_on_grid(op, w_numeric.values, w_numeric.axes)

    coarse_axes = tuple(Axis(a.lo, a.hi, a.count // 2 if a.periodic else (a.count + 1) // 2, a.periodic)
                        for a in w_numeric.axes)
    sl = tuple(slice(None, None, 2) for _ in w_numeric.axes)
    coarse = _vandermonde_on_grid(op, w_numeric.values[sl], coarse_axes)
    error = float(np.abs(fine[sl] - coarse).max()) / 3 if fine.size else 0.0

    logger.debug("finite-difference %s: Richardson error %.3e", op.kind.value, error)
    if error > tolerance:
        raise AccuracyError("grid too coarse for the finite-difference oracle", achieved=error, tolerance=tolerance)

    return GridDensity(w_numeric.domain, w_numeric.axes, fine, tol=None, signed=True,
                       meta={"error": error, "scheme": "central differences, h^2"})


def central_derivative(fn, x, order, h):
    """
    Central finite-difference derivative of a vectorised scalar function.
    Stencil weights solve the moment system on the symmetric nodes -m..m, m = order//2 + 1.
    Params:
        fn: callable on arrays
        x: Evaluation points
        order: Derivative order
        h: Step
    Returns:
        array like x
    """
    half = (order + 2) // 2
    offsets = np.arange(-half, half + 1)
    moments = np.vander(offsets, len(offsets), increasing=True).T
    rhs = np.zeros(len(offsets))
    rhs[order] = factorial(order)
    weights = np.linalg.solve(moments, rhs)
    x = np.asarray(x, dtype=float)
    total = sum(w * fn(x + k * h) for w, k in zip(weights, offsets))
    return total / h ** order
