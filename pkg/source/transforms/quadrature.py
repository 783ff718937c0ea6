import logging
from dataclasses import dataclass, field
from typing import Optional

import mpmath
import numpy as np
from scipy.integrate import quad
from scipy.special import jn_zeros

from source import settings
from source.core.grid import Axis, tensor_mesh
from source.errors import AccuracyError

logger = logging.getLogger(__name__)


@dataclass
class TransformResult:
    """
    Transform values at arbitrary points or on a tensor grid (axes), with the quadrature
    metadata: scheme, node counts and the nested-rule error estimate.
    """
    values: np.ndarray
    points: Optional[np.ndarray] = None
    axes: Optional[tuple] = None
    meta: dict = field(default_factory=dict)

    @property
    def error(self):
        return self.meta.get("error", 0.0)

    def mesh(self):
        if self.axes is not None:
            return tensor_mesh(self.axes)
        return self.points

    def grid_values(self):
        if self.axes is None:
            raise ValueError("result is not on a tensor grid")
        return np.asarray(self.values).reshape(tuple(a.count for a in self.axes))


def resolve_points(s, n):
    """
    Normalises frequency/position arguments.
    Params:
        s: array (M, n), a single point (n,), a scalar, an Axis or a sequence of Axis
        n: Dimension
    Returns:
        (points (M, n), axes or None)
    """
    if isinstance(s, Axis):
        axes = (s,) * n
        return tensor_mesh(axes), axes
    if isinstance(s, (list, tuple)) and s and all(isinstance(a, Axis) for a in s):
        axes = tuple(s)
        return tensor_mesh(axes), axes
    arr = np.asarray(s)
    if arr.ndim == 0:
        arr = np.full((1, n), arr)
    elif arr.ndim == 1:
        arr = arr[:, None] if n == 1 else arr[None, :]
    return arr, None


def gauss_legendre(lo, hi, order, panels=1):
    """
    Composite Gauss-Legendre rule on [lo, hi].
    Returns:
        (nodes, weights)
    """
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append((b - a) / 2 * x + (a + b) / 2)
        weights.append((b - a) / 2 * w)
    return np.concatenate(nodes), np.concatenate(weights)


def tensor_rule(rules):
    """Tensor product of one-dimensional (nodes, weights) rules -> (points (N, n), weights (N,))."""
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    wgrids = np.meshgrid(*[r[1] for r in rules], indexing="ij")
    points = np.stack([g.ravel() for g in grids], axis=-1)
    weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
    return points, weights


def apply_axiswise(values, matrices):
    """Applies one matrix per axis to an n-dimensional array (separable linear map)."""
    out = values
    for j, m in enumerate(matrices):
        out = np.moveaxis(np.tensordot(m, out, axes=([1], [j])), 0, j)
    return out


def separable_sum(kernels, grid_values):
    """
    sum_{i_1..i_n} prod_j K_j[m, i_j] V[i_1..i_n] for every output row m.
    Params:
        kernels: list of arrays (M, N_j), quadrature weights already folded in
        grid_values: array (N_1, ..., N_n)
    Returns:
        array (M,)
    """
    letters = "abcdefgh"
    n = len(kernels)
    spec = ",".join(f"m{letters[j]}" for j in range(n)) + "," + letters[:n] + "->m"
    return np.einsum(spec, *kernels, grid_values, optimize=True)


def chunked(points, size=256):
    for start in range(0, len(points), size):
        yield slice(start, start + size)


def regularized_limit(evaluate, epsilon=None, tolerance=settings.EPSILON_TOLERANCE,
                      start=settings.EPSILON_START, floor=settings.EPSILON_FLOOR):
    """
    The epsilon -> 0 limit of a regularised expression by halving epsilon until successive
    results agree to tolerance (relative to max(1, |value|)).
    Params:
        evaluate: callable epsilon -> array
        epsilon: Fixed regulator (skips the schedule)
    Returns:
        (values, meta) with the final epsilon and the last successive difference
    """
    if epsilon is not None:
        return np.asarray(evaluate(epsilon)), {"epsilon": epsilon}

    eps = start
    prev = np.asarray(evaluate(eps))
    while True:
        eps /= 2
        cur = np.asarray(evaluate(eps))
        diff = float(np.abs(cur - prev).max()) if cur.size else 0.0
        scale = max(1.0, float(np.abs(cur).max()) if cur.size else 0.0)
        if diff <= tolerance * scale:
            return cur, {"epsilon": eps, "epsilon_error": diff}
        if eps < floor:
            logger.warning("regulator schedule stopped at epsilon=%.2e with difference %.3e", eps, diff)
            raise AccuracyError("regularised limit did not converge", achieved=diff / scale, tolerance=tolerance)
        prev = cur


# -----------
# OSCILLATORY BESSEL INTEGRALS
# -----------
def bessel_zeros(nu, count):
    """First count positive zeros of J_nu for nu in {0, 1, ...} or +-1/2."""
    nu = float(nu)
    k = np.arange(1, count + 1)
    if nu == -0.5:
        return (k - 0.5) * np.pi
    if nu == 0.5:
        return k * np.pi
    return jn_zeros(int(nu), count)


def bessel_oscillatory_integral(fn, nu, scale, tolerance=1e-10, zeros=60):
    """
    int_0^inf fn(u) du for an integrand oscillating like J_nu(scale * u): integrates between
    consecutive zeros and accelerates the partial sums with the Shanks transformation.
    Params:
        fn: Scalar integrand
        nu: Bessel order
        scale: Frequency of the oscillation
        tolerance: Absolute tolerance on the extrapolated value
        zeros: Number of zero intervals
    Returns:
        (value, error estimate)
    """
    breaks = np.concatenate([[0.0], bessel_zeros(nu, zeros) / scale])
    pieces = np.array([quad(fn, a, b, limit=200, epsabs=tolerance / zeros)[0]
                       for a, b in zip(breaks[:-1], breaks[1:])])
    partial = np.cumsum(pieces)
    tail = np.abs(pieces[-4:]).sum()
    if tail <= tolerance:
        return float(partial[-1]), float(tail)

    try:
        table = mpmath.shanks([mpmath.mpf(float(p)) for p in partial[-21:]])
        value = float(table[-1][-1])
        error = abs(value - float(table[-2][-1]))
    except ZeroDivisionError:
        value, error = float(partial[-1]), float(tail)

    if error > 100 * tolerance * max(1.0, abs(value)):
        raise AccuracyError("oscillatory Bessel integral did not converge", achieved=error, tolerance=tolerance)
    return value, error


# -----------
# SEPARABLE EVALUATION
# -----------
def separable_transform(w, points, atom_fn):
    """
    Applies a one-dimensional linear functional family atom -> values(points_j) term by term.
    Params:
        w: WeightFunction
        points: array (M, n)
        atom_fn: callable (atom, coordinate array) -> array
    Returns:
        complex array (M,)
    """
    points = np.asarray(points)
    out = np.zeros(points.shape[0], dtype=complex)
    cache = {}
    for atoms, c in w.terms:
        term = np.full(points.shape[0], c, dtype=complex)
        for j, atom in enumerate(atoms):
            key = (atom, j)
            if key not in cache:
                cache[key] = np.asarray(atom_fn(atom, points[:, j]))
            term = term * cache[key]
        out = out + term
    return out


def grid_apply(grid_values, axes, points, kernel, rule="trapezoid", stride=1):
    """
    Tensor quadrature sum_i prod_j kernel(j, p_j, node_ij) w_ij V[i] at every output point p.
    Params:
        grid_values: array on the tensor grid of axes
        axes: Axis per dimension
        points: Output points (M, n)
        kernel: callable (axis index, outputs (m, 1), nodes (1, N)) -> (m, N)
        rule: "trapezoid" or "simpson"
        stride: 2 for the nested coarse rule
    Returns:
        complex array (M,)
    """
    sl = tuple(slice(None, None, stride) for _ in axes)
    vals = np.asarray(grid_values)[sl]
    nodes = [a.nodes[::stride] for a in axes]
    weights = [a.weights(rule, stride) for a in axes]
    out = np.empty(len(points), dtype=complex)
    for chunk in chunked(points):
        kernels = [kernel(j, points[chunk, j][:, None], nodes[j][None, :]) * weights[j][None, :]
                   for j in range(len(axes))]
        out[chunk] = separable_sum(kernels, vals)
    return out


def nested_error(grid_values, axes, points, kernel, rule, full):
    """Difference between the full rule and the stride-2 rule, or None when the grid cannot be halved."""
    if not all(a.can_halve(rule) for a in axes):
        return None
    coarse = grid_apply(grid_values, axes, points, kernel, rule, stride=2)
    return float(np.abs(full - coarse).max()) if len(full) else 0.0


def tail_mass(grid_values, axes):
    """Largest boundary value relative to the largest value (non-periodic axes only)."""
    v = np.abs(np.asarray(grid_values))
    top = v.max() if v.size else 0.0
    if top == 0:
        return 0.0
    edge = 0.0
    for j, a in enumerate(axes):
        if a.periodic:
            continue
        edge = max(edge, np.take(v, 0, axis=j).max(), np.take(v, -1, axis=j).max())
    return float(edge / top)
