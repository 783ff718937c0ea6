"""
Determinant ratios det[K(x_j, s_k)] / (Delta(x) Delta(s)) with confluent divided differences.

Each side is turned into the functionals [x_1..x_i] (i = 1..n) of Newton divided differences, written as
weights over a set of evaluation points: the plain nodes when they are separated, plus trapezoid points on
a small circle around every cluster of coinciding nodes. With A_x, A_s those weight matrices,
det(A_x K A_s^T) is the ratio, and the limit at coinciding arguments comes out of the same formula.
"""
import logging

import numpy as np

from source import settings
from source.core.spaces import vandermonde

logger = logging.getLogger(__name__)


def _sort_key(z):
    return (z.real, z.imag)


def divided_difference_functionals(nodes, max_radius=0.5, tolerance=settings.DEGENERACY_TOLERANCE,
                                   contour_points=settings.CONTOUR_POINTS):
    """
    Weights of the divided differences [x_1], [x_1, x_2], ..., [x_1..x_n] over evaluation points.
    Params:
        nodes: n real or complex nodes (sorted internally; the ratio is permutation invariant)
        max_radius: Largest contour radius around a cluster (keeps the circle inside the kernel's domain)
        tolerance: Relative gap below which nodes are treated as coinciding
        contour_points: Trapezoid points per contour
    Returns:
        (points (P,), weights (n, P))
    """
    x = np.array(sorted(np.asarray(nodes, dtype=complex).ravel(), key=_sort_key))
    n = len(x)
    gap = tolerance * max(1.0, float(np.abs(x).max()) if n else 1.0)
    points = list(x)
    # table[(i, j)] is the weight vector of [x_i..x_j]; vectors grow as contour points are added
    table = {}
    for i in range(n):
        e = np.zeros(n, dtype=complex)
        e[i] = 1.0
        table[(i, i)] = e

    def pad(v):
        return np.concatenate([v, np.zeros(len(points) - len(v), dtype=complex)])

    for length in range(1, n):
        for i in range(n - length):
            j = i + length
            if abs(x[j] - x[i]) > gap:
                table[(i, j)] = (pad(table[(i + 1, j)]) - pad(table[(i, j - 1)])) / (x[j] - x[i])
                continue
            cluster = x[i:j + 1]
            centre = cluster.mean()
            radius = min(max_radius, max(0.5, 10 * float(np.abs(cluster - centre).max())))
            theta = 2 * np.pi * np.arange(contour_points) / contour_points
            z = centre + radius * np.exp(1j * theta)
            w = radius * np.exp(1j * theta) / contour_points / np.prod(z[:, None] - cluster[None, :], axis=1)
            points.extend(z)
            table[(i, j)] = np.concatenate([np.zeros(len(points) - contour_points, dtype=complex), w])

    weights = np.zeros((n, len(points)), dtype=complex)
    for i in range(n):
        v = table[(0, i)]
        weights[i, :len(v)] = v
    return np.array(points), weights


def determinant_ratio(kernel, x, s, radius_x=0.5, radius_s=0.5):
    """
    det[kernel(x_j, s_k)] / (Delta(x) Delta(s)) at one pair of points, stable at coinciding arguments.
    Params:
        kernel: Vectorised callable (x column, s row) -> matrix, analytic near the nodes
        x, s: n nodes each
        radius_x, radius_s: Largest contour radius on each side
    Returns:
        complex
    """
    px, ax = divided_difference_functionals(x, radius_x)
    ps, as_ = divided_difference_functionals(s, radius_s)
    M = ax @ kernel(px[:, None], ps[None, :]) @ as_.T
    return complex(np.linalg.det(M))


def separated_rows(values, tolerance=settings.DEGENERACY_TOLERANCE):
    """Rows whose nodes are pairwise separated (M, n) -> bool (M,)."""
    v = np.asarray(values)
    n = v.shape[-1]
    scale = np.maximum(1.0, np.abs(v).max(axis=-1))
    ok = np.ones(v.shape[0], dtype=bool)
    for j in range(n):
        for k in range(j + 1, n):
            ok &= np.abs(v[:, k] - v[:, j]) > tolerance * scale
    return ok


def batch_ratio(kernel, X, s, vary="x", radius_fixed=0.5, radius_vary=0.5):
    """
    The determinant ratio for many points on one side with the other side fixed.
    Params:
        kernel: As in determinant_ratio
        X: Varying nodes (M, n)
        s: Fixed nodes (n,)
        vary: "x" when X holds first arguments, "s" when X holds second arguments
    Returns:
        complex array (M,)
    """
    X = np.atleast_2d(np.asarray(X))
    pf, af = divided_difference_functionals(s, radius_fixed)
    out = np.empty(X.shape[0], dtype=complex)
    ok = separated_rows(X)
    if ok.any():
        Xm = X[ok]
        if vary == "x":
            K = kernel(Xm[:, :, None], pf[None, None, :])
            M = K @ af.T
        else:
            K = kernel(pf[None, :, None], Xm[:, None, :])
            M = af @ K
        with np.errstate(divide="ignore", invalid="ignore"):
            out[ok] = np.linalg.det(M) / vandermonde(Xm)
    for m in np.flatnonzero(~ok):
        if vary == "x":
            out[m] = determinant_ratio(kernel, X[m], s, radius_vary, radius_fixed)
        else:
            out[m] = determinant_ratio(kernel, s, X[m], radius_fixed, radius_vary)
    return out
