"""
Weights feeding the multiplicative and unitary principles, estimated from samples or built from the
transforms of a Polya ensemble.
"""
import logging
from itertools import permutations, product
from math import pi

import numpy as np

from source import settings
from source.core.grid import Axis, GridDensity, tensor_mesh
from source.core.spaces import Domain, EnsembleSpec, SpaceKind, SpectralSample, WishartLike, vandermonde
from source.core.spectrum import lu_diagonals_numeric, principal_minors
from source.errors import AccuracyError, ConfigurationError, DataError, DomainMismatchError
from source.spherical.divided import divided_difference_functionals, separated_rows
from source.transforms.fourier import fourier, fourier_inverse
from source.transforms.mellin import fundamental_strip, mellin, mellin_inverse
from source.transforms.quadrature import TransformResult, tail_mass
from source.weights.library import wishart_lu_weight
from source.weights.weight_function import WeightFunction

logger = logging.getLogger(__name__)

MAX_POLYA_N = 3


# -----------
# HERM+ LU WEIGHT
# -----------
def _lu_values(source):
    if isinstance(source, SpectralSample):
        if source.auxiliary is None:
            raise DataError("the sample carries no LU diagonals (draw it with auxiliary='lu')")
        return np.asarray(source.auxiliary, dtype=float)
    data = np.asarray(source)
    if data.ndim == 3:
        return lu_diagonals_numeric(data).real
    if data.ndim == 2:
        return data.astype(float)
    raise DataError(f"expected LU diagonals (count, n) or matrices (count, n, n), got shape {data.shape}")


def lu_weight_hermplus(source, axes=None):
    """
    The Herm+ weight g(u) = f_u(u) prod_j u_j^{j-n}, with f_u the joint density of the LU diagonals.
    Params:
        source: EnsembleSpec with a WishartLike density (closed form), a SpectralSample with LU auxiliary,
                LU diagonals (count, n) or positive-definite matrices (count, n, n)
        axes: Histogram axes on the half line for sample input (one Axis or one per coordinate)
    Returns:
        WeightFunction (closed form) or symmetrised GridDensity
    """
    if isinstance(source, EnsembleSpec):
        if source.space.kind != SpaceKind.HERM_PLUS or not isinstance(source.density, WishartLike):
            raise ConfigurationError(f"no closed-form LU weight for {source.describe()} on {source.space.label()}")
        return wishart_lu_weight(source.space.n, source.density.dof)

    u = _lu_values(source)
    if len(u) == 0:
        raise DataError("no samples")
    if np.any(u <= 0):
        raise DataError("non-positive pivot in the LU diagonals")
    n = u.shape[1]
    if axes is None:
        raise ConfigurationError("sample input needs histogram axes")
    axes = (axes,) * n if isinstance(axes, Axis) else tuple(axes)

    # bins centred on the axis nodes
    edges = [np.concatenate([a.nodes - a.step / 2, [a.nodes[-1] + a.step / 2]]) for a in axes]
    hist, _ = np.histogramdd(u, bins=edges)
    f_u = hist / (len(u) * np.prod([a.step for a in axes]))
    mesh = tensor_mesh(axes)
    powers = np.arange(1, n + 1) - n
    g = f_u * np.prod(mesh ** powers, axis=-1).reshape(f_u.shape)
    if len(set(axes)) == 1:
        g = sum(np.transpose(g, p) for p in permutations(range(n))) / len(list(permutations(range(n))))
    logger.info("LU weight estimated from %d samples on a %s grid", len(u), g.shape)
    return GridDensity(Domain.HALF_LINE, axes, g, tol=None, signed=True,
                       meta={"samples": len(u), "scheme": "histogram"})


# -----------
# UNITARY WEIGHT
# -----------
def _minors(samples):
    data = np.asarray(samples)
    if data.ndim == 3:
        return principal_minors(data)
    if data.ndim == 2:
        return data.astype(complex)
    raise DataError(f"expected matrices (count, n, n) or minors (count, n), got shape {data.shape}")


def _index_exponents(s):
    """e_l = t_l - t_{l+1} - 1 (l < n) and e_n = t_n for t = s sorted descending."""
    t = np.sort(np.asarray(s))[::-1]
    e = t[:-1] - t[1:] - 1
    return np.concatenate([e, t[-1:]])


def unitary_coefficients(samples, cutoff, tolerance=settings.RADIUS_TOLERANCE):
    """
    Monte Carlo Fourier coefficients F g(s) = E[prod_l m_l^{e_l(s)}] of the unitary weight at every
    pairwise distinct integer s with |s_j| <= cutoff; F g vanishes at repeated indices.
    Params:
        samples: Unitary matrices (count, n, n) or complex leading principal minors (count, n)
        cutoff: Largest |s_j|
        tolerance: Radius slack; samples with a minor modulus above 1 + tolerance are skipped
    Returns:
        dict s-tuple -> (coefficient, standard error)
    """
    m = _minors(samples)
    if len(m) == 0:
        raise DataError("no samples")
    radius = np.abs(m)
    bad = np.any(radius > 1 + tolerance, axis=1)
    if bad.any():
        logger.warning("skipping %d samples with principal-minor modulus above 1", int(bad.sum()))
        m = m[~bad]
    if len(m) == 0:
        raise DataError("every sample was skipped")
    n = m.shape[1]
    out = {}
    for s in product(range(-cutoff, cutoff + 1), repeat=n):
        if len(set(s)) < n:
            continue
        e = _index_exponents(s)
        with np.errstate(divide="ignore", invalid="ignore"):
            values = np.prod(m ** e, axis=-1)
        values = values[np.isfinite(values)]
        mean = complex(values.mean())
        stderr = float(np.sqrt(values.real.var() + values.imag.var()) / np.sqrt(len(values)))
        out[s] = (mean, stderr)
    return out


def unitary_weight_g(samples, cutoff, tolerance=settings.RADIUS_TOLERANCE):
    """
    Truncated Fourier-series estimate of the unitary weight g(theta) = (2 pi)^{-n} sum_s F g(s) e^{-i s.theta}.
    Params:
        samples: Unitary matrices (count, n, n) or complex leading principal minors (count, n)
        cutoff: Truncation |s_j| <= cutoff
    Returns:
        WeightFunction on the torus, meta-free; stderr per coefficient through unitary_coefficients
    """
    coefficients = unitary_coefficients(samples, cutoff, tolerance)
    n = len(next(iter(coefficients)))
    terms = {tuple(-k for k in s): value / (2 * pi) ** n for s, (value, _) in coefficients.items()}
    return WeightFunction.trig_polynomial(n, terms)


# -----------
# POLYA ENSEMBLES
# -----------
def _check_polya(weights, domain):
    if not weights:
        raise ConfigurationError("at least one weight is required")
    if len(weights) > MAX_POLYA_N:
        raise ConfigurationError(f"Polya weights are supported for n <= {MAX_POLYA_N}")
    for w in weights:
        if not isinstance(w, WeightFunction) or w.n != 1:
            raise ConfigurationError("Polya weights are one-dimensional WeightFunctions")
        if w.domain != domain:
            raise DomainMismatchError(f"Polya weight on {w.domain.value}, expected {domain.value}")


def _ratio_on_mesh(transforms, S):
    """
    det[T_k(s_j)] / Delta(s) on every row of S, with T_k evaluated through divided-difference functionals
    where rows have coinciding entries.
    """
    S = np.asarray(S, dtype=complex)
    n = S.shape[1]
    out = np.empty(S.shape[0], dtype=complex)
    ok = separated_rows(S)
    if ok.any():
        rows = S[ok]
        T = np.stack([np.stack([transforms[k](rows[:, j]) for k in range(n)], axis=-1) for j in range(n)], axis=1)
        det = np.linalg.det(T)
        out[ok] = det / vandermonde(rows)
    for r in np.flatnonzero(~ok):
        points, weights = divided_difference_functionals(S[r])
        T = np.stack([transforms[k](points) for k in range(n)], axis=-1)
        out[r] = np.linalg.det(weights @ T)
    return out


def _one_dim(w, transform):
    def evaluate(points):
        return transform(w, np.asarray(points)[:, None]).values
    return evaluate


def polynomial_ensemble_weight(weights, transform_kind, x_axes, s_axes, c=None, epsilon=None,
                               tolerance=settings.EPSILON_TOLERANCE):
    """
    Symmetric weight w of a Polya ensemble with Delta(D) w = det[w_k(x_j)], through the inverse transform
    of det[T w_k(s_j)] / Delta(T-symbol of D).
    "fourier": D = -d/dx on R, ratio det[F w_k(s_j)] / (i^{n(n-1)/2} Delta(s)).
    "mellin": D = -x d/dx on R_+, ratio det[M w_k(s_j)] / Delta(s) on the contour s = c + i t.
    Params:
        weights: One-dimensional WeightFunctions w_1..w_n
        transform_kind: "fourier" or "mellin"
        x_axes: Output grid axes
        s_axes: Frequency axes (imaginary parts t on the Mellin contour)
        c: Contour real part (mellin), default one unit right of the fundamental strip
    Returns:
        WeightFunction for n = 1, GridDensity otherwise
    """
    if transform_kind not in ("fourier", "mellin"):
        raise ConfigurationError(f"transform kind must be 'fourier' or 'mellin', got {transform_kind!r}")
    domain = Domain.REAL_LINE if transform_kind == "fourier" else Domain.HALF_LINE
    _check_polya(weights, domain)
    n = len(weights)
    if n == 1:
        return weights[0]
    s_axes = (s_axes,) * n if isinstance(s_axes, Axis) else tuple(s_axes)
    x_axes = (x_axes,) * n if isinstance(x_axes, Axis) else tuple(x_axes)
    mesh = tensor_mesh(s_axes)
    shape = tuple(a.count for a in s_axes)

    if transform_kind == "fourier":
        transforms = [_one_dim(w, fourier) for w in weights]
        ratio = _ratio_on_mesh(transforms, mesh) / (1j ** (n * (n - 1) // 2))
        meta = {}
    else:
        if c is None:
            c = max(fundamental_strip(w)[0] for w in weights) + 1.0
        transforms = [_one_dim(w, mellin) for w in weights]
        ratio = _ratio_on_mesh(transforms, c + 1j * mesh)
        meta = {"contour": [float(c)] * n}

    if not np.all(np.isfinite(ratio)):
        raise AccuracyError("det[T w_k(s_j)] / Delta(s) is not finite; the ensemble is not representable")
    tail = tail_mass(ratio.reshape(shape), s_axes)
    if tail > 1e-3:
        raise AccuracyError("det[T w_k(s_j)] / Delta(s) does not decay; the ensemble is not representable",
                            achieved=tail, tolerance=1e-3)

    g = TransformResult(ratio, mesh, s_axes, meta)
    if transform_kind == "fourier":
        res = fourier_inverse(g, x_axes, epsilon, tolerance)
    else:
        res = mellin_inverse(g, x_axes, epsilon=epsilon, tolerance=tolerance)
    values = np.real(np.asarray(res.values)).reshape(tuple(a.count for a in x_axes))
    logger.info("Polya weight via %s inversion, regulator %s", transform_kind, res.meta.get("epsilon"))
    return GridDensity(domain, x_axes, values, tol=None, signed=True, meta=dict(res.meta))
