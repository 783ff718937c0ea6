import logging
from math import factorial, pi

import numpy as np

from source import settings
from source.core.grid import Axis, GridDensity, tensor_mesh, tensor_weights
from source.core.spaces import (
    HALF, MatrixSpace, SpaceKind, SpectralSample, as_fraction, factorial_product, hankel_constant, vandermonde,
)
from source.errors import AccuracyError, ConfigurationError, DataError, DomainError
from source.spherical.kernels import generalized_power, spherical_function, trivial_weight
from source.transforms.fourier_series import index_box
from source.transforms.quadrature import TransformResult, regularized_limit, resolve_points
from source.weights.weight_function import WeightFunction

logger = logging.getLogger(__name__)

MAX_INVERSE_N = 3


# -----------
# SPACES
# -----------
def hankel_space(n, nu):
    """Representative space of the Hankel class with parameter nu."""
    nu = as_fraction(nu)
    if nu == -HALF:
        return MatrixSpace(SpaceKind.IO_EVEN, n)
    if nu == HALF:
        return MatrixSpace(SpaceKind.IO_ODD, n)
    return MatrixSpace(SpaceKind.CHIRAL, n, nu)


def hermplus_normalization_point(n):
    """s_0 + n = (2n-1, ..., n): S f there equals the total mass of f."""
    return trivial_weight(n) + n


def hermplus_contour(n):
    """Default real parts (n, ..., 2n-1) of the inversion contour."""
    return np.arange(n, 2 * n, dtype=float)


# -----------
# FORWARD TRANSFORMS
# -----------
def _nodes(space, x):
    return np.exp(1j * x) if space.kind == SpaceKind.UNITARY else x


def _extra(space, x):
    if space.kind == SpaceKind.HERM_PLUS:
        return np.prod(x, axis=-1) ** (-space.n)
    return 1.0


def _as_grid(f, space, axes):
    if isinstance(f, GridDensity):
        return f
    if axes is None:
        raise ConfigurationError("a WeightFunction or callable density needs quadrature axes")
    axes = (axes,) * space.n if isinstance(axes, Axis) else tuple(axes)
    if not callable(f):
        raise ConfigurationError(f"cannot integrate {type(f).__name__}")
    return GridDensity.from_function(lambda pts: np.real_if_close(np.asarray(f(pts))), space.spectral_domain,
                                     axes, tol=None, signed=True)


def _dimension(f, axes):
    if isinstance(f, (GridDensity, WeightFunction)):
        return f.n
    if isinstance(f, SpectralSample):
        return np.atleast_2d(f.values).shape[1]
    if isinstance(axes, (list, tuple)):
        return len(axes)
    raise ConfigurationError("the dimension of a callable density is taken from its list of axes")


def _output_points(x):
    if isinstance(x, Axis):
        return resolve_points(x, 1)
    if isinstance(x, (list, tuple)) and x and all(isinstance(a, Axis) for a in x):
        return resolve_points(x, len(x))
    return np.atleast_2d(np.asarray(x, dtype=float)), None


def spherical_forward(space: MatrixSpace, f, s, axes=None, tolerance=None, rule="trapezoid"):
    """
    S f(s) = int f(x) phi(x, s) dx (times prod x^{-n} on Herm+) by quadrature or as a sample mean.
    Params:
        space: Matrix space fixing phi
        f: SpectralSample (Monte Carlo), GridDensity, or WeightFunction / callable with axes (quadrature)
        s: Parameter points (M, n)
        axes: Quadrature axes for WeightFunction / callable input
        tolerance: Largest accepted Monte Carlo standard error
        rule: Quadrature rule on grids
    Returns:
        TransformResult, meta["stderr"] for samples
    """
    n = space.n
    phi = spherical_function(space)
    points, s_axes = resolve_points(s, n)

    if isinstance(f, SpectralSample):
        X = np.atleast_2d(f.values)
        if X.shape[0] == 0:
            raise DataError("empty sample stream")
        if space.kind == SpaceKind.HERM_PLUS and np.any(X <= 0):
            raise DataError("Herm+ samples must be positive definite")
        extra = _extra(space, X)
        rows = np.array([phi.batch(_nodes(space, X), row) * extra for row in points])
        values = rows.mean(axis=1)
        stderr = float((np.sqrt(rows.real.var(axis=1) + rows.imag.var(axis=1)) / np.sqrt(X.shape[0])).max())
        if tolerance is not None and stderr > tolerance:
            raise AccuracyError("Monte Carlo error above tolerance", achieved=stderr, tolerance=tolerance)
        return TransformResult(values, points, s_axes, {"scheme": "sample mean", "samples": X.shape[0],
                                                        "stderr": stderr, "error": stderr})

    grid = _as_grid(f, space, axes)
    if n > MAX_INVERSE_N:
        raise ConfigurationError(f"quadrature spherical transforms are limited to n <= {MAX_INVERSE_N}")
    mesh = grid.mesh()
    weights = (tensor_weights(grid.axes, rule) * grid.values).ravel()
    keep = weights != 0
    mesh, weights = mesh[keep], weights[keep]
    extra = _extra(space, mesh)
    values = np.array([np.sum(weights * extra * phi.batch(_nodes(space, mesh), row)) for row in points])
    return TransformResult(values, points, s_axes, {"scheme": rule, "nodes": int(keep.sum())})


def spherical_herm(f, s, axes=None, tolerance=None):
    """Spherical transform on Herm; phi is the HCIZ integral."""
    n = _dimension(f, axes)
    return spherical_forward(MatrixSpace(SpaceKind.HERM, n), f, s, axes, tolerance)


def spherical_hankel(f, s, nu, axes=None, tolerance=None):
    """Spherical transform of the Hankel class M_nu over squared singular values."""
    n = _dimension(f, axes)
    return spherical_forward(hankel_space(n, nu), f, s, axes, tolerance)


def spherical_hermplus(f, s, axes=None, tolerance=None):
    """Spherical transform on Herm+: int f(x) phi(x, s) prod x^{-n} dx with the Gelfand-Naimark phi."""
    n = _dimension(f, axes)
    return spherical_forward(MatrixSpace(SpaceKind.HERM_PLUS, n), f, s, axes, tolerance)


def _check_distinct_integers(points):
    ints = np.rint(np.real(points))
    if np.any(np.abs(points - ints) > 0):
        raise DomainError("unitary spherical parameters must be integers")
    for row in ints:
        if len(set(row.tolist())) < len(row):
            raise DomainError(f"repeated entries in s={row.tolist()}: Delta(s) = 0 carries no information")
    return ints


def spherical_unitary(f, s, axes=None, tolerance=None):
    """Spherical transform on U(n) at pairwise distinct integer s; axes are angle axes for callables."""
    n = _dimension(f, axes)
    points, _ = resolve_points(s, n)
    ints = _check_distinct_integers(points)
    if axes is None and not isinstance(f, (SpectralSample, GridDensity)):
        axes = Axis(-pi, pi, 64, periodic=True)
    return spherical_forward(MatrixSpace(SpaceKind.UNITARY, n), f, ints, axes, tolerance)


def _matrix_mean(values, tolerance):
    values = np.asarray(values)
    stderr = float(np.sqrt(values.real.var() + values.imag.var()) / np.sqrt(len(values)))
    if tolerance is not None and stderr > tolerance:
        raise AccuracyError("Monte Carlo error above tolerance", achieved=stderr, tolerance=tolerance)
    return complex(values.mean()), stderr


def spherical_hermplus_matrices(X, s, tolerance=None):
    """
    S f(s) as the sample mean of the generalized power |X|^{s - s_0 - n} over positive-definite samples.
    Returns:
        (mean, standard error)
    """
    X = np.asarray(X)
    n = X.shape[-1]
    if not np.all(np.linalg.eigvalsh(X) > 0):
        raise DataError("Herm+ samples must be positive definite")
    return _matrix_mean(generalized_power(X, np.asarray(s) - hermplus_normalization_point(n)), tolerance)


def spherical_unitary_matrices(X, s, tolerance=None):
    """
    S f(s) as the sample mean of |X|^{t - s_0} with t the entries of s in decreasing order
    (the chamber where the generalized power has no poles).
    Returns:
        (mean, standard error)
    """
    X = np.asarray(X)
    n = X.shape[-1]
    (t,) = _check_distinct_integers(np.atleast_2d(s))
    t = np.sort(t)[::-1]
    return _matrix_mean(generalized_power(X, t - trivial_weight(n)), tolerance)


# -----------
# INVERSE TRANSFORMS
# -----------
def _check_inverse_n(n):
    if n > MAX_INVERSE_N:
        raise ConfigurationError(f"inverse spherical transforms are limited to n <= {MAX_INVERSE_N}")


def _transform_values(Sf, nodes):
    if isinstance(Sf, TransformResult):
        values = np.asarray(Sf.values)
        if values.shape[0] != nodes.shape[0]:
            raise ConfigurationError("transform values do not match the integration nodes")
        return values
    return np.asarray(Sf(nodes))


def _integration_axes(axes, n, what):
    if axes is None:
        raise ConfigurationError(f"the inverse transform needs {what} axes")
    return (axes,) * n if isinstance(axes, Axis) else tuple(axes)


def _regularised_sum(kernel_rows, base, axes, regulator, epsilon, tolerance):
    """
    Sums kernel_rows @ (base * w * regulator(eps)) with the halving schedule and a nested-rule error.
    kernel_rows: (M, N) on the tensor mesh of axes; base: (N,); regulator: eps -> (N,).
    """
    shape = tuple(a.count for a in axes)
    w = tensor_weights(axes).ravel()

    def evaluate(eps, stride=1):
        if stride == 1:
            return kernel_rows @ (base * w * regulator(eps))
        sl = (slice(None),) + tuple(slice(None, None, 2) for _ in axes)
        sub = kernel_rows.reshape((-1,) + shape)[sl].reshape(kernel_rows.shape[0], -1)
        sub_base = (base * regulator(eps)).reshape(shape)[sl[1:]].ravel()
        return sub @ (sub_base * tensor_weights(axes, "trapezoid", 2).ravel())

    out, meta = regularized_limit(evaluate, epsilon, tolerance)
    if all(a.can_halve() for a in axes):
        meta["error"] = float(np.abs(out - evaluate(meta["epsilon"], 2)).max())
    return out, meta


def spherical_herm_inverse(Sf, x, epsilon=None, s_axes=None, tolerance=settings.EPSILON_TOLERANCE):
    """
    f(x) = Delta(x)^2 / prod_{j=1}^n (j!)^2 (2 pi)^{-n} int Sf(s) phi(-x, s) Delta(s)^2 e^{-eps |s|^2} ds.
    Params:
        Sf: Callable on parameter points (M, n), or a TransformResult on the mesh of s_axes
        x: Output points (M, n)
        s_axes: Integration axes in s
    Returns:
        TransformResult
    """
    points, out_axes = _output_points(x)
    n = points.shape[1]
    _check_inverse_n(n)
    axes = _integration_axes(s_axes if s_axes is not None else getattr(Sf, "axes", None), n, "s")
    s = tensor_mesh(axes)
    base = _transform_values(Sf, s) * vandermonde(s) ** 2
    phi = spherical_function(MatrixSpace(SpaceKind.HERM, n))
    rows = np.array([phi.batch(s, -row, vary="s") for row in points])
    out, meta = _regularised_sum(rows, base, axes, lambda eps: np.exp(-eps * (s ** 2).sum(-1)), epsilon, tolerance)
    values = vandermonde(points) ** 2 / factorial_product(n) ** 2 / (2 * pi) ** n * out
    meta["scheme"] = "trapezoid"
    return TransformResult(values.real, points, out_axes, meta)


def spherical_hankel_inverse(Sf, x, nu, epsilon=None, t_axes=None, tolerance=settings.EPSILON_TOLERANCE):
    """
    f(x) = Delta(x)^2 / (n! C_nu)^2 int Sf(s) phi(x, s) Delta(s)^2 prod (x_j s_j)^nu e^{-eps s_j} ds,
    integrated in t = sqrt(s) so that nu = -1/2 stays regular.
    Params:
        Sf: Callable on s points (M, n)
        x: Positive output points (M, n)
        t_axes: Integration axes in t = sqrt(s)
    Returns:
        TransformResult
    """
    points, out_axes = _output_points(x)
    n = points.shape[1]
    _check_inverse_n(n)
    space = hankel_space(n, nu)
    nu = space.nu_value
    axes = _integration_axes(t_axes, n, "t")
    t = tensor_mesh(axes)
    s = t ** 2
    base = _transform_values(Sf, s) * vandermonde(s) ** 2
    phi = spherical_function(space)
    with np.errstate(divide="ignore", invalid="ignore"):
        rows = np.array([phi.batch(s, row, vary="s") * np.prod(2 * row ** nu * t ** (2 * nu + 1), axis=-1)
                         for row in points])
    rows = np.nan_to_num(rows)
    out, meta = _regularised_sum(rows, base, axes, lambda eps: np.exp(-eps * s.sum(-1)), epsilon, tolerance)
    values = vandermonde(points) ** 2 / (factorial(n) * hankel_constant(n, nu)) ** 2 * out
    meta["scheme"] = "trapezoid in sqrt(s)"
    return TransformResult(values.real, points, out_axes, meta)


def spherical_hermplus_inverse(Sf, x, epsilon=None, t_axes=None, c=None, tolerance=settings.EPSILON_TOLERANCE):
    """
    f(x) = (-1)^{n(n-1)/2} Delta(x)^2 / (prod_{j=0}^n j!)^2 (2 pi)^{-n}
           int Sf(sigma) Delta(sigma)^2 phi(1/x, sigma) e^{eps sum sigma^2} dt,  sigma = c + i t.
    Params:
        Sf: Callable on complex parameter points (M, n)
        x: Positive output points (M, n)
        t_axes: Integration axes along the imaginary direction
        c: Contour real parts (defaults to (n, ..., 2n-1))
    Returns:
        TransformResult
    """
    points, out_axes = _output_points(x)
    n = points.shape[1]
    _check_inverse_n(n)
    if np.any(points <= 0):
        raise DomainError("Herm+ densities live on positive x")
    c = hermplus_contour(n) if c is None else np.asarray(c, dtype=float)
    axes = _integration_axes(t_axes, n, "t")
    sigma = c[None, :] + 1j * tensor_mesh(axes)
    base = _transform_values(Sf, sigma) * vandermonde(sigma) ** 2
    phi = spherical_function(MatrixSpace(SpaceKind.HERM_PLUS, n))
    rows = np.array([phi.batch(sigma, 1.0 / row, vary="s") for row in points])
    out, meta = _regularised_sum(rows, base, axes, lambda eps: np.exp(eps * (sigma ** 2).sum(-1)), epsilon, tolerance)
    sign = -1.0 if (n * (n - 1) // 2) % 2 else 1.0
    values = sign * vandermonde(points) ** 2 / factorial_product(n) ** 2 / (2 * pi) ** n * out
    meta.update(scheme="trapezoid on the contour", contour=c.tolist())
    return TransformResult(values.real, points, out_axes, meta)


def spherical_unitary_inverse(Sf, theta, epsilon=None, cutoff=8, tolerance=settings.EPSILON_TOLERANCE):
    """
    f(theta) = |Delta(e^{i theta})|^2 / ((2 pi)^n (prod_{j=0}^n j!)^2)
               sum_{|s_j| <= cutoff} Sf(s) phi(e^{-i theta}, s) Delta(s)^2 e^{-eps |s|^2}.
    Params:
        Sf: Callable on integer points (M, n)
        theta: Angles (M, n)
        cutoff: Truncation of the lattice sum
    Returns:
        TransformResult
    """
    points, out_axes = _output_points(theta)
    n = points.shape[1]
    _check_inverse_n(n)
    s = index_box(n, cutoff).astype(float)
    keep = vandermonde(s) != 0
    s = s[keep]
    base = np.asarray(Sf(s), dtype=complex) * vandermonde(s) ** 2
    phi = spherical_function(MatrixSpace(SpaceKind.UNITARY, n))
    rows = np.array([phi.batch(s, np.exp(-1j * row), vary="s") for row in points])

    def evaluate(eps):
        return rows @ (base * np.exp(-eps * (s ** 2).sum(-1)))

    out, meta = regularized_limit(evaluate, epsilon, tolerance)
    dz = np.abs(vandermonde(np.exp(1j * points))) ** 2
    values = dz / ((2 * pi) ** n * factorial_product(n) ** 2) * out
    meta.update(scheme="truncated lattice sum", cutoff=cutoff)
    return TransformResult(values.real, points, out_axes, meta)
