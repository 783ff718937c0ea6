"""
Inverse Abel transforms A_nu^{-1}: even, permutation-symmetric functions on R^n to functions on R_+^n.

The composition A_nu^{-1} f = H_nu^{-1}[F f(2 sqrt(s))] is the reference definition. The explicit layered
integral x^nu int_x^inf (-d/dy)^{nu+1} f(sqrt(y)) (y - x)^{-1/2} dy reproduces it. Note the derivative
sign: with (d/dy)^{nu+1} instead the result flips by (-1)^{nu+1}.
"""
import logging
from math import comb, pi, sqrt

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import RegularGridInterpolator
from scipy.special import gamma

from source import settings
from source.core.grid import Axis, GridDensity, tensor_mesh
from source.core.spaces import HALF, Domain, as_fraction
from source.errors import AccuracyError, ConfigurationError, DomainError, DomainMismatchError
from source.transforms.fourier import fourier_atom
from source.transforms.hankel import bessel_kernel
from source.transforms.quadrature import (
    TransformResult, apply_axiswise, bessel_oscillatory_integral, regularized_limit, resolve_points,
    separable_transform,
)
from source.weights.atoms import GammaAtom, GaussAtom, half_line_deriv, sqrt_deriv
from source.weights.finite_difference import central_derivative
from source.weights.weight_function import WeightFunction

logger = logging.getLogger(__name__)


def _check_nu(nu, allow_half=False):
    f = as_fraction(nu)
    if allow_half and abs(f) == HALF:
        return float(f)
    if f.denominator != 1 or f < 0:
        raise ConfigurationError(f"abel_inverse needs an integer nu >= 0 (use abel_inverse_half for +-1/2), got {nu}")
    return int(f)


def _check_even_symmetric(f):
    if isinstance(f, WeightFunction):
        if f.domain != Domain.REAL_LINE:
            raise DomainMismatchError(f"inverse Abel transform of a {f.domain.value} weight")
        if not f.is_even():
            raise DomainError("inverse Abel transform needs a weight even in every argument")
        if not f.is_symmetric():
            raise DomainError("inverse Abel transform needs a permutation-symmetric weight")
    elif isinstance(f, GridDensity):
        if any(d != Domain.REAL_LINE for d in f.domain):
            raise DomainMismatchError("inverse Abel transform needs a real-line grid")
        scale = max(np.abs(f.values).max(), 1e-300)
        for j, a in enumerate(f.axes):
            if not np.isclose(a.lo, -a.hi) or np.abs(np.flip(f.values, j) - f.values).max() > 1e-8 * scale:
                raise DomainError(f"grid values are not even along axis {j}")
        if f.n > 1 and not f.is_symmetric():
            raise DomainError("inverse Abel transform needs permutation-symmetric grid values")


def _centred(atom):
    if atom.b != 0 or atom.power % 2 or not atom.a > 0:
        raise ConfigurationError("the symbolic inverse Abel transform needs centred atoms x^(2k) e^{-a x^2}")
    return atom.power // 2, atom.a


def _repeat(fn, atoms, times):
    """Applies a one-dimensional atom map repeatedly to a dict atom -> coefficient."""
    for _ in range(times):
        nxt = {}
        for t, c in atoms.items():
            for c2, t2 in fn(t):
                nxt[t2] = nxt.get(t2, 0) + c * c2
        atoms = nxt
    return atoms


def _abel_atom(atom: GaussAtom, nu):
    """A_nu^{-1} of x^(2k) e^{-a x^2} as gamma atoms in one variable."""
    k, a = _centred(atom)
    derived = _repeat(half_line_deriv, {GammaAtom(float(k), a): 1.0}, nu + 1)
    out = []
    for t, c in derived.items():
        q = int(t.power)
        for i in range(q + 1):
            coeff = c * comb(q, i) * gamma(i + 0.5) / a ** (i + 0.5)
            out.append((coeff, GammaAtom(float(q - i + nu), a)))
    return out


# -----------
# COMPOSITION PATH
# -----------
def _composition_1d(fourier_fn, nu, x, tolerance):
    """int_0^inf (x u^2/4)^nu h_nu(x u^2/4) (u/2) F(u) du with F possibly complex."""
    if nu < 0 and x <= 0:
        raise DomainError("A_{-1/2}^{-1} is evaluated at x > 0 only")

    def part(extract):
        def fn(u):
            z = x * u * u / 4
            # (x u^2/4)^nu (u/2), regular at u = 0 for nu = -1/2
            return (x / 4) ** nu * u ** (2 * nu + 1) / 2 * bessel_kernel(z, nu) * extract(fourier_fn(u))
        if x == 0:
            return quad(fn, 0, np.inf, limit=200)[0]
        return bessel_oscillatory_integral(fn, nu, sqrt(x), tolerance)[0]

    value = part(np.real)
    if np.imag(fourier_fn(1.0)) != 0:
        value = value + 1j * part(np.imag)
    return value


def _callable_fourier(f):
    """Cosine transform 2 int_0^inf f(l) cos(u l) dl of an even callable."""
    def F(u):
        if u == 0:
            return 2 * quad(f, 0, np.inf, limit=200)[0]
        return 2 * quad(f, 0, np.inf, weight="cos", wvar=u, limit=200)[0]
    return F


def abel_inverse_composition(f_tilde, nu, x, tolerance=1e-9):
    """
    A_nu^{-1} f(x) = H_nu^{-1}[F f(2 sqrt(s))](x) by oscillatory quadrature.
    Params:
        f_tilde: Even symmetric WeightFunction, or an even callable of one variable
        nu: Integer parameter or +-1/2
        x: Output points (M, n)
    Returns:
        TransformResult
    """
    nu = _check_nu(nu, allow_half=True)
    if isinstance(f_tilde, WeightFunction):
        _check_even_symmetric(f_tilde)
        points, axes = resolve_points(x, f_tilde.n)

        def atom_fn(atom, xs):
            return np.array([_composition_1d(lambda u: complex(fourier_atom(atom, u)), nu, xj, tolerance)
                             for xj in xs])
        values = separable_transform(f_tilde, points, atom_fn)
    elif callable(f_tilde):
        points, axes = resolve_points(x, 1)
        F = _callable_fourier(f_tilde)
        values = np.array([_composition_1d(F, nu, xj, tolerance) for (xj,) in points])
    else:
        raise ConfigurationError(f"cannot Abel-invert {type(f_tilde).__name__}")
    return TransformResult(np.real_if_close(values, tol=1e6).real, points, axes,
                           {"scheme": "composition", "nu": nu})


# -----------
# EXPLICIT PATH
# -----------
def _explicit_symbolic(atom, nu, x):
    k, a = _centred(atom)
    derived = _repeat(half_line_deriv, {GammaAtom(float(k), a): 1.0}, nu + 1)

    def G(y):
        return sum(c * y ** t.power * np.exp(-a * y) for t, c in derived.items())
    return x ** nu * quad(lambda t: 2 * G(x + t * t), 0, np.inf, limit=200)[0]


def _explicit_numeric(g, nu, x, h, tolerance):
    """x^nu int_0^inf 2 (-d/dy)^{nu+1} g(y) |_{y=x+t^2} dt with central differences for the derivative."""
    if x <= 0:
        raise DomainError("the finite-difference explicit path needs x > 0")
    half = (nu + 3) // 2

    def D(y, step):
        step = np.minimum(step, y / (half + 1))
        return (-1) ** (nu + 1) * central_derivative(g, y, nu + 1, step)

    nodes = x + np.array([0.0, 0.5, 1.0, 2.0])
    fine, coarse = D(nodes, h / 2), D(nodes, h)
    noise = float(np.abs(fine - coarse).max() / max(np.abs(fine).max(), 1e-300))
    if noise > tolerance:
        raise AccuracyError(f"insufficient smoothness for {nu + 1} derivatives", achieved=noise, tolerance=tolerance)
    return x ** nu * quad(lambda t: 2 * D(np.array([x + t * t]), h)[0], 0, np.inf, limit=200)[0]


def abel_inverse_explicit(f_tilde, nu, x, tolerance=1e-4, h=1e-3):
    """
    A_nu^{-1} f(x) through the layered integral x^nu int_0^inf 2 (-d/dy)^{nu+1} f(sqrt(y)) |_{y=x+t^2} dt.
    Centred Gaussian atoms are differentiated exactly, other inputs by central differences
    with a step-halving noise check.
    Params:
        f_tilde: Even symmetric WeightFunction, or an even callable of one variable
        nu: Integer parameter
        x: Output points (M, n)
        tolerance: Largest accepted relative finite-difference noise
        h: Finite-difference step in y
    Returns:
        TransformResult
    """
    nu = _check_nu(nu)
    if isinstance(f_tilde, WeightFunction):
        _check_even_symmetric(f_tilde)
        points, axes = resolve_points(x, f_tilde.n)

        def atom_fn(atom, xs):
            if atom.b == 0 and atom.power % 2 == 0:
                return np.array([_explicit_symbolic(atom, nu, xj) for xj in xs])
            g = lambda y: atom.monomial(np.sqrt(y)) * np.exp(atom.log_envelope(np.sqrt(y)))
            return np.array([_explicit_numeric(g, nu, xj, h, tolerance) for xj in xs])
        # odd or shifted atoms only appear in even combinations; the result is real
        values = separable_transform(f_tilde, points, atom_fn).real
    elif callable(f_tilde):
        points, axes = resolve_points(x, 1)
        g = lambda y: f_tilde(np.sqrt(y))
        values = np.array([_explicit_numeric(g, nu, xj, h, tolerance) for (xj,) in points])
    else:
        raise ConfigurationError(f"cannot Abel-invert {type(f_tilde).__name__}")
    return TransformResult(values, points, axes, {"scheme": "explicit", "nu": nu})


# -----------
# SYMBOLIC AND GRID PATHS
# -----------
def _grid_matrix(axis: Axis, x_axis: Axis, nu, eps, u_count):
    """Axiswise map T = K diag(w_u) C from even samples on the lambda axis to A_nu^{-1} values on x nodes."""
    lam = axis.nodes
    u_axis = Axis(0.0, pi / axis.step, u_count)
    u = u_axis.nodes
    C = np.cos(np.outer(u, lam)) * axis.weights()[None, :]
    z = np.outer(x_axis.nodes, u * u / 4)
    K = z ** nu * bessel_kernel(z, nu) * (u / 2)[None, :] * np.exp(-eps * u * u / 4)[None, :]
    return (K * u_axis.weights("simpson")[None, :]) @ C


def _abel_grid(f, nu, x_axes, epsilon, tolerance, u_count):
    x_axes = (x_axes,) * f.n if isinstance(x_axes, Axis) else tuple(x_axes)
    if any(a.lo < 0 for a in x_axes):
        raise DomainError("inverse Abel output axes must lie in the half line")

    def evaluate(eps):
        return apply_axiswise(f.values, [_grid_matrix(a, xa, nu, eps, u_count) for a, xa in zip(f.axes, x_axes)])

    values, meta = regularized_limit(evaluate, epsilon, tolerance)
    meta.update(scheme="grid composition", nu=nu)
    return GridDensity(Domain.HALF_LINE, x_axes, values, tol=None, signed=True, meta=meta)


def abel_inverse(f_tilde, nu, x_axes=None, epsilon=None, tolerance=settings.EPSILON_TOLERANCE, u_count=2049):
    """
    A_nu^{-1} f for integer nu.
    Params:
        f_tilde: Even symmetric WeightFunction of centred Gaussian atoms (exact result) or GridDensity
        nu: Integer parameter
        x_axes: Output axes for grid input
        epsilon: Regulator of the grid path, None for the halving schedule
        u_count: Simpson nodes of the intermediate frequency axis (odd)
    Returns:
        WeightFunction on the half line, or GridDensity for grid input
    """
    nu = _check_nu(nu)
    _check_even_symmetric(f_tilde)
    if isinstance(f_tilde, WeightFunction):
        return f_tilde.map_atoms(lambda atom: _abel_atom(atom, nu), domain=Domain.HALF_LINE)
    if x_axes is None:
        raise ConfigurationError("grid input needs output x axes")
    return _abel_grid(f_tilde, nu, x_axes, epsilon, tolerance, u_count)


def _half_atom(atom, sign):
    k, a = _centred(atom)
    if sign < 0:
        return [(sqrt(pi), GammaAtom(k - 0.5, a))]
    return [(sqrt(pi) * c, t) for c, t in sqrt_deriv(GammaAtom(float(k), a))]


def abel_inverse_half(f_tilde, sign, x_axes=None):
    """
    Closed-form A_{+-1/2}^{-1}:
    sign = -1/2 gives pi^{n/2} f(sqrt(x)) / prod sqrt(x_j);
    sign = +1/2 gives pi^{n/2} prod_j (-sqrt(x_j) d/dx_j) f(sqrt(x)).
    Params:
        f_tilde: Even symmetric WeightFunction (exact), GridDensity (needs x_axes) or callable of one variable
        sign: -1/2 or +1/2
    Returns:
        WeightFunction, GridDensity or callable, following the input
    """
    sign = as_fraction(sign)
    if abs(sign) != as_fraction("1/2"):
        raise ConfigurationError(f"abel_inverse_half needs sign +-1/2, got {sign}")

    if isinstance(f_tilde, WeightFunction):
        _check_even_symmetric(f_tilde)
        return f_tilde.map_atoms(lambda atom: _half_atom(atom, sign), domain=Domain.HALF_LINE)

    if isinstance(f_tilde, GridDensity):
        _check_even_symmetric(f_tilde)
        if x_axes is None:
            raise ConfigurationError("grid input needs output x axes")
        x_axes = (x_axes,) * f_tilde.n if isinstance(x_axes, Axis) else tuple(x_axes)
        x = tensor_mesh(x_axes)
        if np.any(x < 0) or (sign < 0 and np.any(x == 0)):
            raise DomainError("A_{-1/2}^{-1} is evaluated at x > 0 only")
        values = f_tilde.values
        factor = pi ** (f_tilde.n / 2)
        if sign > 0:
            for j, a in enumerate(f_tilde.axes):
                values = np.gradient(values, a.step, axis=j, edge_order=2)
            factor *= (-0.5) ** f_tilde.n
        interp = RegularGridInterpolator([a.nodes for a in f_tilde.axes], values, bounds_error=False, fill_value=0.0)
        out = factor * interp(np.sqrt(x))
        if sign < 0:
            out = out / np.prod(np.sqrt(x), axis=-1)
        return GridDensity(Domain.HALF_LINE, x_axes, out.reshape(tuple(a.count for a in x_axes)),
                           tol=None, signed=True, meta={"scheme": f"closed form, nu={sign}"})

    if callable(f_tilde):
        if sign < 0:
            return lambda x: sqrt(pi) * f_tilde(np.sqrt(x)) / np.sqrt(x)

        def plus(x, h=1e-5):
            lam = np.sqrt(np.asarray(x, dtype=float))
            return -0.5 * sqrt(pi) * central_derivative(f_tilde, lam, 1, h)
        return plus

    raise ConfigurationError(f"cannot Abel-invert {type(f_tilde).__name__}")
