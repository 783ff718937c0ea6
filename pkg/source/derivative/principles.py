"""
The derivative principles: spectral densities f = prefactor * Delta(x) * Delta(D) [weight].

Weights given as WeightFunction go through the exact atom algebra; GridDensity weights go through the
finite-difference oracle and come back as signed grids carrying its error estimate.
"""
import logging
from math import factorial, pi

import numpy as np

from source.core.grid import Axis, GridDensity, tensor_mesh
from source.core.spaces import (
    HALF, Domain, MatrixSpace, SpaceKind, as_fraction, hankel_constant, hankel_sign, vandermonde,
)
from source.derivative.cases import WeightPreprocessor, principle_case
from source.errors import ConfigurationError, DomainError, DomainMismatchError
from source.transforms.abel import abel_inverse, abel_inverse_half
from source.weights.atoms import flat_deriv
from source.weights.finite_difference import finite_difference_oracle
from source.weights.operators import OperatorKind, VandermondeOperator, apply_vandermonde, multiply_vandermonde
from source.weights.weight_function import WeightFunction

logger = logging.getLogger(__name__)

NONNEGATIVITY_TOLERANCE = 1e-8


# -----------
# CHECKS
# -----------
def _check_input(w, domain):
    if isinstance(w, WeightFunction):
        if w.domain != domain:
            raise DomainMismatchError(f"expected a {domain.value} weight, got {w.domain.value}")
        if not w.is_symmetric():
            raise DomainError("the weight is not permutation symmetric")
        return
    if isinstance(w, GridDensity):
        if any(d != domain for d in w.domain):
            raise DomainMismatchError(f"expected a {domain.value} grid")
        if w.n > 1 and not w.is_symmetric():
            raise DomainError("the gridded weight is not permutation symmetric")
        return
    raise ConfigurationError(f"unsupported weight type {type(w).__name__}")


def _check_points(domain, n):
    if domain == Domain.REAL_LINE:
        axis = Axis(-5.0, 5.0, 21)
    elif domain == Domain.HALF_LINE:
        axis = Axis(0.05, 10.0, 21)
    else:
        axis = Axis(-pi, pi, 24, periodic=True)
    if n <= 3:
        return tensor_mesh((axis,) * n)
    rng = np.random.default_rng(0)
    return rng.choice(axis.nodes, size=(4000, n))


def check_nonnegative(density, tolerance=NONNEGATIVITY_TOLERANCE):
    """
    Rejects derived densities with negative values (the input was not an admissible weight).
    Symbolic densities are evaluated on a fixed grid, gridded ones on their own nodes with the
    finite-difference error as extra slack.
    Params:
        density: WeightFunction or GridDensity
        tolerance: Allowed negative part relative to the largest value
    Returns:
        The density itself
    """
    if isinstance(density, WeightFunction):
        values = np.real(density(_check_points(density.domain, density.n)))
        slack = 0.0
    else:
        values = np.real(density.values)
        slack = density.meta.get("error", 0.0) or 0.0
    top = float(np.abs(values).max()) if values.size else 0.0
    low = float(values.min()) if values.size else 0.0
    if low < -(tolerance * top + slack):
        raise DomainError(f"derived density takes the negative value {low:.3e}; the weight is not admissible")
    return density


def _finish(values, prefactor, validate):
    out = values.scale(prefactor) if isinstance(values, WeightFunction) else values
    return check_nonnegative(out) if validate else out


# -----------
# GRID PATH
# -----------
def _grid_principle(op, grid, prefactor, nodes_power=1, extra=None):
    derived = finite_difference_oracle(op, grid)
    mesh = tensor_mesh(grid.axes)
    factor = prefactor * vandermonde(mesh ** nodes_power)
    if extra is not None:
        factor = factor * extra(mesh)
    values = np.real_if_close(derived.values * factor.reshape(derived.shape), tol=1e6)
    meta = dict(derived.meta)
    meta["error"] = meta.get("error", 0.0) * float(np.abs(factor).max())
    return GridDensity(grid.domain, grid.axes, values, tol=None, signed=True, meta=meta)


# -----------
# HERM
# -----------
def derivative_principle_herm(f_diag, validate=True):
    """
    Eigenvalue density of an invariant Herm ensemble from its diagonal density.
    Params:
        f_diag: Symmetric WeightFunction on R^n or GridDensity
        validate: Reject outputs with negative values
    Returns:
        WeightFunction or signed GridDensity
    """
    _check_input(f_diag, Domain.REAL_LINE)
    case = principle_case(MatrixSpace(SpaceKind.HERM, f_diag.n))
    if isinstance(f_diag, GridDensity):
        return _finish(_grid_principle(case.operator, f_diag, case.prefactor), 1.0, validate)
    return _finish(multiply_vandermonde(apply_vandermonde(case.operator, f_diag)), case.prefactor, validate)


# -----------
# HANKEL CLASS
# -----------
def _hankel_space(n, nu):
    if nu == -HALF:
        return MatrixSpace(SpaceKind.IO_EVEN, n)
    if nu == HALF:
        return MatrixSpace(SpaceKind.IO_ODD, n)
    return MatrixSpace(SpaceKind.CHIRAL, n, nu)


def derivative_principle_hankel_unified(f_diag, nu, x_axes=None, validate=True):
    """
    Squared-singular-value density of the Hankel class M_nu from the pseudo-diagonal density,
    f = sigma_n / (n! C_nu) Delta(x) Delta(-x^nu d x^{1-nu} d) [A_nu^{-1} f_diag].
    Params:
        f_diag: Even symmetric WeightFunction on R^n (functions of lambda) or GridDensity
        nu: 0, 1, 2, ... or +-1/2
        x_axes: Output axes on the half line for grid input (lo > 0)
    Returns:
        WeightFunction or signed GridDensity
    """
    nu = as_fraction(nu)
    if not (nu.denominator == 1 and nu >= 0) and abs(nu) != HALF:
        raise ConfigurationError(f"nu must be a nonnegative integer or +-1/2, got {nu}")
    _check_input(f_diag, Domain.REAL_LINE)
    case = principle_case(_hankel_space(f_diag.n, nu))

    if isinstance(f_diag, WeightFunction):
        if case.weight_preprocessor == WeightPreprocessor.ABEL_INVERSE:
            pre = abel_inverse(f_diag, nu)
        else:
            pre = abel_inverse_half(f_diag, nu)
        return _finish(multiply_vandermonde(apply_vandermonde(case.operator, pre)), case.prefactor, validate)

    if x_axes is None:
        raise ConfigurationError("grid input needs output x axes")
    x_axes = (x_axes,) * f_diag.n if isinstance(x_axes, Axis) else tuple(x_axes)
    if case.weight_preprocessor == WeightPreprocessor.ABEL_INVERSE:
        pre = abel_inverse(f_diag, nu, x_axes)
    else:
        pre = abel_inverse_half(f_diag, nu, x_axes)
    return _finish(_grid_principle(case.operator, pre, case.prefactor), 1.0, validate)


def derivative_principle_io_even(f_diag, x_axes=None, validate=True):
    """i*o(2n): f(x) = pi^{n/2}/(n! C_{-1/2}) Delta(x) Delta(D) [f_diag(sqrt x)/prod sqrt x]."""
    return derivative_principle_hankel_unified(f_diag, -HALF, x_axes, validate)


def derivative_principle_io_odd(f_diag, x_axes=None, validate=True):
    """i*o(2n+1); at n = 1 this is f(x) = -f_diag'(sqrt x)."""
    return derivative_principle_hankel_unified(f_diag, HALF, x_axes, validate)


def derivative_principle_usp(f_diag, x_axes=None, validate=True):
    """usp(2n) shares the io_odd relation; f_diag is the density of the x_{2l,2l} entries."""
    return derivative_principle_io_odd(f_diag, x_axes, validate)


# -----------
# SIGNED EIGENVALUE FORMS
# -----------
def _eigenvalue_prefactor(n, parity):
    if parity == "even":
        return hankel_sign(n) * pi ** (n / 2) / (2 ** (n * (n - 1)) * factorial(n) * hankel_constant(n, -HALF))
    return hankel_sign(n) * pi ** (n / 2) / (2 ** (n * n) * factorial(n) * hankel_constant(n, HALF))


def _times_coordinates(atom):
    return [(1, atom.times_power(1))]


def eigenvalue_form_io(f_diag, parity, validate=True):
    """
    Density of the signed nonzero eigenvalues lambda of i*o(2n) ("even") or i*o(2n+1) ("odd"),
    equal to f(lambda^2) prod |lambda_j| with f the squared-singular-value density.
    Params:
        f_diag: Even symmetric WeightFunction on R^n or GridDensity
        parity: "even" or "odd"
    Returns:
        WeightFunction or signed GridDensity on R^n
    """
    if parity not in ("even", "odd"):
        raise ConfigurationError(f"parity must be 'even' or 'odd', got {parity!r}")
    _check_input(f_diag, Domain.REAL_LINE)
    n = f_diag.n
    op = VandermondeOperator(OperatorKind.FLAT_SECOND, n)
    pref = _eigenvalue_prefactor(n, parity)

    if isinstance(f_diag, WeightFunction):
        if not f_diag.is_even():
            raise DomainError("f_diag must be even in every argument")
        w = f_diag if parity == "even" else f_diag.map_atoms(flat_deriv)
        out = multiply_vandermonde(apply_vandermonde(op, w), step=2)
        if parity == "odd":
            out = out.map_atoms(_times_coordinates)
        return _finish(out, pref, validate)

    values = f_diag.values
    if parity == "odd":
        for j, a in enumerate(f_diag.axes):
            values = -np.gradient(values, a.step, axis=j, edge_order=2)
    grid = GridDensity(f_diag.domain, f_diag.axes, values, tol=None, signed=True)
    extra = None if parity == "even" else (lambda mesh: np.prod(mesh, axis=-1))
    return _finish(_grid_principle(op, grid, pref, nodes_power=2, extra=extra), 1.0, validate)


# -----------
# HERM+ AND UNITARY
# -----------
def derivative_principle_hermplus(g, validate=True):
    """
    Eigenvalue density of a Herm+ ensemble from its LU weight, f = Delta(x) Delta(-x d) g / prod_{j<=n} j!.
    Params:
        g: Symmetric WeightFunction on R_+^n or GridDensity
    Returns:
        WeightFunction or signed GridDensity
    """
    _check_input(g, Domain.HALF_LINE)
    case = principle_case(MatrixSpace(SpaceKind.HERM_PLUS, g.n))
    if isinstance(g, GridDensity):
        return _finish(_grid_principle(case.operator, g, case.prefactor), 1.0, validate)
    return _finish(multiply_vandermonde(apply_vandermonde(case.operator, g)), case.prefactor, validate)


def _repeated_index_terms(g):
    return [(atoms, c) for atoms, c in g.terms if len({a.k for a in atoms}) < len(atoms)]


def derivative_principle_unitary(g, validate=True):
    """
    Eigenangle density f(e^{i theta}) = Delta(e^{i theta}) Delta(i d_theta) g / prod_{j<=n} j!, computed on
    Fourier coefficients. Coefficients at repeated indices are annihilated by Delta(i d) and only logged.
    Params:
        g: Symmetric trigonometric-polynomial WeightFunction on the torus
    Returns:
        WeightFunction on the torus
    """
    if not isinstance(g, WeightFunction):
        raise ConfigurationError("the unitary principle works on trigonometric-polynomial weights")
    _check_input(g, Domain.TORUS)
    repeated = _repeated_index_terms(g)
    if repeated:
        logger.warning("weight has %d nonzero coefficients at repeated indices; they are annihilated",
                       len(repeated))
    case = principle_case(MatrixSpace(SpaceKind.UNITARY, g.n))
    out = multiply_vandermonde(apply_vandermonde(case.operator, g), step=1)
    return _finish(out, case.prefactor, validate)


# -----------
# DISPATCH
# -----------
def derivative_principle(space: MatrixSpace, weight, x_axes=None, validate=True):
    """
    Applies the derivative principle of a space.
    Params:
        space: Matrix space
        weight: f_diag (Herm, Hankel class), LU weight (Herm+) or torus weight (Unitary)
        x_axes: Output axes for gridded Hankel-class weights
    Returns:
        Spectral density as WeightFunction or GridDensity
    """
    if weight.n != space.n:
        raise DomainMismatchError(f"weight of dimension {weight.n} for {space.label()}")
    domain = weight.domain if isinstance(weight, WeightFunction) else weight.domain[0]
    if domain != space.weight_domain:
        raise DomainMismatchError(f"{space.label()} takes a weight on the {space.weight_domain.value}, got {domain.value}")
    kind = space.kind
    if kind == SpaceKind.HERM:
        return derivative_principle_herm(weight, validate)
    if space.is_hankel:
        return derivative_principle_hankel_unified(weight, space.nu, x_axes, validate)
    if kind == SpaceKind.HERM_PLUS:
        return derivative_principle_hermplus(weight, validate)
    return derivative_principle_unitary(weight, validate)
