import logging

import numpy as np
from scipy.signal import fftconvolve

from source.core.grid import Axis, GridDensity
from source.core.spaces import Domain, MatrixSpace, SpaceKind
from source.derivative.principles import derivative_principle
from source.errors import ConfigurationError, DomainMismatchError
from source.spherical.kernels import gelfand_naimark
from source.transforms.mellin import mellin
from source.weights.atoms import GaussAtom
from source.weights.weight_function import WeightFunction

logger = logging.getLogger(__name__)


# -----------
# ADDITIVE
# -----------
def _gauss_convolve_atoms(p, q):
    """(coefficient, atom) of the convolution of exp(-a1 x^2 + b1 x) with exp(-a2 x^2 + b2 x)."""
    A = p.a + q.a
    a = p.a * q.a / A
    b = (p.a * q.b + q.a * p.b) / A
    c = np.sqrt(np.pi / A) * np.exp((q.b - p.b) ** 2 / (4 * A))
    return c, GaussAtom(0, a, b)


def _is_gaussian_family(w):
    return isinstance(w, WeightFunction) and all(
        a.power == 0 and a.a > 0 for atoms, _ in w.terms for a in atoms)


def _convolve_symbolic(wa, wb):
    out = {}
    for atoms_a, ca in wa.terms:
        for atoms_b, cb in wb.terms:
            coeff = ca * cb
            atoms = []
            for p, q in zip(atoms_a, atoms_b):
                c, atom = _gauss_convolve_atoms(p, q)
                coeff = coeff * c
                atoms.append(atom)
            key = tuple(atoms)
            out[key] = out.get(key, 0) + coeff
    return WeightFunction(Domain.REAL_LINE, wa.n, out)


def _as_values(w, axes):
    if isinstance(w, GridDensity):
        if w.axes != tuple(axes):
            raise ConfigurationError("gridded weights must share the convolution grid")
        return w.values
    return GridDensity.from_function(w, Domain.REAL_LINE, axes, tol=None, signed=True).values


def _convolve_grid(wa, wb, axes):
    if axes is None:
        if isinstance(wa, GridDensity):
            axes = wa.axes
        elif isinstance(wb, GridDensity):
            axes = wb.axes
        else:
            raise ConfigurationError("non-Gaussian weights need a convolution grid")
    axes = (axes,) * wa.n if isinstance(axes, Axis) else tuple(axes)
    if len({a.step for a in axes}) > 1 and wa.n > 1:
        raise ConfigurationError("the convolution grid needs the same step on every axis")
    va, vb = _as_values(wa, axes), _as_values(wb, axes)
    values = fftconvolve(va, vb, mode="full") * np.prod([a.step for a in axes])
    out_axes = tuple(Axis(2 * a.lo, 2 * a.hi, 2 * a.count - 1) for a in axes)
    logger.debug("grid convolution %s * %s -> %s", va.shape, vb.shape, values.shape)
    return GridDensity(Domain.REAL_LINE, out_axes, values, tol=None, signed=True,
                       meta={"scheme": "zero-padded discrete convolution"})


def additive_convolve(fA_diag, fB_diag, space: MatrixSpace, axes=None, x_axes=None, validate=True):
    """
    Spectral density of A + B for independent invariant A, B on Herm or a Hankel-class space: the
    (pseudo-)diagonal densities are convolved, then the space's derivative principle is applied.
    Params:
        fA_diag, fB_diag: Weights on R^n, WeightFunction or GridDensity
        space: Herm or a Hankel-class space
        axes: Grid for non-Gaussian inputs (uniform step)
        x_axes: Output axes of gridded Hankel-class results
    Returns:
        Spectral density, WeightFunction when both inputs are Gaussian mixtures
    """
    if space.kind != SpaceKind.HERM and not space.is_hankel:
        raise ConfigurationError(f"additive convolution is not defined on {space.kind.value}")
    for w in (fA_diag, fB_diag):
        domain = w.domain if isinstance(w, WeightFunction) else w.domain[0]
        if domain != Domain.REAL_LINE:
            raise DomainMismatchError(f"diagonal weights live on the real line, got {domain.value}")
        if w.n != space.n:
            raise DomainMismatchError(f"weight of dimension {w.n} for {space.label()}")

    if _is_gaussian_family(fA_diag) and _is_gaussian_family(fB_diag):
        f_diag = _convolve_symbolic(fA_diag, fB_diag)
    else:
        f_diag = _convolve_grid(fA_diag, fB_diag, axes)
    return derivative_principle(space, f_diag, x_axes, validate)


# -----------
# MULTIPLICATIVE
# -----------
def multiplicative_spherical(gA, gB, s):
    """
    S f_C(s) = M g_A(s - n + 1) M g_B(s - n + 1) for C = A^{1/2} B A^{1/2} on Herm+.
    Params:
        gA, gB: LU weights on R_+^n
        s: Points (M, n)
    Returns:
        complex array (M,)
    """
    if gA.n != gB.n:
        raise DomainMismatchError(f"LU weights of dimensions {gA.n} and {gB.n}")
    shifted = np.atleast_2d(np.asarray(s)) - (gA.n - 1)
    return np.asarray(mellin(gA, shifted).values) * np.asarray(mellin(gB, shifted).values)


def unitary_product_spherical(theta_a, theta_b, s):
    """
    S f_{AB}(s) for A = K diag(e^{i theta_a}) K^dag and B likewise, independently Haar conjugated:
    the product of the two spherical functions.
    """
    return gelfand_naimark(np.exp(1j * np.asarray(theta_a)), s) * gelfand_naimark(np.exp(1j * np.asarray(theta_b)), s)
