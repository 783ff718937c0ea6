import logging
from dataclasses import dataclass
from itertools import permutations

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from source import settings
from source.core.spaces import Domain
from source.errors import AccuracyError, ConfigurationError, DataError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Axis:
    """
    Uniform grid on [lo, hi]. Periodic axes exclude hi (torus grids).
    """
    lo: float
    hi: float
    count: int
    periodic: bool = False

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 1:
            raise ConfigurationError(f"grid axis needs at least one point, got {self.count}")
        if self.count > 1 and not self.hi > self.lo:
            raise ConfigurationError(f"grid axis needs hi > lo, got [{self.lo}, {self.hi}]")

    @classmethod
    def parse(cls, text, periodic=False):
        """Axis from 'lo:hi:count'."""
        try:
            lo, hi, count = text.split(":")
            return cls(float(lo), float(hi), int(count), periodic)
        except ValueError as e:
            raise ConfigurationError(f"grid spec must be lo:hi:count, got {text!r}") from e

    @property
    def step(self):
        if self.periodic:
            return (self.hi - self.lo) / self.count
        return (self.hi - self.lo) / max(self.count - 1, 1)

    @property
    def nodes(self):
        if self.periodic:
            return self.lo + self.step * np.arange(self.count)
        return np.linspace(self.lo, self.hi, self.count)

    def can_halve(self, rule="trapezoid"):
        if self.periodic:
            return self.count % 2 == 0 and self.count >= 4
        if rule == "simpson":
            return (self.count - 1) % 4 == 0 and self.count >= 9
        return (self.count - 1) % 2 == 0 and self.count >= 5

    def weights(self, rule="trapezoid", stride=1):
        """
        Quadrature weights on nodes[::stride].
        Params:
            rule: "trapezoid" or "simpson" (simpson needs an odd node count)
            stride: 1 for the full rule, 2 for the nested coarse rule
        Returns:
            array of weights
        """
        count = len(range(0, self.count, stride))
        h = self.step * stride
        if self.count == 1:
            return np.ones(1)
        if self.periodic:
            return np.full(count, h)
        if rule == "simpson":
            if count % 2 == 0 or count < 3:
                raise ConfigurationError(f"simpson rule needs an odd number of nodes, got {count}")
            w = np.ones(count)
            w[1:-1:2] = 4.0
            w[2:-1:2] = 2.0
            return w * h / 3
        w = np.full(count, h)
        w[0] = w[-1] = h / 2
        return w


def tensor_mesh(axes):
    """Points (N, n) of the tensor grid in C order."""
    grids = np.meshgrid(*[a.nodes for a in axes], indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1)


def tensor_weights(axes, rule="trapezoid", stride=1):
    """Product weights with the grid's shape (nodes taken with the given stride)."""
    out = np.ones(())
    for a in axes:
        out = np.multiply.outer(out, a.weights(rule, stride))
    return out


class GridDensity:
    """
    A function sampled on a rectangular grid with domain metadata.
    Densities are nonnegative and normalised to tol; signed=True relaxes both for derived grids.
    """

    def __init__(self, domain, axes, values, tol=settings.GRID_NORMALIZATION_TOLERANCE,
                 symmetric=False, signed=False, meta=None):
        self.axes = tuple(axes)
        n = len(self.axes)
        if isinstance(domain, (Domain, str)):
            domain = (Domain(domain),) * n
        self.domain = tuple(Domain(d) for d in domain)
        if len(self.domain) != n:
            raise ConfigurationError("one domain entry per axis is required")
        self.values = np.asarray(values)
        shape = tuple(a.count for a in self.axes)
        if self.values.shape != shape:
            raise ConfigurationError(f"values shape {self.values.shape} does not match grid {shape}")
        self.signed = signed
        self.meta = dict(meta or {})

        if not signed:
            if np.iscomplexobj(self.values) or np.any(self.values < -1e-12 * max(np.abs(self.values).max(), 1.0)):
                raise DataError("density values must be nonnegative reals")
        if tol is not None and not signed:
            total = self.integral()
            if abs(total - 1.0) > tol:
                raise AccuracyError("grid density is not normalised", achieved=abs(total - 1.0), tolerance=tol)
        self.symmetric = symmetric
        if symmetric and not self.is_symmetric():
            raise DomainError("grid values are not permutation symmetric")

    @classmethod
    def from_function(cls, fn, domain, axes, **kwargs):
        """Samples a vectorised callable points (N, n) -> values on the tensor grid."""
        axes = tuple(axes)
        values = np.asarray(fn(tensor_mesh(axes))).reshape(tuple(a.count for a in axes))
        return cls(domain, axes, values, **kwargs)

    @property
    def n(self):
        return len(self.axes)

    @property
    def shape(self):
        return self.values.shape

    def mesh(self):
        return tensor_mesh(self.axes)

    def integral(self, stride=1):
        """Trapezoid integral; stride=2 uses every other node (nested coarse rule)."""
        sl = tuple(slice(None, None, stride) for _ in self.axes)
        total = np.sum(self.values[sl] * tensor_weights(self.axes, "trapezoid", stride))
        return complex(total) if np.iscomplexobj(total) else float(total)

    def is_symmetric(self, tol=1e-8):
        if len(set(self.axes)) > 1:
            return False
        scale = max(np.abs(self.values).max(), 1e-300)
        for perm in permutations(range(self.n)):
            if np.abs(np.transpose(self.values, perm) - self.values).max() > tol * scale:
                return False
        return True

    def interpolate(self, points):
        """Linear interpolation at points (M, n); zero outside the grid."""
        interp = RegularGridInterpolator([a.nodes for a in self.axes], self.values,
                                         bounds_error=False, fill_value=0.0)
        return interp(np.atleast_2d(points))

    def __call__(self, points):
        return self.interpolate(points)
