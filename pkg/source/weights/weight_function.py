import json
import logging
from fractions import Fraction
from itertools import permutations, product
from numbers import Number

import numpy as np

from source import settings
from source.core.spaces import Domain
from source.errors import DataError, DomainError, DomainMismatchError, ResourceError
from source.weights.atoms import ATOM_TYPES, GammaAtom, GaussAtom, TrigAtom, atom_from_list

logger = logging.getLogger(__name__)


def _coefficient(value):
    """Accepts numbers, '1/2'-style strings and [re, im] pairs."""
    if isinstance(value, str):
        return float(Fraction(value))
    if isinstance(value, (list, tuple)):
        re, im = value
        return complex(_coefficient(re), _coefficient(im))
    return value


class WeightFunction:
    """
    Finite sum of separable terms c * prod_j atom_j(x_j) on R^n, R_+^n or the n-torus.
    Instances are immutable; every operation returns a new canonicalised weight.
    """

    __slots__ = ("domain", "n", "_terms", "_symmetric")

    def __init__(self, domain, n, terms=(), cap=settings.TERM_CAP):
        """
        Params:
            domain: Domain of every argument
            n: Number of arguments
            terms: iterable of (coefficient, tuple of atoms) or a dict atoms -> coefficient
            cap: Maximal number of terms before a ResourceError
        """
        self.domain = Domain(domain)
        self.n = int(n)
        atom_type = ATOM_TYPES[self.domain]

        if isinstance(terms, dict):
            terms = [(c, atoms) for atoms, c in terms.items()]
        merged = {}
        for c, atoms in terms:
            atoms = tuple(atoms)
            if len(atoms) != self.n:
                raise DomainMismatchError(f"term with {len(atoms)} atoms in a weight of arity {self.n}")
            if any(type(a) is not atom_type for a in atoms):
                raise DomainMismatchError(f"atoms do not belong to the {self.domain.value} family")
            merged[atoms] = merged.get(atoms, 0) + c
            if len(merged) > cap:
                raise ResourceError(f"weight function exceeds the cap of {cap} terms")

        largest = max((abs(c) for c in merged.values()), default=0.0)
        cutoff = settings.PRUNE_TOLERANCE * largest
        self._terms = tuple(sorted(((atoms, c) for atoms, c in merged.items() if abs(c) > cutoff),
                                   key=lambda t: t[0]))
        self._symmetric = None

    # -----------
    # CONSTRUCTORS
    # -----------
    @classmethod
    def zero(cls, domain, n):
        return cls(domain, n)

    @classmethod
    def gaussian_product(cls, n, variance=1.0, mean=0.0):
        """prod_j N(mean, variance) densities."""
        a = 1.0 / (2 * variance)
        b = mean / variance
        c = (2 * np.pi * variance) ** (-n / 2) * np.exp(-n * mean ** 2 / (2 * variance))
        return cls(Domain.REAL_LINE, n, [(c, (GaussAtom(0, a, b),) * n)])

    @classmethod
    def gamma_product(cls, n, power=0.0, rate=1.0, coeff=1.0):
        """coeff * prod_j x_j^power exp(-rate x_j)."""
        return cls(Domain.HALF_LINE, n, [(coeff, (GammaAtom(float(power), float(rate)),) * n)])

    @classmethod
    def trig_polynomial(cls, n, coefficients):
        """
        Params:
            coefficients: dict k-tuple -> complex coefficient of exp(i k . theta)
        """
        return cls(Domain.TORUS, n, [(c, tuple(TrigAtom(int(k)) for k in ks)) for ks, c in coefficients.items()])

    @classmethod
    def polynomial(cls, domain, n, coefficients):
        """Pure polynomial factor, dict exponent-tuple -> coefficient (envelope-free atoms)."""
        domain = Domain(domain)
        make = {
            Domain.REAL_LINE: lambda e: GaussAtom(int(e), 0.0, 0.0),
            Domain.HALF_LINE: lambda e: GammaAtom(float(e), 0.0),
            Domain.TORUS: lambda e: TrigAtom(int(e)),
        }[domain]
        return cls(domain, n, [(c, tuple(make(e) for e in es)) for es, c in coefficients.items()])

    # -----------
    # ACCESS
    # -----------
    @property
    def terms(self):
        return self._terms

    def __len__(self):
        return len(self._terms)

    def is_zero(self):
        return not self._terms

    @property
    def is_real(self):
        return all(not isinstance(c, complex) or c.imag == 0 for _, c in self._terms)

    def __repr__(self):
        return f"WeightFunction({self.domain.value}, n={self.n}, terms={len(self._terms)})"

    # -----------
    # EVALUATION
    # -----------
    def __call__(self, points):
        """
        Evaluates at points (M, n) or a single point (n,), shifting exponents term-wise to avoid overflow.
        """
        x = np.asarray(points, dtype=float)
        single = x.ndim == 1
        x = np.atleast_2d(x)
        if x.shape[-1] != self.n:
            raise DomainMismatchError(f"points of dimension {x.shape[-1]} for a weight of arity {self.n}")
        if self.domain == Domain.HALF_LINE and np.any(x < 0):
            raise DomainError("half-line weight evaluated at a negative point")

        if not self._terms:
            out = np.zeros(x.shape[0])
            return out[0] if single else out

        log_env = np.empty((len(self._terms), x.shape[0]))
        poly = np.empty((len(self._terms), x.shape[0]), dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            for t, (atoms, c) in enumerate(self._terms):
                e = np.zeros(x.shape[0])
                p = np.full(x.shape[0], c, dtype=complex)
                for j, atom in enumerate(atoms):
                    e = e + atom.log_envelope(x[:, j])
                    p = p * atom.monomial(x[:, j])
                log_env[t] = e
                poly[t] = p
            shift = log_env.max(axis=0)
            shift = np.where(np.isfinite(shift), shift, 0.0)
            out = (poly * np.exp(log_env - shift)).sum(axis=0) * np.exp(shift)

        if self.is_real and self.domain != Domain.TORUS:
            out = out.real
        else:
            out = np.real_if_close(out, tol=1000)
        return out[0] if single else out

    def integrate(self):
        """Exact total mass over the whole domain."""
        total = 0.0
        for atoms, c in self._terms:
            term = c
            for atom in atoms:
                term = term * atom.integral()
            total = total + term
        return total

    # -----------
    # ALGEBRA
    # -----------
    def _check_compatible(self, other):
        if not isinstance(other, WeightFunction):
            raise DomainMismatchError(f"cannot combine a weight with {type(other).__name__}")
        if other.domain != self.domain or other.n != self.n:
            raise DomainMismatchError(
                f"weights on {self.domain.value}^{self.n} and {other.domain.value}^{other.n}"
            )

    def __add__(self, other):
        self._check_compatible(other)
        return WeightFunction(self.domain, self.n,
                              [(c, a) for a, c in self._terms] + [(c, a) for a, c in other._terms])

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        return WeightFunction(self.domain, self.n, [(factor * c, a) for a, c in self._terms])

    def __mul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        self._check_compatible(other)
        out = {}
        for a1, c1 in self._terms:
            for a2, c2 in other._terms:
                key = tuple(x.times(y) for x, y in zip(a1, a2))
                out[key] = out.get(key, 0) + c1 * c2
        return WeightFunction(self.domain, self.n, out)

    __rmul__ = __mul__

    def map_atoms(self, fn, axis=None, domain=None):
        """
        Applies a one-dimensional linear map atom -> [(coefficient, atom), ...] on one axis (or all).
        Params:
            fn: The map
            axis: Axis index, None for every axis
            domain: Domain of the result when the map changes family
        Returns:
            WeightFunction
        """
        axes = range(self.n) if axis is None else [axis]
        cache = {}

        def image(atom):
            if atom not in cache:
                cache[atom] = fn(atom)
            return cache[atom]

        out = {}
        for atoms, c in self._terms:
            choices = [image(a) if j in axes else [(1, a)] for j, a in enumerate(atoms)]
            for combo in product(*choices):
                coeff = c
                for cj, _ in combo:
                    coeff = coeff * cj
                key = tuple(a for _, a in combo)
                out[key] = out.get(key, 0) + coeff
                if len(out) > settings.TERM_CAP:
                    raise ResourceError(f"expansion exceeds the cap of {settings.TERM_CAP} terms")
        return WeightFunction(domain or self.domain, self.n, out)

    def permute(self, perm):
        """w(x_perm[0], ..., x_perm[n-1])."""
        return WeightFunction(self.domain, self.n, [(c, tuple(a[p] for p in perm)) for a, c in self._terms])

    def reflect(self, axis):
        """w with x_axis -> -x_axis (real line only)."""
        if self.domain != Domain.REAL_LINE:
            raise DomainMismatchError("reflection is defined on the real line only")

        def flip(atom):
            return [((-1) ** atom.power, GaussAtom(atom.power, atom.a, -atom.b))]
        return self.map_atoms(flip, axis)

    def equals(self, other, tol=1e-10):
        """Canonical-form equality with relative coefficient tolerance."""
        self._check_compatible(other)
        diff = self - other
        scale = max([abs(c) for _, c in self._terms] + [abs(c) for _, c in other._terms] + [1e-300])
        return all(abs(c) <= tol * scale for _, c in diff._terms)

    def is_symmetric(self, tol=1e-10):
        if self._symmetric is None:
            self._symmetric = all(self.permute(p).equals(self, tol) for p in permutations(range(self.n)))
        return self._symmetric

    @property
    def symmetric(self):
        return self.is_symmetric()

    def is_even(self, tol=1e-10):
        """Even in each argument separately (real line only)."""
        return all(self.reflect(j).equals(self, tol) for j in range(self.n))

    # -----------
    # SERIALIZATION
    # -----------
    def to_dict(self):
        def coeff(c):
            if isinstance(c, complex):
                return [c.real, c.imag]
            return float(c)
        return {
            "format": "weight-function/1",
            "domain": self.domain.value,
            "n": self.n,
            "terms": [{"coeff": coeff(c), "atoms": [a.to_list() for a in atoms]} for atoms, c in self._terms],
        }

    @classmethod
    def from_dict(cls, data):
        try:
            domain = Domain(data["domain"])
            n = int(data["n"])
            terms = [(_coefficient(t["coeff"]), tuple(atom_from_list(domain, a) for a in t["atoms"]))
                     for t in data["terms"]]
        except (KeyError, TypeError, ValueError) as e:
            raise DataError(f"malformed weight function record: {e}") from e
        return cls(domain, n, terms)

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise DataError(f"weight file is not valid JSON: {e}") from e
        return cls.from_dict(data)

    @classmethod
    def load(cls, path):
        with open(path) as f:
            return cls.from_json(f.read())

    def save(self, path):
        with open(path, "w") as f:
            f.write(self.to_json())
