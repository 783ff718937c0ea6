from dataclasses import dataclass
from math import comb, pi
from typing import ClassVar

import numpy as np
from scipy.special import factorial2, gamma

from source.core.spaces import Domain
from source.errors import AccuracyError, DomainError


def gaussian_moment(m, mu, var):
    """
    E[X^m] for X ~ N(mu, var); mu may be a complex array.
    """
    mu = np.asarray(mu)
    out = np.zeros(mu.shape, dtype=np.result_type(mu, float))
    for k in range(0, m + 1, 2):
        dfact = factorial2(k - 1) if k > 0 else 1.0
        out = out + comb(m, k) * mu ** (m - k) * var ** (k // 2) * dfact
    return out


@dataclass(frozen=True, order=True)
class GaussAtom:
    """x^power exp(-a x^2 + b x) on the real line; a = 0 marks a polynomial factor."""
    power: int
    a: float
    b: float = 0.0

    domain: ClassVar[Domain] = Domain.REAL_LINE

    def log_envelope(self, x):
        return -self.a * x ** 2 + self.b * x

    def monomial(self, x):
        return x ** self.power

    def times_power(self, e):
        return GaussAtom(self.power + e, self.a, self.b)

    def times(self, other):
        return GaussAtom(self.power + other.power, self.a + other.a, self.b + other.b)

    def integral(self):
        if not self.a > 0:
            raise AccuracyError("Gaussian atom with a <= 0 is not integrable")
        var = 1.0 / (2 * self.a)
        return float(np.sqrt(pi / self.a) * np.exp(self.b ** 2 / (4 * self.a))
                     * gaussian_moment(self.power, self.b / (2 * self.a), var))

    def to_list(self):
        return [self.power, self.a, self.b]


@dataclass(frozen=True, order=True)
class GammaAtom:
    """x^power exp(-a x) on the half line; power may be a half integer."""
    power: float
    a: float

    domain: ClassVar[Domain] = Domain.HALF_LINE

    def log_envelope(self, x):
        return -self.a * x

    def monomial(self, x):
        return x ** self.power

    def times_power(self, e):
        return GammaAtom(self.power + e, self.a)

    def times(self, other):
        return GammaAtom(self.power + other.power, self.a + other.a)

    def integral(self):
        if not self.a > 0:
            raise AccuracyError("gamma atom with a <= 0 is not integrable")
        if not self.power > -1:
            raise DomainError(f"x^{self.power} is not integrable at 0")
        return float(gamma(self.power + 1) / self.a ** (self.power + 1))

    def to_list(self):
        return [self.power, self.a]


@dataclass(frozen=True, order=True)
class TrigAtom:
    """exp(i k theta) on the torus."""
    k: int

    domain: ClassVar[Domain] = Domain.TORUS

    def log_envelope(self, theta):
        return np.zeros_like(theta, dtype=float)

    def monomial(self, theta):
        return np.exp(1j * self.k * theta)

    def times_power(self, e):
        return TrigAtom(self.k + e)

    def times(self, other):
        return TrigAtom(self.k + other.k)

    def integral(self):
        return 2 * pi if self.k == 0 else 0.0

    def to_list(self):
        return [self.k]


ATOM_TYPES = {
    Domain.REAL_LINE: GaussAtom,
    Domain.HALF_LINE: GammaAtom,
    Domain.TORUS: TrigAtom,
}


def atom_from_list(domain, values):
    kind = ATOM_TYPES[Domain(domain)]
    if kind is GaussAtom:
        power, a, *rest = values
        if int(power) != power:
            raise DomainError(f"real-line atoms need integer powers, got {power}")
        return GaussAtom(int(power), float(a), float(rest[0]) if rest else 0.0)
    if kind is GammaAtom:
        power, a = values
        return GammaAtom(float(power), float(a))
    (k,) = values
    return TrigAtom(int(k))


# -----------
# ONE-DIMENSIONAL OPERATORS
# Each maps one atom to a list of (coefficient, atom).
# -----------
def flat_deriv(atom):
    """-d/dx on x^m exp(-a x^2 + b x)."""
    m, a, b = atom.power, atom.a, atom.b
    out = [(2 * a, GaussAtom(m + 1, a, b)), (-b, GaussAtom(m, a, b))]
    if m:
        out.append((-m, GaussAtom(m - 1, a, b)))
    return [(c, t) for c, t in out if c != 0]


def flat_second_deriv(atom):
    """-d^2/dx^2, the one-dimensional operator of the signed-eigenvalue forms."""
    out = []
    for c1, t1 in flat_deriv(atom):
        for c2, t2 in flat_deriv(t1):
            out.append((-c1 * c2, t2))
    return out


def half_line_deriv(atom):
    """-d/dx on x^p exp(-a x)."""
    p, a = atom.power, atom.a
    out = [(a, GammaAtom(p, a))]
    if p:
        out.append((-p, GammaAtom(p - 1, a)))
    return out


def mellin_deriv(atom):
    """-x d/dx on x^p exp(-a x)."""
    p, a = atom.power, atom.a
    out = [(a, GammaAtom(p + 1, a))]
    if p:
        out.append((-p, GammaAtom(p, a)))
    return out


def hankel_deriv(atom, nu):
    """-x^nu d/dx x^(1-nu) d/dx on x^p exp(-a x)."""
    p, a, nu = atom.power, atom.a, float(nu)
    out = [(-p * (p - nu), GammaAtom(p - 1, a)),
           (a * (2 * p + 1 - nu), GammaAtom(p, a)),
           (-a * a, GammaAtom(p + 1, a))]
    return [(c, t) for c, t in out if c != 0]


def sqrt_deriv(atom):
    """-sqrt(x) d/dx on x^p exp(-a x)."""
    p, a = atom.power, atom.a
    out = [(a, GammaAtom(p + 0.5, a))]
    if p:
        out.append((-p, GammaAtom(p - 0.5, a)))
    return out


def torus_deriv(atom):
    """i d/dtheta on exp(i k theta)."""
    return [(-atom.k, atom)] if atom.k else []
