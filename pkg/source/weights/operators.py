import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import partial
from itertools import permutations

from source import settings
from source.core.spaces import Domain, as_fraction
from source.errors import DomainMismatchError, ResourceError
from source.weights import atoms as A
from source.weights.weight_function import WeightFunction

logger = logging.getLogger(__name__)


class OperatorKind(str, Enum):
    FLAT = "flat"                # -d/dx
    FLAT_SECOND = "flat_second"  # -d^2/dx^2
    HANKEL = "hankel"            # -x^nu d/dx x^(1-nu) d/dx
    MELLIN = "mellin"            # -x d/dx
    TORUS = "torus"              # i d/dtheta
    HALF_LINE = "half_line"      # -d/dx on the half line
    SQRT = "sqrt"                # -sqrt(x) d/dx


OPERATOR_DOMAINS = {
    OperatorKind.FLAT: Domain.REAL_LINE,
    OperatorKind.FLAT_SECOND: Domain.REAL_LINE,
    OperatorKind.HANKEL: Domain.HALF_LINE,
    OperatorKind.MELLIN: Domain.HALF_LINE,
    OperatorKind.TORUS: Domain.TORUS,
    OperatorKind.HALF_LINE: Domain.HALF_LINE,
    OperatorKind.SQRT: Domain.HALF_LINE,
}


def one_dim_map(kind, nu=0):
    """The atom map of a one-dimensional operator."""
    kind = OperatorKind(kind)
    return {
        OperatorKind.FLAT: A.flat_deriv,
        OperatorKind.FLAT_SECOND: A.flat_second_deriv,
        OperatorKind.HANKEL: partial(A.hankel_deriv, nu=float(nu)),
        OperatorKind.MELLIN: A.mellin_deriv,
        OperatorKind.TORUS: A.torus_deriv,
        OperatorKind.HALF_LINE: A.half_line_deriv,
        OperatorKind.SQRT: A.sqrt_deriv,
    }[kind]


@dataclass(frozen=True)
class VandermondeOperator:
    """Delta(D) = prod_{j<k} (D_k - D_j) in the commuting one-dimensional operators D_j."""
    kind: OperatorKind
    n: int
    nu: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "kind", OperatorKind(self.kind))
        object.__setattr__(self, "nu", as_fraction(self.nu))

    @property
    def domain(self):
        return OPERATOR_DOMAINS[self.kind]

    def __call__(self, w):
        return apply_vandermonde(self, w)


def _check_domain(kind, w):
    if not isinstance(w, WeightFunction):
        raise DomainMismatchError(f"operators act on WeightFunction, got {type(w).__name__}")
    if OPERATOR_DOMAINS[OperatorKind(kind)] != w.domain:
        raise DomainMismatchError(f"{OperatorKind(kind).value} operator cannot act on a {w.domain.value} weight")


def apply_one_dim(op_kind, j, w: WeightFunction, nu=0):
    """
    Applies the one-dimensional operator on axis j.
    Params:
        op_kind: OperatorKind
        j: Axis index (0-based)
        w: Weight in the operator's family
        nu: Hankel parameter
    Returns:
        WeightFunction
    """
    _check_domain(op_kind, w)
    return w.map_atoms(one_dim_map(op_kind, nu), axis=j)


def _permutation_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _power_images(fn, atom, max_power, cache):
    """[D^0 atom, D^1 atom, ...] as coefficient dicts, memoised per atom."""
    if atom in cache:
        return cache[atom]
    images = [{atom: 1}]
    for _ in range(max_power):
        nxt = {}
        for t, c in images[-1].items():
            for c2, t2 in fn(t):
                nxt[t2] = nxt.get(t2, 0) + c * c2
        images.append({t: c for t, c in nxt.items() if c != 0})
    cache[atom] = images
    return images


def apply_vandermonde(op: VandermondeOperator, w: WeightFunction, cap=settings.TERM_CAP):
    """
    Expands Delta(D) w = sum_rho sgn(rho) prod_j D_j^{rho(j)} w term by term.
    Params:
        op: Operator with arity w.n
        w: Weight in the operator's family
        cap: Maximal number of atoms in the result
    Returns:
        WeightFunction
    """
    if op.n != w.n:
        raise DomainMismatchError(f"operator of arity {op.n} applied to a weight of arity {w.n}")
    _check_domain(op.kind, w)
    fn = one_dim_map(op.kind, op.nu)
    n = w.n
    cache = {}
    out = {}

    for atoms, c in w.terms:
        images = [_power_images(fn, a, n - 1, cache) for a in atoms]
        for perm in permutations(range(n)):
            partial_terms = {(): c * _permutation_sign(perm)}
            for j in range(n):
                nxt = {}
                for key, coeff in partial_terms.items():
                    for t, c2 in images[j][perm[j]].items():
                        k2 = key + (t,)
                        nxt[k2] = nxt.get(k2, 0) + coeff * c2
                partial_terms = nxt
            for key, coeff in partial_terms.items():
                out[key] = out.get(key, 0) + coeff
            if len(out) > cap:
                raise ResourceError(f"Vandermonde expansion exceeds the cap of {cap} atoms")

    logger.debug("Vandermonde %s on %d terms produced %d terms", op.kind.value, len(w), len(out))
    return WeightFunction(w.domain, n, out, cap=cap)


def multiply_vandermonde(w: WeightFunction, step=1, power=1):
    """
    Multiplies by Delta(x^step)^power (Delta(e^{i theta}) on the torus), exactly.
    """
    out = w
    for _ in range(power):
        terms = {}
        for perm in permutations(range(w.n)):
            sign = _permutation_sign(perm)
            for atoms, c in out.terms:
                key = tuple(a.times_power(step * perm[j]) for j, a in enumerate(atoms))
                terms[key] = terms.get(key, 0) + sign * c
        out = WeightFunction(w.domain, w.n, terms)
    return out
