"""
Exact identity proofs between weight functions with z3.

Both sides are split by exponential envelope; inside one envelope the terms form a (Laurent) polynomial
whose coefficients, divided by a common scale, must be rational. The two sides are identical iff the
solver finds no point where some envelope's polynomials differ.
"""
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from z3 import And, Or, Q, Real, RealVal, Solver, sat, unsat

from source import settings
from source.errors import DomainError, DomainMismatchError
from source.weights.atoms import GammaAtom, GaussAtom
from source.weights.weight_function import WeightFunction

logger = logging.getLogger(__name__)

MAX_DENOMINATOR = 10 ** 9
RATIONAL_TOLERANCE = 1e-10
ENVELOPE_DIGITS = 12


@dataclass
class IdentityProof:
    proven: bool
    status: str
    groups: int = 0
    scale: float = 0.0
    counterexample: Optional[dict] = None
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)


# -----------
# TERM GROUPING
# -----------
def _envelope(atom):
    if isinstance(atom, GaussAtom):
        return round(atom.a, ENVELOPE_DIGITS), round(atom.b, ENVELOPE_DIGITS)
    if isinstance(atom, GammaAtom):
        return (round(atom.a, ENVELOPE_DIGITS),)
    return ()


def _exponent(atom):
    """Exponent of the z3 variable standing for the atom's argument (x, sqrt(x) on the half line, e^{i theta})."""
    if isinstance(atom, GammaAtom):
        doubled = 2 * atom.power
        if abs(doubled - round(doubled)) > 1e-12:
            raise DomainError(f"x^{atom.power} is neither integer nor half integer")
        return int(round(doubled))
    if isinstance(atom, GaussAtom):
        return atom.power
    return atom.k


def _group(w: WeightFunction, side, groups):
    for atoms, c in w.terms:
        envelope = tuple(_envelope(a) for a in atoms)
        exponents = tuple(_exponent(a) for a in atoms)
        slot = groups.setdefault(envelope, {}).setdefault(exponents, [0, 0])
        slot[side] += c


def _rational(value, scale):
    ratio = value / scale
    frac = Fraction(ratio).limit_denominator(MAX_DENOMINATOR)
    if abs(float(frac) - ratio) > RATIONAL_TOLERANCE:
        return None
    return frac


# -----------
# Z3 ENCODING
# -----------
def _monomial(variables, exponents):
    out = RealVal(1)
    for v, e in zip(variables, exponents):
        for _ in range(e):
            out = out * v
    return out


def _polynomials(variables, group, scale):
    """
    (lhs, rhs) z3 polynomials of one envelope, one pair per real and imaginary part.
    Returns None when a coefficient is not a rational multiple of scale.
    """
    shift = [min(e[j] for e in group) for j in range(len(variables))]
    pairs = []
    for part in (lambda c: complex(c).real, lambda c: complex(c).imag):
        sides = [RealVal(0), RealVal(0)]
        for exponents, coeffs in group.items():
            mono = _monomial(variables, [e - s for e, s in zip(exponents, shift)])
            for side in (0, 1):
                frac = _rational(part(coeffs[side]), scale)
                if frac is None:
                    return None
                if frac != 0:
                    sides[side] = sides[side] + Q(frac.numerator, frac.denominator) * mono
        pairs.append(tuple(sides))
    return pairs


def prove_identity(lhs: WeightFunction, rhs: WeightFunction, timeout=settings.Z3_TIMEOUT_MS):
    """
    Decides lhs == rhs as functions.
    Params:
        lhs: WeightFunction
        rhs: WeightFunction on the same domain and arity
        timeout: z3 timeout in milliseconds
    Returns:
        IdentityProof (status "proven", "refuted", "not_rational" or "unknown")
    """
    if lhs.domain != rhs.domain or lhs.n != rhs.n:
        raise DomainMismatchError(f"cannot compare {lhs!r} with {rhs!r}")
    start = time.time()

    groups = {}
    _group(lhs, 0, groups)
    _group(rhs, 1, groups)
    scale = max([abs(c) for _, c in lhs.terms] + [abs(c) for _, c in rhs.terms] + [0.0])
    if scale == 0:
        return IdentityProof(True, "proven", 0, 0.0, elapsed=time.time() - start)

    variables = [Real(f"v{j}") for j in range(lhs.n)]
    solver = Solver()
    solver.set("random_seed", settings.Z3_RANDOM_SEED)
    solver.set("timeout", timeout)

    differences = []
    for envelope, group in groups.items():
        pairs = _polynomials(variables, group, scale)
        if pairs is None:
            logger.warning("coefficients are not rational multiples of %.6g; no exact proof", scale)
            return IdentityProof(False, "not_rational", len(groups), scale, elapsed=time.time() - start)
        differences.extend(l != r for l, r in pairs)

    solver.add(And([v > 0 for v in variables]))
    solver.add(Or(differences))
    result = solver.check()
    elapsed = time.time() - start

    if result == unsat:
        logger.info("identity proven over %d envelopes in %.2fs", len(groups), elapsed)
        return IdentityProof(True, "proven", len(groups), scale, elapsed=elapsed)
    if result == sat:
        model = solver.model()
        witness = {str(v): str(model.eval(v, model_completion=True)) for v in variables}
        logger.info("identity refuted at %s", witness)
        return IdentityProof(False, "refuted", len(groups), scale, witness, elapsed)
    logger.warning("z3 returned unknown after %.2fs", elapsed)
    return IdentityProof(False, "unknown", len(groups), scale, elapsed=elapsed,
                         details={"reason": solver.reason_unknown()})
