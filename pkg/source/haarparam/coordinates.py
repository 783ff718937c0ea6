import json
import logging
from dataclasses import dataclass
from math import pi

import numpy as np

from source.errors import DataError, DomainError

logger = logging.getLogger(__name__)

ANGLE_TOLERANCE = 1e-12


def _upper(values, n, name):
    arr = np.zeros((n, n)) if values is None else np.array(values, dtype=float)
    if arr.shape != (n, n):
        raise DomainError(f"{name} must be an {n}x{n} array with entries above the diagonal, got {arr.shape}")
    return np.triu(arr, 1)


@dataclass(frozen=True, eq=False)
class UnitaryCoordinates:
    """
    Angles of the recursive U(n) parametrisation V_k = diag(V_{k-1}, 1) Phi_{1,k} ... Phi_{k-1,k}.
    alpha[k] is alpha_{k+1}; phi[j, k] and psi[j, k] (0-based, j < k) are phi_{j+1,k+1} and psi_{j+1,k+1}.
    Ranges: alpha, psi in [-pi, pi], phi in [0, pi/2].
    """
    n: int
    alpha: np.ndarray
    phi: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise DomainError(f"n must be positive, got {self.n}")
        alpha = np.array(self.alpha, dtype=float).ravel()
        if alpha.shape != (n,):
            raise DomainError(f"alpha needs {n} angles, got {alpha.size}")
        phi = _upper(self.phi, n, "phi")
        psi = _upper(self.psi, n, "psi")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "psi", psi)
        self.validate()

    def pairs(self):
        """(j, k) with 0 <= j < k < n."""
        return [(j, k) for k in range(self.n) for j in range(k)]

    def validate(self):
        tol = ANGLE_TOLERANCE
        if np.any(np.abs(self.alpha) > pi + tol):
            raise DomainError("alpha angles must lie in [-pi, pi]")
        for j, k in self.pairs():
            if not -tol <= self.phi[j, k] <= pi / 2 + tol:
                raise DomainError(f"phi[{j + 1},{k + 1}] = {self.phi[j, k]} is outside [0, pi/2]")
            if abs(self.psi[j, k]) > pi + tol:
                raise DomainError(f"psi[{j + 1},{k + 1}] = {self.psi[j, k]} is outside [-pi, pi]")

    @property
    def radii(self):
        """r_l = prod_{j <= l < k} cos phi_{j,k}, l = 1..n-1."""
        c = np.cos(self.phi)
        return np.array([np.prod(c[:l, l:]) for l in range(1, self.n)])

    # -----------
    # SERIALIZATION
    # -----------
    def to_dict(self):
        return {
            "format": "unitary-coordinates/1",
            "n": self.n,
            "alpha": self.alpha.tolist(),
            "phi": [[float(self.phi[j, k]) for j in range(k)] for k in range(self.n)],
            "psi": [[float(self.psi[j, k]) for j in range(k)] for k in range(self.n)],
        }

    @classmethod
    def from_dict(cls, data):
        """Inverse of to_dict: phi and psi are stored column by column above the diagonal."""
        try:
            n = int(data["n"])
            phi = np.zeros((n, n))
            psi = np.zeros((n, n))
            for k in range(n):
                phi[:k, k] = data["phi"][k]
                psi[:k, k] = data["psi"][k]
            return cls(n, np.asarray(data["alpha"], dtype=float), phi, psi)
        except (KeyError, TypeError, ValueError, IndexError) as e:
            raise DataError(f"malformed coordinate record: {e}") from e

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as e:
            raise DataError(f"coordinates are not valid JSON: {e}") from e

    def flat(self):
        """alpha_1..alpha_n, then phi and psi over pairs; the replay columns of the sample output."""
        pairs = self.pairs()
        return np.concatenate([self.alpha, [self.phi[j, k] for j, k in pairs], [self.psi[j, k] for j, k in pairs]])

    @staticmethod
    def flat_header(n):
        pairs = [(j, k) for k in range(n) for j in range(k)]
        return ([f"alpha_{k + 1}" for k in range(n)] + [f"phi_{j + 1}_{k + 1}" for j, k in pairs]
                + [f"psi_{j + 1}_{k + 1}" for j, k in pairs])
