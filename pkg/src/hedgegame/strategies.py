"""Closed-form channel strategies for the repeated game and when they hedge.

With g(alpha) = sqrt(1/alpha^2 - 1), perfect hedging against losing all n
rounds is possible exactly for tan(theta) in [g * (2^(1/n) - 1),
g / (2^(1/n) - 1)]. The two border strategies are diagonal phase unitaries
built from AND/OR/XOR of the input bitstring; in between, a one-parameter
family of diagonal unitaries interpolates, with the parameter fixed by an
affine equation in lam = tan(theta) / g.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linops
from .errors import ContractViolation, OutOfHedgingRange, ParameterError
from .game import _check_alpha, _check_theta

Array = np.ndarray

# slack for theta sitting on a hedging-range endpoint computed in floats
_EDGE_TOL = 1e-12


@dataclass(frozen=True)
class ThetaRange:
    """Closed interval [theta1, theta2] of measurement angles with perfect hedging."""

    theta1: float
    theta2: float


def thresholds(alpha: float, n: int) -> ThetaRange:
    """Hedging-range endpoints; degenerate single point at alpha = 1."""
    alpha = _check_alpha(alpha)
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    g = math.sqrt(1.0 / (alpha * alpha) - 1.0)
    c = 2.0 ** (1.0 / n) - 1.0
    return ThetaRange(theta1=math.atan(g * c), theta2=math.atan(g / c))


@dataclass(frozen=True, eq=False)
class DiagonalStrategy:
    """A diagonal phase unitary on the n sent qubits, indexed by bitstring value."""

    n: int
    phases: Array = field(repr=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        p = np.asarray(self.phases, dtype=complex).ravel()
        if p.size != 2 ** self.n:
            raise ContractViolation(
                f"strategy on {self.n} qubits needs {2 ** self.n} phases, got {p.size}")
        if float(np.max(np.abs(np.abs(p) - 1.0))) > 1e-12:
            raise ContractViolation("strategy phases must have unit modulus")
        p.flags.writeable = False
        object.__setattr__(self, "phases", p)

    def unitary(self) -> Array:
        return np.diag(self.phases)

    def choi(self) -> Array:
        """Choi matrix on (Y_1..Y_n, X_1..X_n), already in the blocked layout."""
        return linops.choi_of_unitary(self.unitary())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "phases_re": [float(x) for x in self.phases.real],
            "phases_im": [float(x) for x in self.phases.imag],
        }

    @classmethod
    def from_json(cls, d: dict) -> "DiagonalStrategy":
        try:
            n = int(d["n"])
            re = np.asarray(d["phases_re"], dtype=float)
            im = np.asarray(d["phases_im"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise ContractViolation(f"malformed strategy payload: {exc}") from exc
        if re.shape != im.shape:
            raise ContractViolation("phases_re and phases_im lengths differ")
        return cls(n=n, phases=re + 1j * im)


def phi_border(n: int, which: int) -> DiagonalStrategy:
    """The two hedging-range border strategies; both are the identity at n = 1.

    which = 1: phase (-1)^(AND(r) + XOR(r)), optimal for theta below the range.
    which = 2: phase (-1)^(OR(r) + XOR(r)), optimal for theta above it.
    """
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    if which not in (1, 2):
        raise ParameterError(f"which must be 1 or 2, got {which}")
    n = int(n)
    phases = np.empty(2 ** n, dtype=complex)
    for r in range(2 ** n):
        parity = bin(r).count("1") & 1
        if which == 1:
            bit = 1 if r == 2 ** n - 1 else 0
        else:
            bit = 1 if r != 0 else 0
        phases[r] = -1.0 if (bit + parity) & 1 else 1.0
    return DiagonalStrategy(n=n, phases=phases)


def losing_amplitude(alpha: float, theta: float, n: int, which: int) -> float:
    """Signed amplitude of losing all n rounds under phi_border(n, which).

    Its square is the lose-everything probability; it vanishes exactly at the
    matching hedging-range endpoint.
    """
    alpha = _check_alpha(alpha)
    theta = _check_theta(theta)
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    if which not in (1, 2):
        raise ParameterError(f"which must be 1 or 2, got {which}")
    root = math.sqrt(1.0 - alpha * alpha)
    base = (alpha * math.sin(theta) + root * math.cos(theta)) ** n
    if which == 1:
        return base - 2.0 * (root * math.cos(theta)) ** n
    return base - 2.0 * (alpha * math.sin(theta)) ** n


def _interp_phases(n: int, lam: float) -> Array:
    """Phases of the interpolating unitary at lam = tan(theta)/g in its valid range."""
    weights = [[] for _ in range(n + 1)]
    for r in range(2 ** n):
        weights[bin(r).count("1")].append(r)

    # leftover sign for odd binomial blocks, and the affine equation for s
    left = -1.0 if lam >= 1.0 else 1.0
    num = 1.0 - lam ** n
    den = 0.0
    for i in range(1, n):
        cnt = math.comb(n, i)
        if cnt & 1:
            num -= left * lam ** (n - i)
        den += 2.0 * (cnt // 2) * lam ** (n - i)

    if den > 0.0:
        s = num / den
        if abs(s) > 1.0 + 1e-9:
            raise ContractViolation(
                f"interpolation parameter s = {s:.6f} escaped [-1, 1]; lam = {lam:.6f}")
        s = min(1.0, max(-1.0, s))
    else:
        s = 1.0  # n = 1: no middle weights, the value is never used
    beta = complex(s, math.sqrt(max(0.0, 1.0 - s * s)))

    phases = np.empty(2 ** n, dtype=complex)
    phases[0] = (-1.0) ** n
    phases[-1] = -1.0
    for i in range(1, n):
        rs = weights[i]  # ascending index = lexicographic on big-endian bitstrings
        half = len(rs) // 2
        sign = (-1.0) ** (n + i)
        for pos, r in enumerate(rs):
            if pos < half:
                k = beta
            elif pos < 2 * half:
                k = beta.conjugate()
            else:
                k = complex(left)
            phases[r] = sign * k
    return phases


def phi_interp(alpha: float, theta: float, n: int) -> DiagonalStrategy:
    """The perfectly hedging diagonal strategy at theta inside the hedging range.

    At the range endpoints it reduces to the border strategies up to a global
    phase of (-1)^n. Outside the range no such strategy exists and this raises.
    """
    alpha = _check_alpha(alpha)
    theta = _check_theta(theta)
    rng = thresholds(alpha, n)
    n = int(n)
    if not rng.theta1 - _EDGE_TOL <= theta <= rng.theta2 + _EDGE_TOL:
        raise OutOfHedgingRange(
            f"theta = {theta:.12g} outside hedging range "
            f"[{rng.theta1:.12g}, {rng.theta2:.12g}] for alpha = {alpha:.12g}, n = {n}")
    if alpha == 1.0:
        # product preparation: every round is won with certainty at theta = 0
        return DiagonalStrategy(n=n, phases=np.ones(2 ** n, dtype=complex))
    g = math.sqrt(1.0 / (alpha * alpha) - 1.0)
    lam = math.tan(theta) / g
    return DiagonalStrategy(n=n, phases=_interp_phases(n, lam))
