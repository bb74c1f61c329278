"""Operators for the two-round hedging game and its parallel repetitions.

One round: Alice prepares u(alpha) = alpha|00> + sqrt(1-alpha^2)|11> on
registers (X, Z), keeps the qubit Z and sends the qubit X through Bob's
channel, whose output register is the qubit Y. She then measures (Y, Z) with
the projector pair {P0, P1} where P1 = v v*, v = cos(theta)|00> +
sin(theta)|11|>; outcome 1 means Bob wins the round.

Conjugating a measurement operator by 1_Y (x) M with M = diag(alpha,
sqrt(1-alpha^2)) absorbs Alice's state preparation, turning P_a on (Y, Z)
into the game operator Q_a on (Y, X) whose pairing <Q_a, J(Phi)> with the
Choi matrix of Bob's channel is the probability of outcome a.

Multi-round operators are laid out in two blocks, outputs then inputs:
rows/cols index (Y_1 ... Y_n, X_1 ... X_n), round i in slot i of each block.
This is the layout the Choi matrix of an n-qubit channel lives in, so
objectives pair with strategies without any further permutation.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linops
from .errors import ContractViolation, ParameterError

Array = np.ndarray


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise ParameterError(f"alpha must lie in (0, 1], got {alpha}")
    return alpha


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not 0.0 <= theta <= math.pi / 2:
        raise ParameterError(f"theta must lie in [0, pi/2], got {theta}")
    return theta


@dataclass(frozen=True)
class GameSpec:
    """Parameters of an n-fold repeated game: Bob needs at least k wins."""

    alpha: float
    theta: float
    n: int = 1
    k: int = 1

    def __post_init__(self):
        _check_alpha(self.alpha)
        _check_theta(self.theta)
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be a positive integer, got {self.n}")
        if int(self.k) != self.k or not 1 <= self.k <= self.n:
            raise ParameterError(f"k must lie in 1..n, got {self.k}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "k", int(self.k))

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "theta": self.theta, "n": self.n, "k": self.k}

    @classmethod
    def from_json(cls, d: dict) -> "GameSpec":
        try:
            return cls(alpha=float(d["alpha"]), theta=float(d["theta"]),
                       n=int(d.get("n", 1)), k=int(d.get("k", 1)))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParameterError):
                raise
            raise ParameterError(f"malformed game payload: {exc}") from exc


def initial_state(alpha: float) -> Array:
    """Alice's prepared state on (X, Z), a unit vector in C^4."""
    alpha = _check_alpha(alpha)
    u = np.zeros(4, dtype=complex)
    u[0] = alpha
    u[3] = math.sqrt(1.0 - alpha * alpha)
    return u


@dataclass(frozen=True)
class MeasurementPair:
    """Alice's binary projective measurement on (Y, Z); outcome 1 wins."""

    p0: Array
    p1: Array


def measurement(theta: float) -> MeasurementPair:
    theta = _check_theta(theta)
    v = np.zeros(4, dtype=complex)
    v[0] = math.cos(theta)
    v[3] = math.sin(theta)
    p1 = np.outer(v, v.conj())
    p0 = np.eye(4, dtype=complex) - p1
    return MeasurementPair(p0=p0, p1=p1)


def psi_rho_conjugator(alpha: float) -> Array:
    """The 2x2 factor M with Psi_rho(G) = M G M absorbing the preparation."""
    alpha = _check_alpha(alpha)
    return np.diag([alpha, math.sqrt(1.0 - alpha * alpha)]).astype(complex)


@dataclass(frozen=True)
class QOperators:
    """Game operators on (Y, X): q0 loses, q1 wins, e = q0 + q1 = 1 (x) M^2."""

    q0: Array
    q1: Array
    e: Array


def build_q_operators(alpha: float, theta: float) -> QOperators:
    m = linops.kron(np.eye(2, dtype=complex), psi_rho_conjugator(alpha))
    pair = measurement(theta)
    # the (Y, Z) matrix of P_a is reused verbatim on (Y, X); M is real diagonal
    q1 = m @ pair.p1 @ m
    q0 = m @ pair.p0 @ m
    e = linops.kron(np.eye(2, dtype=complex),
                    np.diag([alpha * alpha, 1.0 - alpha * alpha]).astype(complex))
    return QOperators(q0=q0, q1=q1, e=e)


def blocked_perm(n: int) -> list[int]:
    """Interleaved (A_1 B_1 ... A_n B_n) to blocked (A_1..A_n B_1..B_n) factor permutation."""
    return list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))


def tensor_games(ops: Sequence[Array]) -> Array:
    """Tensor two-qubit per-round operators into the blocked multi-round layout."""
    ops = [linops.asmatrix(o) for o in ops]
    if not ops:
        raise ContractViolation("tensor_games needs at least one factor")
    for o in ops:
        if o.shape != (4, 4):
            raise ContractViolation(f"per-round operators are 4x4, got {o.shape}")
    m = linops.kron(*ops)
    n = len(ops)
    if n == 1:
        return m
    return linops.reorder_factors(m, (2,) * (2 * n), blocked_perm(n))


def tensor_state(states: Sequence[Array]) -> Array:
    """Tensor two-qubit per-round vectors into the blocked multi-round layout."""
    vs = [np.asarray(s, dtype=complex).ravel() for s in states]
    if not vs:
        raise ContractViolation("tensor_state needs at least one factor")
    for v in vs:
        if v.size != 4:
            raise ContractViolation(f"per-round states live in C^4, got size {v.size}")
    out = vs[0]
    for v in vs[1:]:
        out = np.kron(out, v)
    n = len(vs)
    if n == 1:
        return out
    return linops.reorder_vector(out, (2,) * (2 * n), blocked_perm(n))


def objective_lose_more_than(q: QOperators, n: int, k: int) -> Array:
    """Operator whose pairing with J(Phi) is Pr[fewer than k wins in n rounds].

    C = sum over t < k, over win-sets S of size t, of the tensor product with
    q1 in the rounds of S and q0 elsewhere, in the blocked layout. k = 1 gives
    q0^(x n); k = n gives e^(x n) - q1^(x n).
    """
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    if int(k) != k or not 1 <= k <= n:
        raise ParameterError(f"k must lie in 1..n, got {k}")
    n, k = int(n), int(k)
    dim = 4 ** n
    c = np.zeros((dim, dim), dtype=complex)
    for t in range(k):
        for wins in itertools.combinations(range(n), t):
            ops = [q.q1 if i in wins else q.q0 for i in range(n)]
            c += tensor_games(ops)
    return linops.hermitize(c)
