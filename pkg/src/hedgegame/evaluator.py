"""Brute-force evaluation of n-round strategies, independent of the solver.

Two computation paths cross-check every probability:

* state path (diagonal strategies): evolve Alice's prepared state through the
  strategy unitary and project onto each outcome string;
* pairing path (any channel): pair the Choi matrix of the strategy with the
  per-outcome tensor of game operators.

Outcome strings are big-endian: bit i of the index is round i, 1 = Bob wins.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linops
from .errors import ContractViolation, ParameterError
from .game import build_q_operators, initial_state, measurement, tensor_games, tensor_state
from .strategies import DiagonalStrategy

Array = np.ndarray


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Probabilities of all 2^n win/lose patterns of an n-round game."""

    n: int
    probs: Array = field(repr=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        p = np.asarray(self.probs, dtype=float).ravel()
        if p.size != 2 ** self.n:
            raise ContractViolation(
                f"distribution over {self.n} rounds needs {2 ** self.n} entries, got {p.size}")
        if float(p.min()) < -1e-12:
            raise ContractViolation(f"negative outcome probability {p.min():.3e}")
        if abs(float(p.sum()) - 1.0) > 1e-10:
            raise ContractViolation(f"outcome probabilities sum to {p.sum():.12f}, not 1")
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    def to_json(self) -> dict:
        return {"n": self.n, "probs": [float(x) for x in self.probs]}

    @classmethod
    def from_json(cls, d: dict) -> "OutcomeDistribution":
        try:
            return cls(n=int(d["n"]), probs=np.asarray(d["probs"], dtype=float))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, (ContractViolation, ParameterError)):
                raise
            raise ContractViolation(f"malformed distribution payload: {exc}") from exc


def _outcome_ops(a: int, n: int, op0: Array, op1: Array) -> list[Array]:
    return [op1 if (a >> (n - 1 - i)) & 1 else op0 for i in range(n)]


def _distribution_state_path(strategy: DiagonalStrategy, alpha: float, theta: float,
                             n: int) -> Array:
    u = initial_state(alpha)
    psi = tensor_state([u] * n)  # blocked (X_1..X_n, Z_1..Z_n)
    d = 2 ** n
    psi = (strategy.phases[:, None] * psi.reshape(d, d)).ravel()
    pair = measurement(theta)
    probs = np.empty(d, dtype=float)
    for a in range(d):
        m = tensor_games(_outcome_ops(a, n, pair.p0, pair.p1))
        probs[a] = float(np.real(psi.conj() @ (m @ psi)))
    return probs


def _distribution_choi_path(choi: Array, alpha: float, theta: float, n: int) -> Array:
    d = 2 ** n
    choi = linops.asmatrix(choi)
    if choi.shape != (d * d, d * d):
        raise ContractViolation(
            f"Choi matrix for n = {n} must be {d * d}x{d * d}, got {choi.shape}")
    linops.assert_hermitian(choi, 1e-10, "strategy Choi matrix")
    if float(np.linalg.eigvalsh(linops.hermitize(choi))[0]) < -1e-10:
        raise ContractViolation("strategy Choi matrix is not PSD within tolerance")
    marginal = linops.partial_trace(choi, (d, d), 0)
    if float(np.max(np.abs(marginal - np.eye(d)))) > 1e-8:
        raise ContractViolation("strategy Choi matrix is not trace-preserving within 1e-8")
    q = build_q_operators(alpha, theta)
    probs = np.empty(d, dtype=float)
    for a in range(d):
        c = tensor_games(_outcome_ops(a, n, q.q0, q.q1))
        probs[a] = float(np.real(np.einsum("ij,ji->", c, choi)))
    return probs


def outcome_distribution(strategy, alpha: float, theta: float, n: int) -> OutcomeDistribution:
    """Distribution over win/lose patterns for a strategy played in all n rounds.

    ``strategy`` is a DiagonalStrategy (evaluated on the state path) or the
    Choi matrix of an n-qubit channel in the blocked layout (pairing path).
    """
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    n = int(n)
    if isinstance(strategy, DiagonalStrategy):
        if strategy.n != n:
            raise ParameterError(f"strategy acts on {strategy.n} qubits, game has {n} rounds")
        probs = _distribution_state_path(strategy, alpha, theta, n)
    else:
        probs = _distribution_choi_path(strategy, alpha, theta, n)
    return OutcomeDistribution(n=n, probs=probs)


def prob_win_at_least(dist: OutcomeDistribution, k: int) -> float:
    """Probability that at least k of the n rounds are won."""
    if int(k) != k or not 0 <= k <= dist.n:
        raise ParameterError(f"k must lie in 0..{dist.n}, got {k}")
    return float(sum(p for a, p in enumerate(dist.probs) if bin(a).count("1") >= int(k)))


def verify_perfect_hedging(strategy, alpha: float, theta: float, n: int,
                           tol: float = 1e-12) -> bool:
    """True when the strategy loses all n rounds with probability at most tol."""
    dist = outcome_distribution(strategy, alpha, theta, n)
    return float(dist.probs[0]) <= tol
