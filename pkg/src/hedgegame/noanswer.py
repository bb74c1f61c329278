"""Games where a protocol error (no answer) counts as a loss for Bob.

In this model only the target outcome pays, so Bob's best probability has a
closed form: precondition the target game operator by the pseudo-inverse
square root of E = 1_Y (x) tr_Z(conj(rho)) and take the operator norm,

    p = || (E^+)^(1/2) Q_a (E^+)^(1/2) ||.

Repetitions multiply: winning at least k of n independent rounds is a
binomial tail in p. ``direct_lambda_value`` rebuilds the k-of-n value from
the n-fold operators without using that product structure, as a cross-check.

Registers: rho lives on (X, Z), the target operator Pa on (Y, Z), and the
derived Q_a on (Y, X); all dimensions are arbitrary.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import linops
from .errors import ContractViolation, DegenerateInstance, ParameterError

Array = np.ndarray

@dataclass(frozen=True, eq=False)
class NoAnswerInstance:
    """A single-round no-answer game: shared state rho and target operator Pa."""

    rho: Array
    pa: Array
    dim_x: int
    dim_y: int
    dim_z: int

    def __post_init__(self):
        for name in ("dim_x", "dim_y", "dim_z"):
            d = getattr(self, name)
            if int(d) != d or d < 1:
                raise ParameterError(f"{name} must be a positive integer, got {d}")
            object.__setattr__(self, name, int(d))
        rho = linops.asmatrix(self.rho)
        pa = linops.asmatrix(self.pa)
        dxz = self.dim_x * self.dim_z
        dyz = self.dim_y * self.dim_z
        if rho.shape != (dxz, dxz):
            raise ContractViolation(f"rho shape {rho.shape}, expected {(dxz, dxz)}")
        if pa.shape != (dyz, dyz):
            raise ContractViolation(f"Pa shape {pa.shape}, expected {(dyz, dyz)}")
        linops.assert_hermitian(rho, 1e-10, "rho")
        linops.assert_hermitian(pa, 1e-10, "Pa")
        w_rho = np.linalg.eigvalsh(linops.hermitize(rho))
        if float(w_rho[0]) < -1e-10:
            raise ContractViolation(f"rho has negative eigenvalue {w_rho[0]:.3e}")
        if abs(float(np.real(np.trace(rho))) - 1.0) > 1e-10:
            raise ContractViolation(f"rho has trace {np.trace(rho):.12f}, not 1")
        w_pa = np.linalg.eigvalsh(linops.hermitize(pa))
        if float(w_pa[0]) < -1e-10 or float(w_pa[-1]) > 1.0 + 1e-10:
            raise ContractViolation("Pa must satisfy 0 <= Pa <= 1 within tolerance")
        rho = rho.copy()
        pa = pa.copy()
        rho.flags.writeable = False
        pa.flags.writeable = False
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "pa", pa)

    def to_json(self) -> dict:
        return {
            "rho": linops.matrix_to_json(self.rho),
            "Pa": linops.matrix_to_json(self.pa),
            "dimX": self.dim_x,
            "dimY": self.dim_y,
            "dimZ": self.dim_z,
        }

    @classmethod
    def from_json(cls, d: dict) -> "NoAnswerInstance":
        try:
            return cls(rho=linops.matrix_from_json(d["rho"]),
                       pa=linops.matrix_from_json(d["Pa"]),
                       dim_x=int(d["dimX"]), dim_y=int(d["dimY"]), dim_z=int(d["dimZ"]))
        except (KeyError, TypeError) as exc:
            raise ContractViolation(f"malformed instance payload: {exc}") from exc


def preparation_map_apply(rho: Array, dim_x: int, dim_z: int, gamma: Array) -> Array:
    """Psi_rho(gamma) = tr_Z[conj(rho) (1_X (x) gamma^T)], the map with Choi matrix conj(rho)."""
    return linops.choi_apply(np.conj(linops.asmatrix(rho)), dim_x, dim_z, gamma)


def game_operators(inst: NoAnswerInstance) -> tuple[Array, Array]:
    """(Q_a, E): the target operator pushed through 1_Y (x) Psi_rho, and its total."""
    rb4 = np.conj(inst.rho).reshape(inst.dim_x, inst.dim_z, inst.dim_x, inst.dim_z)
    pa4 = inst.pa.reshape(inst.dim_y, inst.dim_z, inst.dim_y, inst.dim_z)
    # per (y, y') block of Pa, apply Psi_rho to its dZ x dZ matrix
    q4 = np.einsum("xzXZ,yzYZ->yxYX", rb4, pa4)
    dyx = inst.dim_y * inst.dim_x
    q = linops.hermitize(q4.reshape(dyx, dyx))
    e = linops.kron(np.eye(inst.dim_y, dtype=complex),
                    linops.partial_trace(np.conj(inst.rho), (inst.dim_x, inst.dim_z), 1))
    return q, linops.hermitize(e)


def single_value(inst: NoAnswerInstance, rank_tol: float = 1e-10) -> float:
    """Bob's best probability of forcing the target outcome in one round."""
    q, e = game_operators(inst)
    f = linops.psd_pinv_sqrt(e, rank_tol)
    return linops.op_norm(linops.hermitize(f @ q @ f))


def k_of_n_value(inst: NoAnswerInstance, n: int, k: int) -> float:
    """Best probability of hitting the target in at least k of n independent rounds."""
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}")
    if int(k) != k or not 1 <= k <= n:
        raise ParameterError(f"k must lie in 1..n, got {k}")
    n, k = int(n), int(k)
    p = single_value(inst)
    tail = sum(math.comb(n, t) * p ** t * (1.0 - p) ** (n - t) for t in range(k))
    return 1.0 - tail


def direct_lambda_value(inst: NoAnswerInstance, n: int, k: int,
                        rank_tol: float = 1e-10) -> float:
    """k-of-n value from the materialized n-fold operators; no product law assumed.

    Exponential in n, guarded to n <= 3; exists purely to cross-check
    k_of_n_value.
    """
    if int(n) != n or not 1 <= n <= 3:
        raise ParameterError(f"direct evaluation is guarded to n in 1..3, got {n}")
    if int(k) != k or not 1 <= k <= n:
        raise ParameterError(f"k must lie in 1..n, got {k}")
    n, k = int(n), int(k)
    q, e = game_operators(inst)
    qbar = e - q
    f = linops.psd_pinv_sqrt(e, rank_tol)
    fn = linops.kron(*([f] * n)) if n > 1 else f
    mid = linops.kron(*([e] * n)) if n > 1 else e.copy()
    for t in range(k):
        for hits in itertools.combinations(range(n), t):
            ops = [q if i in hits else qbar for i in range(n)]
            mid -= linops.kron(*ops) if n > 1 else ops[0]
    return linops.op_norm(linops.hermitize(fn @ mid @ fn))


def classical_value(inst: NoAnswerInstance, rank_tol: float = 1e-10) -> float:
    """Fast path for diagonal rho and Pa, where everything commutes.

    1 - min over the support of E of diag(Q_other) / diag(E); must agree with
    single_value to near machine precision on diagonal instances.
    """
    for name, m in (("rho", inst.rho), ("Pa", inst.pa)):
        off = m - np.diag(np.diagonal(m))
        if float(np.max(np.abs(off))) > 1e-12:
            raise ContractViolation(
                f"classical_value requires diagonal {name}; use single_value instead")
    q, e = game_operators(inst)
    ed = np.real(np.diagonal(e))
    qd = np.real(np.diagonal(e - q))
    cut = rank_tol * max(float(ed.max()), 1.0)
    mask = ed > cut
    if not mask.any():
        raise DegenerateInstance("E vanishes; the game value is undefined")
    lam = float(np.min(qd[mask] / ed[mask]))
    return 1.0 - lam
