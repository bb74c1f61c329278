"""Interior-point solver for the channel-optimization semidefinite program.

    primal:  minimize <C, X>   over X PSD on Y (x) X with tr_Y(X) = 1
    dual:    maximize tr(Y)    over Hermitian Y with 1 (x) Y <= C

Every feasible X is the Choi matrix of a channel, so the primal value is the
best achievable objective over all channels. Both cones have strictly
feasible points whenever C is bounded, so the two optima coincide.

The solver follows the dual central path: for a decreasing barrier parameter
mu it maximizes tr(Y) + mu logdet(S), S = C - 1 (x) Y, by damped Newton steps
over the real coordinates of Hermitian Y. At the analytic center X = mu S^-1
reproduces the primal marginal exactly and the duality gap equals mu dim(C);
the returned primal point is additionally clipped to the cone and rescaled to
a machine-precision unit marginal, so the reported gap is measured on a
genuinely feasible pair, never assumed. All iterations are deterministic
dense linear algebra, no randomness anywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linops
from .errors import ContractViolation, SolverError

Array = np.ndarray

DEFAULT_GAP_TOL = 1e-7
DEFAULT_FEAS_TOL = 1e-9
DEFAULT_MAX_NEWTON = 200

_MU_SHRINK = 0.2
# scaled-decrement cutoff: stage suboptimality is at most mu * tol^2
_DECREMENT_TOL = 1e-6
_ARMIJO = 0.25


@dataclass(frozen=True)
class SdpSolution:
    """A certified primal/dual pair: value is primal, gap = primal - dual >= 0."""

    value: float
    gap: float
    iterations: int
    dual_y: Array
    primal_x: Optional[Array]

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "gap": self.gap,
            "iterations": self.iterations,
            "dual_Y": linops.matrix_to_json(self.dual_y),
            "primal_X": None if self.primal_x is None else linops.matrix_to_json(self.primal_x),
        }


class _HermCoords:
    """Real coordinates of Hermitian m x m matrices in a fixed orthonormal basis.

    Ordering: m diagonal units, then sqrt(2)-scaled real parts of the strict
    upper triangle (row-major), then the matching imaginary parts.
    """

    def __init__(self, m: int):
        self.m = m
        self.iu = np.triu_indices(m, 1)
        self.dim = m * m

    def pack(self, mat: Array) -> Array:
        s = math.sqrt(2.0)
        return np.concatenate([
            np.real(np.diagonal(mat)),
            s * np.real(mat[self.iu]),
            s * np.imag(mat[self.iu]),
        ])

    def unpack(self, y: Array) -> Array:
        m, iu = self.m, self.iu
        t = (self.dim - m) // 2
        out = np.zeros((m, m), dtype=complex)
        out[iu] = (y[m:m + t] + 1j * y[m + t:]) / math.sqrt(2.0)
        out = out + out.conj().T
        np.fill_diagonal(out, y[:m])
        return out

    def basis_matrix(self) -> Array:
        """Columns are row-major vectorizations of the basis elements."""
        p = np.empty((self.m * self.m, self.dim), dtype=complex)
        for k in range(self.dim):
            e = np.zeros(self.dim)
            e[k] = 1.0
            p[:, k] = self.unpack(e).ravel()
        return p


def _partial_trace_out(m4: Array) -> Array:
    """tr over the first (output) factor of a reshaped (dY, m, dY, m) matrix."""
    return np.einsum("aiaj->ij", m4)


def _logdet_if_pd(mat: Array) -> Optional[float]:
    """log det via Cholesky, or None when the matrix is not positive definite."""
    try:
        chol = np.linalg.cholesky(mat)
    except np.linalg.LinAlgError:
        return None
    return 2.0 * float(np.sum(np.log(np.real(np.diagonal(chol)))))


def _center(c: Array, dim_y: int, y: Array, mu: float, coords: _HermCoords,
            basis: Array, budget: int) -> tuple[Array, Array, Array, int]:
    """Newton with backtracking to the center of tr(Y) + mu logdet(C - 1 (x) Y).

    Returns (Y, S eigenvalues, S eigenvectors, newton steps taken). Y stays
    strictly feasible throughout; running out of budget raises.
    """
    m = coords.m
    eye_y = np.eye(dim_y, dtype=complex)
    steps = 0
    while True:
        s = c - np.kron(eye_y, y)
        w, v = np.linalg.eigh(linops.hermitize(s))
        if float(w[0]) <= 0.0:
            raise SolverError("barrier iterate left the cone; slack lost definiteness")
        sinv = (v * (1.0 / w)) @ v.conj().T
        sinv4 = sinv.reshape(dim_y, m, dim_y, m)
        grad = np.eye(m, dtype=complex) - mu * _partial_trace_out(sinv4)
        g = coords.pack(grad)

        # Hessian of -f in coordinates via the two-sided S^-1 contraction:
        # H(D) = mu * tr_out(S^-1 (1 (x) D) S^-1)
        wten = np.einsum("aibj,bpaq->ijpq", sinv4, sinv4)
        wmat = wten.transpose(0, 3, 1, 2).reshape(m * m, m * m)
        h = mu * np.real(basis.conj().T @ (wmat @ basis))
        h = (h + h.T) / 2
        try:
            d = np.linalg.solve(h, g)
        except np.linalg.LinAlgError:
            jitter = 1e-13 * max(float(np.trace(h)) / coords.dim, 1.0)
            d = np.linalg.solve(h + jitter * np.eye(coords.dim), g)

        slope = float(g @ d)
        # the self-concordant normalization divides f by mu, which leaves the
        # Newton direction alone but rescales the decrement; only this scaled
        # decrement licenses the full step inside the cone
        dec = math.sqrt(max(slope, 0.0) / mu)
        if dec <= _DECREMENT_TOL:
            return y, w, v, steps
        if steps >= budget:
            raise SolverError(
                f"newton budget exhausted while centering (decrement {dec:.2e})")

        step_dir = coords.unpack(d)
        f0 = float(np.real(np.trace(y))) + mu * float(np.sum(np.log(w)))
        trace_dir = float(np.real(np.trace(step_dir)))
        kd = np.kron(eye_y, step_dir)
        # near the center the Armijo increment falls below the resolution of
        # f itself, so in the quadratic regime only definiteness is checked
        f_res = 1e-12 * (1.0 + abs(f0))
        t = 1.0
        while t > 1e-18:
            logdet = _logdet_if_pd(linops.hermitize(s - t * kd))
            if logdet is not None:
                if dec <= _ARMIJO:
                    break
                f_trial = float(np.real(np.trace(y))) + t * trace_dir + mu * logdet
                if f_trial >= f0 + _ARMIJO * t * slope - f_res:
                    break
            t /= 2.0
        else:
            raise SolverError("line search failed to make progress on the barrier")
        y = y + t * step_dir
        steps += 1


def solve_min_channel(c: Array, dim_y: int, dim_x: int, tol: float = DEFAULT_GAP_TOL,
                      feas_tol: float = DEFAULT_FEAS_TOL,
                      max_newton: int = DEFAULT_MAX_NEWTON,
                      want_primal: bool = True) -> SdpSolution:
    """Minimize <C, X> over Choi matrices X of channels X -> Y.

    C must be Hermitian of shape (dim_y*dim_x, dim_y*dim_x). Returns a
    solution whose measured duality gap is at most tol; the dual point is
    strictly feasible and the primal point is PSD within feas_tol with a
    machine-precision unit partial trace over the output block.
    """
    c = linops.asmatrix(c)
    dim_y, dim_x = int(dim_y), int(dim_x)
    if dim_y < 1 or dim_x < 1 or c.shape != (dim_y * dim_x, dim_y * dim_x):
        raise ContractViolation(
            f"objective shape {c.shape} does not match dims ({dim_y}, {dim_x})")
    linops.assert_hermitian(c, 1e-10, "SDP objective")
    c = linops.hermitize(c)
    tol = float(tol)
    if tol <= 0:
        raise ContractViolation(f"tol must be positive, got {tol}")

    m = dim_x
    coords = _HermCoords(m)
    basis = coords.basis_matrix()
    wc = np.linalg.eigvalsh(c)
    y = (float(wc[0]) - 1.0) * np.eye(m, dtype=complex)
    mu = max(1.0, float(wc[-1] - wc[0]))

    total_steps = 0
    last_gap = float("nan")
    eye_y = np.eye(dim_y, dtype=complex)
    while True:
        y, w, v, steps = _center(c, dim_y, y, mu, coords, basis,
                                 budget=max_newton - total_steps)
        total_steps += steps

        sinv = (v * (1.0 / w)) @ v.conj().T
        # primal recovery: clip mu S^-1 to the cone, then restore the unit
        # marginal by a congruence; this keeps PSD exact instead of letting
        # the additive marginal residual (eigh noise of the near-singular
        # slack) eat into the smallest eigenvalue of the recovered point
        xw, xv = np.linalg.eigh(linops.hermitize(mu * sinv))
        x_psd = (xv * np.maximum(xw, 0.0)) @ xv.conj().T
        marg = linops.hermitize(linops.partial_trace(x_psd, (dim_y, m), 0))
        mw, mv = np.linalg.eigh(marg)
        if float(mw[0]) <= 0.0:
            raise SolverError("recovered primal marginal lost rank", gap=last_gap)
        fix = np.kron(eye_y, (mv * (1.0 / np.sqrt(mw))) @ mv.conj().T)
        x_hat = linops.hermitize(fix @ x_psd @ fix)
        primal = float(np.real(np.einsum("ij,ji->", c, x_hat)))
        dual = float(np.real(np.trace(y)))
        gap = primal - dual
        last_gap = gap
        x_min_eig = float(np.linalg.eigvalsh(x_hat)[0])
        marg_err = float(np.max(np.abs(
            linops.partial_trace(x_hat, (dim_y, m), 0) - np.eye(m))))
        # on the central path primal > dual strictly; a visibly negative gap
        # means the corrected primal point is junk, so it never certifies
        if -1e-12 <= gap <= tol and x_min_eig >= -feas_tol and marg_err <= feas_tol:
            return SdpSolution(value=primal, gap=max(gap, 0.0), iterations=total_steps,
                               dual_y=y.copy(),
                               primal_x=x_hat if want_primal else None)
        if total_steps >= max_newton:
            raise SolverError(
                f"no convergence within {max_newton} newton steps (gap {gap:.3e})",
                gap=gap)
        mu *= _MU_SHRINK


def check_dual_feasible(y: Array, c: Array, dim_y: int,
                        tol: float = DEFAULT_FEAS_TOL) -> tuple[bool, float]:
    """Whether 1 (x) Y <= C within tol; also returns min eig of the slack."""
    c = linops.asmatrix(c)
    y = linops.asmatrix(y)
    dim_y = int(dim_y)
    m = y.shape[0]
    if y.shape != (m, m) or c.shape != (dim_y * m, dim_y * m):
        raise ContractViolation(
            f"shape mismatch: Y {y.shape}, C {c.shape}, dim_y {dim_y}")
    linops.assert_hermitian(y, 1e-10, "dual candidate")
    linops.assert_hermitian(c, 1e-10, "SDP objective")
    slack = linops.hermitize(c - np.kron(np.eye(dim_y, dtype=complex), y))
    min_eig = float(np.linalg.eigvalsh(slack)[0])
    return min_eig >= -tol, min_eig


@dataclass(frozen=True)
class CertificateResult:
    """Outcome of the closed-form optimality certificate for a primal point."""

    optimal: bool
    primal_value: float
    dual_value: float
    min_eig: float


def certify_strategy_optimal(choi_x: Array, c: Array, dims: tuple[int, int],
                             tol: float = DEFAULT_FEAS_TOL) -> CertificateResult:
    """Certify a feasible Choi matrix optimal via its induced dual candidate.

    The candidate is the Hermitian part of tr_Y(C X); its trace equals <C, X>
    for Hermitian C and X, so dual feasibility alone pins the optimum to the
    primal value by weak duality. A certificate that fails to be feasible
    proves nothing, and `optimal = False` must be read that way.
    """
    dim_y, dim_x = int(dims[0]), int(dims[1])
    x = linops.asmatrix(choi_x)
    c = linops.asmatrix(c)
    if x.shape != (dim_y * dim_x, dim_y * dim_x) or c.shape != x.shape:
        raise ContractViolation(
            f"shape mismatch: X {x.shape}, C {c.shape}, dims ({dim_y}, {dim_x})")
    linops.assert_hermitian(x, 1e-10, "Choi input")
    linops.assert_hermitian(c, 1e-10, "SDP objective")
    if float(np.linalg.eigvalsh(linops.hermitize(x))[0]) < -1e-9:
        raise ContractViolation("Choi input is not PSD within tolerance")
    marginal = linops.partial_trace(x, (dim_y, dim_x), 0)
    if float(np.max(np.abs(marginal - np.eye(dim_x)))) > 1e-8:
        raise ContractViolation("Choi input is not trace-preserving within 1e-8")

    y_cand = linops.hermitize(linops.partial_trace(c @ x, (dim_y, dim_x), 0))
    feasible, min_eig = check_dual_feasible(y_cand, c, dim_y, tol)
    primal = float(np.real(np.einsum("ij,ji->", c, x)))
    dual = float(np.real(np.trace(y_cand)))
    optimal = bool(feasible and abs(primal - dual) <= max(tol, 1e-12))
    return CertificateResult(optimal=optimal, primal_value=primal,
                             dual_value=dual, min_eig=min_eig)
