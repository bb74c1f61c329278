"""Dense complex linear algebra used by every other module.

Conventions, fixed package-wide:

* computational-basis indices are big-endian bitstrings (qubit 0 is the
  leftmost, most significant tensor factor);
* the Choi matrix of a map L(X) -> L(Y) lives on Y (x) X, output block first,
  J = sum_ij Phi(|i><j|) (x) |i><j|, so a trace-preserving map has
  tr_Y(J) = identity on X;
* everything is a dense complex numpy array in double precision.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractViolation

Array = np.ndarray

# Hermiticity is checked entrywise at this absolute tolerance.
HERM_ATOL = 1e-12


def asmatrix(m) -> Array:
    """Coerce to a square 2-d complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ContractViolation(f"expected a matrix, got an array of ndim {a.ndim}")
    return a


def hermitize(m: Array) -> Array:
    """Hermitian part (M + M^dagger) / 2."""
    m = asmatrix(m)
    if m.shape[0] != m.shape[1]:
        raise ContractViolation(f"cannot hermitize a {m.shape} matrix")
    return (m + m.conj().T) / 2


def is_hermitian(m: Array, tol: float = HERM_ATOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def assert_hermitian(m: Array, tol: float = HERM_ATOL, name: str = "matrix") -> None:
    if not is_hermitian(m, tol):
        dev = float(np.max(np.abs(m - np.conj(np.swapaxes(m, -1, -2)))))
        raise ContractViolation(
            f"{name} is not Hermitian within {tol:g} (max deviation {dev:.3e})")


def kron(*ops: Array) -> Array:
    """Tensor product of one or more matrices, leftmost factor most significant."""
    if not ops:
        raise ContractViolation("kron needs at least one factor")
    out = asmatrix(ops[0])
    for op in ops[1:]:
        out = np.kron(out, asmatrix(op))
    return out


def _check_dims(dims: Sequence[int], m: Array, what: str) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d <= 0 for d in dims):
        raise ContractViolation(f"{what}: factor dimensions must be positive, got {dims}")
    total = math.prod(dims)
    if m.shape != (total, total):
        raise ContractViolation(
            f"{what}: matrix shape {m.shape} does not match factor dims {dims}")
    return dims


def partial_trace(m: Array, dims: Sequence[int], traced: int | Iterable[int]) -> Array:
    """Trace out the tensor factors listed in ``traced``.

    ``dims`` gives the dimension of every factor in order; the result acts on
    the remaining factors in their original order.
    """
    m = asmatrix(m)
    dims = _check_dims(dims, m, "partial_trace")
    n = len(dims)
    if isinstance(traced, (int, np.integer)):
        traced = (int(traced),)
    traced_set = sorted({int(t) for t in traced})
    if any(t < 0 or t >= n for t in traced_set):
        raise ContractViolation(f"partial_trace: traced factors {traced_set} out of range")
    keep = [i for i in range(n) if i not in traced_set]
    t = m.reshape(dims + dims)
    row_labels = list(range(n))
    col_labels = [i if i in traced_set else i + n for i in range(n)]
    out_labels = keep + [i + n for i in keep]
    out = np.einsum(t, row_labels + col_labels, out_labels)
    d_keep = math.prod(dims[i] for i in keep)
    return np.asarray(out, dtype=complex).reshape(d_keep, d_keep)


def reorder_factors(m: Array, dims: Sequence[int], perm: Sequence[int]) -> Array:
    """Permute tensor factors of an operator: new factor j is old factor perm[j]."""
    m = asmatrix(m)
    dims = _check_dims(dims, m, "reorder_factors")
    n = len(dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise ContractViolation(f"reorder_factors: {perm} is not a permutation of 0..{n - 1}")
    total = m.shape[0]
    t = m.reshape(dims + dims).transpose(perm + [p + n for p in perm])
    return t.reshape(total, total)


def reorder_vector(v: Array, dims: Sequence[int], perm: Sequence[int]) -> Array:
    """Permute tensor factors of a vector: new factor j is old factor perm[j]."""
    v = np.asarray(v, dtype=complex).ravel()
    dims = tuple(int(d) for d in dims)
    if math.prod(dims) != v.size:
        raise ContractViolation(
            f"reorder_vector: vector of size {v.size} does not match dims {dims}")
    n = len(dims)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise ContractViolation(f"reorder_vector: {perm} is not a permutation of 0..{n - 1}")
    return v.reshape(dims).transpose(perm).ravel()


def herm_eigen(m: Array, tol: float = HERM_ATOL) -> tuple[Array, Array]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (w, V) with real eigenvalues ascending and orthonormal eigenvector
    columns, M = V diag(w) V^dagger. Non-Hermitian input raises.
    """
    m = asmatrix(m)
    assert_hermitian(m, tol, "herm_eigen input")
    w, v = np.linalg.eigh(hermitize(m))
    return w, v


def op_norm(m: Array) -> float:
    """Operator norm (largest singular value)."""
    m = asmatrix(m)
    if m.size == 0:
        return 0.0
    if is_hermitian(m):
        return float(np.max(np.abs(np.linalg.eigvalsh(hermitize(m)))))
    return float(np.linalg.norm(m, 2))


def psd_pinv_sqrt(p: Array, rank_tol: float = 1e-10) -> Array:
    """Square root of the Moore-Penrose pseudo-inverse of a PSD matrix.

    Eigenvalues at or below rank_tol relative to the largest one are treated
    as zero; an eigenvalue more negative than that threshold raises.
    """
    w, v = herm_eigen(p)
    top = float(w[-1]) if w.size else 0.0
    cut = rank_tol * max(top, 1.0)
    if w.size and float(w[0]) < -cut:
        raise ContractViolation(
            f"psd_pinv_sqrt: input has eigenvalue {w[0]:.3e} below -{cut:.1e}")
    inv = np.zeros_like(w)
    mask = w > cut
    inv[mask] = 1.0 / np.sqrt(w[mask])
    return (v * inv) @ v.conj().T


def choi_of_unitary(u: Array, tol: float = 1e-10) -> Array:
    """Choi matrix of conjugation by a unitary, a rank-one projector of trace dim(U)."""
    u = asmatrix(u)
    if u.shape[0] != u.shape[1]:
        raise ContractViolation(f"choi_of_unitary: {u.shape} is not square")
    gram = u.conj().T @ u
    if float(np.max(np.abs(gram - np.eye(u.shape[0])))) > tol:
        raise ContractViolation("choi_of_unitary: input is not unitary within tolerance")
    # row-major flattening of U is exactly sum_i (U|i>) (x) |i>
    vec = u.reshape(-1)
    return np.outer(vec, vec.conj())


def choi_apply(j: Array, dim_out: int, dim_in: int, z: Array) -> Array:
    """Apply a map given by its Choi matrix: Phi(Z) = tr_in[J (1 (x) Z^T)]."""
    j = asmatrix(j)
    dim_out, dim_in = int(dim_out), int(dim_in)
    if j.shape != (dim_out * dim_in, dim_out * dim_in):
        raise ContractViolation(
            f"choi_apply: Choi shape {j.shape} does not match dims ({dim_out},{dim_in})")
    z = asmatrix(z)
    if z.shape != (dim_in, dim_in):
        raise ContractViolation(f"choi_apply: argument shape {z.shape}, expected {dim_in}")
    j4 = j.reshape(dim_out, dim_in, dim_out, dim_in)
    return np.einsum("yazb,ab->yz", j4, z)


def matrix_to_json(m: Array) -> dict:
    """Row-major {rows, cols, re, im} payload; floats round-trip exactly."""
    m = asmatrix(m)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "re": [float(x) for x in m.real.ravel(order="C")],
        "im": [float(x) for x in m.imag.ravel(order="C")],
    }


def matrix_from_json(d: dict) -> Array:
    try:
        rows, cols = int(d["rows"]), int(d["cols"])
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ContractViolation(f"malformed matrix payload: {exc}") from exc
    if rows <= 0 or cols <= 0 or re.shape != (rows * cols,) or im.shape != (rows * cols,):
        raise ContractViolation(
            f"matrix payload of {re.size}+{im.size} entries does not fit {rows}x{cols}")
    return (re + 1j * im).reshape(rows, cols)
