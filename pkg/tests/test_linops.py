"""Linear-operator utilities: tensor bookkeeping, spectra, Choi plumbing."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hedgegame import linops
from hedgegame.errors import ContractViolation

from helpers import random_complex, random_hermitian, random_unitary, rng


def test_kron_matches_numpy():
    gen = rng(0)
    a, b, c = (random_complex(gen, (2, 2)) for _ in range(3))
    assert np.allclose(linops.kron(a, b, c), np.kron(np.kron(a, b), c))


def test_kron_single_factor_is_identity_map():
    gen = rng(1)
    a = random_complex(gen, (3, 3))
    assert np.array_equal(linops.kron(a), a)


def test_partial_trace_traces_out_left_factor():
    gen = rng(2)
    a = random_complex(gen, (2, 2))
    b = random_complex(gen, (3, 3))
    m = np.kron(a, b)
    assert np.allclose(linops.partial_trace(m, (2, 3), 0), np.trace(a) * b)
    assert np.allclose(linops.partial_trace(m, (2, 3), 1), np.trace(b) * a)


def test_partial_trace_three_factors():
    gen = rng(3)
    a, b, c = (random_complex(gen, (2, 2)) for _ in range(3))
    m = np.kron(np.kron(a, b), c)
    got = linops.partial_trace(m, (2, 2, 2), 1)
    assert np.allclose(got, np.trace(b) * np.kron(a, c))


def test_partial_trace_multiple_factors_at_once():
    gen = rng(14)
    a, b, c = (random_complex(gen, (2, 2)) for _ in range(3))
    m = np.kron(np.kron(a, b), c)
    got = linops.partial_trace(m, (2, 2, 2), {0, 2})
    assert np.allclose(got, np.trace(a) * np.trace(c) * b)
    with pytest.raises(ContractViolation):
        linops.partial_trace(m, (2, 2, 2), (0, 3))


@given(st.integers(min_value=0, max_value=10_000))
def test_partial_trace_preserves_trace(seed):
    gen = rng(seed)
    m = random_complex(gen, (6, 6))
    reduced = linops.partial_trace(m, (2, 3), 0)
    assert np.isclose(np.trace(reduced), np.trace(m))


def test_reorder_factors_swaps_kron_order():
    gen = rng(4)
    a = random_complex(gen, (2, 2))
    b = random_complex(gen, (3, 3))
    swapped = linops.reorder_factors(np.kron(a, b), (2, 3), (1, 0))
    assert np.allclose(swapped, np.kron(b, a))


def test_reorder_factors_cycle():
    gen = rng(5)
    ops = [random_complex(gen, (2, 2)) for _ in range(3)]
    m = np.kron(np.kron(ops[0], ops[1]), ops[2])
    # new factor j is old factor perm[j]
    got = linops.reorder_factors(m, (2, 2, 2), (2, 0, 1))
    want = np.kron(np.kron(ops[2], ops[0]), ops[1])
    assert np.allclose(got, want)


def test_reorder_vector_consistent_with_matrix_reorder():
    gen = rng(6)
    vecs = [random_complex(gen, 2) for _ in range(3)]
    v = np.kron(np.kron(vecs[0], vecs[1]), vecs[2])
    got = linops.reorder_vector(v, (2, 2, 2), (1, 2, 0))
    want = np.kron(np.kron(vecs[1], vecs[2]), vecs[0])
    assert np.allclose(got, want)


def test_hermitize_and_is_hermitian():
    gen = rng(7)
    m = random_complex(gen, (4, 4))
    h = linops.hermitize(m)
    assert linops.is_hermitian(h)
    assert not linops.is_hermitian(m)
    with pytest.raises(ContractViolation):
        linops.assert_hermitian(m, 1e-12, "m")


def test_herm_eigen_ascending_and_reconstructs():
    gen = rng(8)
    h = random_hermitian(gen, 5)
    w, v = linops.herm_eigen(h)
    assert np.all(np.diff(w) >= 0)
    assert np.allclose((v * w) @ v.conj().T, h)


def test_op_norm_hermitian_vs_generic():
    gen = rng(9)
    h = random_hermitian(gen, 4)
    assert np.isclose(linops.op_norm(h), np.linalg.norm(h, 2))
    g = random_complex(gen, (4, 4))
    assert np.isclose(linops.op_norm(g), np.linalg.norm(g, 2))


def test_psd_pinv_sqrt_inverts_on_support():
    # rank-2 projector-weighted operator with an exact kernel
    gen = rng(10)
    u = random_unitary(gen, 3)
    p = (u * np.array([2.0, 0.5, 0.0])) @ u.conj().T
    r = linops.psd_pinv_sqrt(p)
    support = (u * np.array([1.0, 1.0, 0.0])) @ u.conj().T
    assert np.allclose(r @ p @ r, support, atol=1e-12)
    # kernel stays kernel
    assert np.allclose(r @ u[:, 2], 0.0, atol=1e-12)


def test_psd_pinv_sqrt_rejects_negative_input():
    with pytest.raises(ContractViolation):
        linops.psd_pinv_sqrt(np.diag([1.0, -0.5]))


def test_psd_pinv_sqrt_identity():
    assert np.allclose(linops.psd_pinv_sqrt(np.eye(3)), np.eye(3))


def test_choi_of_unitary_identity():
    # J(id) on qubits is the unnormalized maximally entangled projector
    j = linops.choi_of_unitary(np.eye(2, dtype=complex))
    vec = np.array([1, 0, 0, 1], dtype=complex)
    assert np.allclose(j, np.outer(vec, vec))


def test_choi_of_unitary_rejects_nonunitary():
    with pytest.raises(ContractViolation):
        linops.choi_of_unitary(np.diag([1.0, 2.0]))


def test_choi_apply_reproduces_conjugation():
    gen = rng(11)
    u = random_unitary(gen, 3)
    j = linops.choi_of_unitary(u)
    z = random_complex(gen, (3, 3))
    assert np.allclose(linops.choi_apply(j, 3, 3, z), u @ z @ u.conj().T)


def test_choi_pairing_gives_trace_rule():
    # tr[J(U) (A (x) B^T)] = tr[A U B U*] for the (out, in) grouping
    gen = rng(12)
    u = random_unitary(gen, 2)
    a = random_hermitian(gen, 2)
    b = random_hermitian(gen, 2)
    j = linops.choi_of_unitary(u)
    lhs = np.trace(j @ np.kron(a, b.T))
    rhs = np.trace(a @ u @ b @ u.conj().T)
    assert np.isclose(lhs, rhs)


def test_matrix_json_roundtrip():
    gen = rng(13)
    m = random_complex(gen, (3, 5))
    d = linops.matrix_to_json(m)
    assert d["rows"] == 3 and d["cols"] == 5
    back = linops.matrix_from_json(d)
    assert np.array_equal(back, m)


def test_matrix_from_json_rejects_bad_length():
    with pytest.raises(ContractViolation):
        linops.matrix_from_json({"rows": 2, "cols": 2, "re": [1.0], "im": [0.0]})


@settings(max_examples=25)
@given(st.integers(min_value=0, max_value=10_000))
def test_kron_partial_trace_roundtrip_property(seed):
    gen = rng(seed)
    a = random_hermitian(gen, 2)
    b = random_hermitian(gen, 2)
    b = b / np.trace(b) if abs(np.trace(b)) > 1e-6 else b + np.eye(2)
    m = linops.kron(a, b)
    assert np.allclose(linops.partial_trace(m, (2, 2), 1), np.trace(b) * a)
