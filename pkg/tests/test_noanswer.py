"""No-answer (protocol error) model: conditional values and their collapse."""
import math

import numpy as np
import pytest

from hedgegame import (NoAnswerInstance, build_q_operators, classical_value,
                       direct_lambda_value, game_operators, initial_state,
                       k_of_n_value, linops, measurement, single_value,
                       solve_min_channel)
from hedgegame.errors import ContractViolation, ParameterError

from helpers import random_density, random_effect, random_qubit_instance, rng

ISQ2 = 1.0 / math.sqrt(2.0)


def coin_instance() -> NoAnswerInstance:
    # verifier keeps a uniformly random bit in Z, sends |0> in X; the target
    # asks the prover's output bit Y to match Z
    rho = np.kron(np.diag([1.0, 0.0]), np.eye(2) / 2).astype(complex)
    pa = np.zeros((4, 4), dtype=complex)
    pa[0, 0] = 1.0
    pa[3, 3] = 1.0
    return NoAnswerInstance(rho=rho, pa=pa, dim_x=2, dim_y=2, dim_z=2)


def theta_instance(alpha: float, theta: float) -> NoAnswerInstance:
    u = initial_state(alpha)
    return NoAnswerInstance(rho=np.outer(u, u.conj()), pa=measurement(theta).p1,
                            dim_x=2, dim_y=2, dim_z=2)


def test_coin_instance_values_exact():
    inst = coin_instance()
    assert single_value(inst) == 0.5
    assert k_of_n_value(inst, 2, 1) == 0.75
    assert classical_value(inst) == 0.5


def test_game_operators_match_direct_construction():
    for alpha, theta in [(0.3, 0.2), (ISQ2, math.pi / 8), (0.95, 1.2)]:
        inst = theta_instance(alpha, theta)
        q, e = game_operators(inst)
        ops = build_q_operators(alpha, theta)
        assert np.allclose(q, ops.q1, atol=1e-14)
        assert np.allclose(e, ops.e, atol=1e-14)


def test_preparation_choi_is_conjugated_state():
    # reassembling the Choi matrix of the preparation map from its action on
    # matrix units returns conj(rho) in the (X, Z) layout
    from hedgegame import psi_rho_conjugator  # noqa: F401  (API presence)
    from hedgegame.noanswer import preparation_map_apply
    gen = rng(50)
    rho = random_density(gen, 6)
    dx, dz = 2, 3
    blocks = np.empty((dx, dx, dz, dz), dtype=complex)
    for a in range(dz):
        for b in range(dz):
            unit = np.zeros((dz, dz), dtype=complex)
            unit[a, b] = 1.0
            out = preparation_map_apply(rho, dx, dz, unit)
            blocks[:, :, a, b] = out
    choi = np.einsum("xXab->xaXb", blocks).reshape(dx * dz, dx * dz)
    assert np.allclose(choi, rho.conj(), atol=1e-12)


def test_full_schmidt_rank_rank_one_target_gives_one():
    # entangled question with full-rank reduction, projective rank-one target:
    # the conditional value is always 1 regardless of alpha
    for alpha in (0.3, ISQ2, 0.95):
        inst = theta_instance(alpha, 0.7)
        assert math.isclose(single_value(inst), 1.0, abs_tol=1e-10)


def test_unentangled_family_no_escape():
    # alpha = 1 leaves nothing for the prover to decline on: value cos^2
    u = initial_state(1.0)
    for theta in (0.0, 0.4, 1.1, math.pi / 2):
        inst = NoAnswerInstance(rho=np.outer(u, u.conj()),
                                pa=measurement(theta).p1,
                                dim_x=2, dim_y=2, dim_z=2)
        assert math.isclose(single_value(inst), math.cos(theta) ** 2,
                            abs_tol=1e-12)


def test_repetition_is_binomial_tail():
    inst = coin_instance()
    p = single_value(inst)
    for n, k in [(3, 1), (3, 2), (4, 4), (5, 3)]:
        want = sum(math.comb(n, j) * p ** j * (1 - p) ** (n - j)
                   for j in range(k, n + 1))
        assert math.isclose(k_of_n_value(inst, n, k), want, rel_tol=1e-14)
    with pytest.raises(ParameterError):
        k_of_n_value(inst, 2, 3)


def test_direct_lambda_matches_product_law():
    gen = rng(51)
    for _ in range(10):
        inst = random_qubit_instance(gen)
        p = single_value(inst)
        got = direct_lambda_value(inst, 2, 1)
        assert math.isclose(got, 1 - (1 - p) ** 2, abs_tol=1e-11)


def test_direct_lambda_three_rounds_two_wins():
    gen = rng(52)
    inst = random_qubit_instance(gen)
    p = single_value(inst)
    want = 3 * p ** 2 * (1 - p) + p ** 3
    assert math.isclose(direct_lambda_value(inst, 3, 2), want, abs_tol=1e-10)


def test_direct_lambda_dimension_guard():
    inst = coin_instance()
    with pytest.raises(ParameterError):
        direct_lambda_value(inst, 4, 1)


def test_purification_invariance():
    # the value only sees E and Q, both of which are blind to how rho is
    # purified on an extra reference register
    gen = rng(53)
    inst = random_qubit_instance(gen)
    w, v = np.linalg.eigh(linops.hermitize(inst.rho))
    psi = np.zeros(2 * 2 * 4, dtype=complex)
    for i in range(4):
        if w[i] > 1e-15:
            vec = v[:, i].reshape(2, 2)
            for x in range(2):
                for z in range(2):
                    psi[x * 8 + z * 4 + i] += math.sqrt(w[i]) * vec[x, z]
    rho_pure = np.outer(psi, psi.conj())
    pa4 = np.asarray(inst.pa).reshape(2, 2, 2, 2)
    pa_ext = np.einsum("yzYZ,wW->yzwYZW", pa4, np.eye(4)).reshape(16, 16)
    lifted = NoAnswerInstance(rho=rho_pure, pa=pa_ext, dim_x=2, dim_y=2, dim_z=8)
    assert math.isclose(single_value(inst), single_value(lifted), abs_tol=1e-12)


def test_classical_matches_quantum_on_diagonal_instances():
    gen = rng(54)
    for _ in range(10):
        rho = np.diag(gen.uniform(0.05, 1.0, size=4)).astype(complex)
        rho /= np.trace(rho).real
        pa = np.diag(gen.uniform(0.0, 1.0, size=4)).astype(complex)
        inst = NoAnswerInstance(rho=rho, pa=pa, dim_x=2, dim_y=2, dim_z=2)
        assert math.isclose(classical_value(inst), single_value(inst),
                            abs_tol=1e-12)


def test_classical_rejects_offdiagonal():
    gen = rng(55)
    inst = random_qubit_instance(gen)
    with pytest.raises(ContractViolation):
        classical_value(inst)


def test_vanishing_target_gives_zero_everywhere():
    rho = np.eye(4, dtype=complex) / 4
    inst = NoAnswerInstance(rho=rho, pa=np.zeros((4, 4), dtype=complex),
                            dim_x=2, dim_y=2, dim_z=2)
    assert single_value(inst) == 0.0
    assert k_of_n_value(inst, 3, 1) == 0.0
    assert direct_lambda_value(inst, 2, 1) == 0.0
    assert classical_value(inst) == 0.0


def test_instance_validation():
    with pytest.raises(ContractViolation):
        NoAnswerInstance(rho=np.eye(3, dtype=complex) / 3,
                         pa=np.eye(4, dtype=complex), dim_x=2, dim_y=2, dim_z=2)
    bad_rho = np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex)
    with pytest.raises(ContractViolation):
        NoAnswerInstance(rho=bad_rho, pa=np.eye(4, dtype=complex),
                         dim_x=2, dim_y=2, dim_z=2)
    big_pa = np.eye(4, dtype=complex) * 1.5
    with pytest.raises(ContractViolation):
        NoAnswerInstance(rho=np.eye(4, dtype=complex) / 4, pa=big_pa,
                         dim_x=2, dim_y=2, dim_z=2)


def test_instance_json_roundtrip():
    inst = coin_instance()
    back = NoAnswerInstance.from_json(inst.to_json())
    assert np.array_equal(back.rho, inst.rho)
    assert np.array_equal(back.pa, inst.pa)
    assert (back.dim_x, back.dim_y, back.dim_z) == (2, 2, 2)


def test_forced_answer_coin_stays_fair():
    # when the prover must answer, the optimal channel still cannot beat a
    # fair coin: min <E - Q, J> over channels equals 1 - max win = 1/2
    inst = coin_instance()
    q, e = game_operators(inst)
    sol = solve_min_channel(e - q, 2, 2)
    assert abs(sol.value - 0.5) < 1e-6
