"""Seeded random generators shared across the test modules."""
import numpy as np

from hedgegame import DiagonalStrategy, NoAnswerInstance


def rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_complex(gen, shape) -> np.ndarray:
    return gen.normal(size=shape) + 1j * gen.normal(size=shape)


def random_hermitian(gen, d: int) -> np.ndarray:
    g = random_complex(gen, (d, d))
    return (g + g.conj().T) / 2


def random_unitary(gen, d: int) -> np.ndarray:
    q, r = np.linalg.qr(random_complex(gen, (d, d)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(gen, d: int) -> np.ndarray:
    g = random_complex(gen, (d, d))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_effect(gen, d: int) -> np.ndarray:
    # random 0 <= P <= 1 with a spread spectrum
    u = random_unitary(gen, d)
    return (u * gen.uniform(0.0, 1.0, size=d)) @ u.conj().T


def random_phases(gen, d: int) -> np.ndarray:
    return np.exp(1j * gen.uniform(0.0, 2 * np.pi, size=d))


def random_diag_strategy(gen, n: int) -> DiagonalStrategy:
    return DiagonalStrategy(n=n, phases=random_phases(gen, 2 ** n))


def random_qubit_instance(gen) -> NoAnswerInstance:
    return NoAnswerInstance(rho=random_density(gen, 4), pa=random_effect(gen, 4),
                            dim_x=2, dim_y=2, dim_z=2)
