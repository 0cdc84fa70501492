import numpy as np
import pytest

from stablab.pauli import DimensionError, PauliOperator, commutes, pack_bits, product, unpack_bits, weight

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]])
Z = np.diag([1, -1])


def dense(p: PauliOperator) -> np.ndarray:
    """Matrix of p up to phase, built qubit by qubit (qubit 0 leftmost)."""
    out = np.ones((1, 1))
    for x, z in zip(p.x_bits(), p.z_bits()):
        out = np.kron(out, (X if x else I2) @ (Z if z else I2))
    return out


def random_op(rng, n):
    return PauliOperator.from_bits(rng.integers(0, 2, n), rng.integers(0, 2, n))


@pytest.mark.parametrize("seed", range(5))
def test_commutation_matches_matrices(seed):
    rng = np.random.default_rng(seed)
    for _ in range(20):
        a, b = random_op(rng, 4), random_op(rng, 4)
        A, B = dense(a), dense(b)
        assert commutes(a, b) == np.allclose(A @ B, B @ A)


def test_product_matches_matrices_up_to_phase():
    rng = np.random.default_rng(7)
    for _ in range(20):
        a, b = random_op(rng, 3), random_op(rng, 3)
        M, P = dense(a) @ dense(b), dense(a * b)
        k = np.flatnonzero(np.abs(P.ravel()) > 0)[0]
        assert np.allclose(M, P * (M.ravel()[k] / P.ravel()[k]))


def test_support_weight_and_cancellation():
    p = PauliOperator.from_support(130, x=[0, 64, 129, 64], z=[5, 129])
    assert p.x_support().tolist() == [0, 129]
    assert p.support().tolist() == [0, 5, 129]
    assert weight(p) == p.weight == 3
    assert (p * p).is_identity()


def test_hex_round_trip_across_word_boundary():
    rng = np.random.default_rng(1)
    for n in (1, 63, 64, 65, 200):
        p = random_op(rng, n)
        assert PauliOperator.from_hex(p.to_hex()) == p


def test_errors():
    with pytest.raises(IndexError):
        PauliOperator.from_support(4, x=[4])
    with pytest.raises(DimensionError):
        PauliOperator.identity(3) * PauliOperator.identity(4)


def test_pack_unpack_and_product():
    bits = np.array([[1, 0, 1] + [0] * 70, [0] * 72 + [1]], dtype=np.uint8)
    assert np.array_equal(unpack_bits(pack_bits(bits), 73), bits)
    ops = [PauliOperator.from_support(5, x=[i]) for i in range(5)]
    assert product(ops).x_support().tolist() == [0, 1, 2, 3, 4]
