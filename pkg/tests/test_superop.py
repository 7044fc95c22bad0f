import numpy as np
import pytest

from spinmaps.superop import (
    ChoiMatrix,
    SuperOp,
    choi,
    partial_transpose,
    superop_from_function,
    unvec,
    vec,
)


def test_vec_stacks_columns():
    a = np.array([[1, 2], [3, 4]], dtype=complex)
    assert np.array_equal(vec(a), np.array([1, 3, 2, 4], dtype=complex))
    assert np.array_equal(unvec(vec(a)), a)
    with pytest.raises(ValueError):
        unvec(np.arange(5))


def test_sandwich_map_matrix_convention():
    # a -> X a Y must have matrix Y^T kron X under column stacking
    rng = np.random.default_rng(14)
    x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    y = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    s = superop_from_function(lambda a: x @ a @ y, 3)
    assert np.linalg.norm(s.mat - np.kron(y.T, x)) < 1e-12
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.linalg.norm(s.apply(a) - x @ a @ y) < 1e-12


def test_superop_compose_and_adjoint():
    rng = np.random.default_rng(15)
    x = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    s = superop_from_function(lambda a: x @ a @ x.conj().T, 2)
    assert np.linalg.norm(s.compose(SuperOp.identity(2)).mat - s.mat) < 1e-14
    # adjoint pairing <a, S(b)> = <S^H(a), b> in the trace inner product
    adj = s.adjoint()
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    lhs = np.trace(a.conj().T @ s.apply(b))
    rhs = np.trace(adj.apply(a).conj().T @ b)
    assert lhs == pytest.approx(rhs)
    with pytest.raises(ValueError):
        s.compose(SuperOp.identity(3))


def test_superop_validates_shapes():
    with pytest.raises(ValueError):
        SuperOp(d=2, mat=np.eye(3))
    s = SuperOp.identity(2)
    with pytest.raises(ValueError):
        s.apply(np.eye(3))


def test_superop_from_function_rejects_nonlinear():
    with pytest.raises(ValueError, match="not linear"):
        superop_from_function(lambda a: a @ a, 2)


def test_choi_matches_definitional_sum():
    rng = np.random.default_rng(16)
    d = 3
    k1 = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    k2 = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))

    def chan(a):
        return k1 @ a @ k1.conj().T - 0.4 * k2 @ a @ k2.conj().T

    s = superop_from_function(chan, d)
    got = choi(s).mat
    want = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            want += np.kron(e, chan(e))
    assert np.linalg.norm(got - want) < 1e-12


def test_choi_trace_identity():
    # trace C = trace L(I)
    rng = np.random.default_rng(17)
    x = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    s = superop_from_function(lambda a: x @ a @ x.conj().T, 2)
    c = choi(s)
    assert np.trace(c.mat) == pytest.approx(np.trace(s.apply(np.eye(2))))


def test_choi_of_kraus_map_is_psd():
    rng = np.random.default_rng(18)
    ks = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(3)]
    s = superop_from_function(lambda a: sum(k @ a @ k.conj().T for k in ks), 2)
    w = np.linalg.eigvalsh(choi(s).mat)
    assert w[0] > -1e-12


def test_partial_transpose_properties():
    rng = np.random.default_rng(19)
    d = 3
    m = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
    g = partial_transpose(m, d)
    assert np.allclose(partial_transpose(g, d), m)  # involution
    assert np.linalg.norm(g) == pytest.approx(np.linalg.norm(m))  # isometry
    a = rng.standard_normal((d, d))
    b = rng.standard_normal((d, d))
    assert np.allclose(partial_transpose(np.kron(a, b), d), np.kron(a, b.T))
    with pytest.raises(ValueError):
        partial_transpose(m, 2)


def test_choi_matrix_validates():
    with pytest.raises(ValueError):
        ChoiMatrix(d=2, mat=np.eye(3))
    c = ChoiMatrix(d=2, mat=np.eye(4))
    assert c.herm_deviation() == 0.0
