import numpy as np
import pytest

from spinmaps.chain import ChainConfig, jordan_product, pauli
from spinmaps.fermion import (
    SpinSystemError,
    annihilation,
    build_spin_factor,
    creation,
    jw_spin_system,
    majorana,
    reversibility_check,
    sigma_pm,
    verify_spin_system,
)
from spinmaps.linalg import hs_inner, kron


def test_sigma_pm_relations():
    sp, sm = sigma_pm(+1), sigma_pm(-1)
    assert np.linalg.norm(sp @ sp) == 0.0
    assert np.linalg.norm(sm @ sm) == 0.0
    assert np.allclose(sp @ sm + sm @ sp, np.eye(2))
    assert np.allclose(sp @ sm - sm @ sp, -pauli(3))
    assert np.allclose(sp.conj().T, sm)
    with pytest.raises(ValueError):
        sigma_pm(0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_car(n):
    cfg = ChainConfig(n)
    ops = [annihilation(x, cfg) for x in range(n)]
    eye = np.eye(cfg.dim)
    for x, ax in enumerate(ops):
        for y, ay in enumerate(ops):
            assert np.linalg.norm(ax @ ay + ay @ ax) < 1e-12
            want = eye if x == y else 0 * eye
            assert np.linalg.norm(ax @ ay.conj().T + ay.conj().T @ ax - want) < 1e-12
    assert np.allclose(creation(0, cfg), ops[0].conj().T)


def test_majoranas_from_ladder_operators():
    cfg = ChainConfig(3)
    for x in range(3):
        a = annihilation(x, cfg)
        assert np.allclose(majorana(2 * x, cfg), a + a.conj().T)
        assert np.allclose(majorana(2 * x + 1, cfg), 1j * (a - a.conj().T))


def test_majorana_explicit_strings():
    cfg = ChainConfig(2)
    assert np.allclose(majorana(0, cfg), kron(pauli(1), np.eye(2)))
    assert np.allclose(majorana(1, cfg), kron(pauli(2), np.eye(2)))
    # string of sigma_3 on the earlier site
    assert np.allclose(majorana(2, cfg), kron(pauli(3), pauli(1)))
    assert np.allclose(majorana(3, cfg), kron(pauli(3), pauli(2)))
    with pytest.raises(ValueError):
        majorana(4, cfg)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_jw_spin_system_verifies(n):
    cfg = ChainConfig(n)
    system = jw_spin_system(cfg)
    assert len(system) == 2 * n
    eye = np.eye(cfg.dim)
    for s in system.symmetries:
        assert np.linalg.norm(s @ s - eye) < 1e-12


def test_verify_spin_system_rejections():
    with pytest.raises(SpinSystemError, match="empty"):
        verify_spin_system([])
    with pytest.raises(SpinSystemError, match="not Hermitian"):
        verify_spin_system([np.array([[0, 1], [0, 0]], dtype=complex)])
    with pytest.raises(SpinSystemError, match="not an involution"):
        verify_spin_system([0.5 * pauli(1)])
    with pytest.raises(SpinSystemError, match=r"equals \+I"):
        verify_spin_system([np.eye(2, dtype=complex)])
    with pytest.raises(SpinSystemError, match="equals -I"):
        verify_spin_system([-np.eye(2, dtype=complex)])
    # commuting pair is named in the failure
    with pytest.raises(SpinSystemError, match="0,1 do not anticommute"):
        verify_spin_system([kron(pauli(1), pauli(0)), kron(pauli(0), pauli(1))])


def test_spin_factor_orthonormal_and_sized():
    for n in (1, 2, 3):
        cfg = ChainConfig(n)
        factor = build_spin_factor(jw_spin_system(cfg))
        assert len(factor) == 2 * n + 1
        for i, a in enumerate(factor.basis):
            for j, b in enumerate(factor.basis):
                want = 1.0 if i == j else 0.0
                assert abs(hs_inner(a, b) - want) < 1e-12


def test_spin_factor_jordan_closure_formula():
    # (aI + sum a_j c_j) o (bI + sum b_j c_j)
    #   = (ab + a.b) I + sum (a b_j + b a_j) c_j
    cfg = ChainConfig(2)
    factor = build_spin_factor(jw_spin_system(cfg))
    cs = factor.basis[1:]
    rng = np.random.default_rng(8)
    for _ in range(5):
        al, be = rng.standard_normal(2)
        av, bv = rng.standard_normal((2, len(cs)))
        x = al * factor.basis[0] + sum(t * c for t, c in zip(av, cs))
        y = be * factor.basis[0] + sum(t * c for t, c in zip(bv, cs))
        want = (al * be + av @ bv) * factor.basis[0] + sum(
            (al * t2 + be * t1) * c for t1, t2, c in zip(av, bv, cs)
        )
        assert np.linalg.norm(jordan_product(x, y) - want) < 1e-12


def test_build_spin_factor_rejects_non_orthonormal():
    # bypass verification and hand in a repeated generator: the Gram
    # matrix is singular and build_spin_factor must refuse it
    from spinmaps.fermion import SpinSystem

    s = kron(pauli(1), pauli(0))
    fake = SpinSystem(symmetries=(s, s))
    with pytest.raises(SpinSystemError, match="orthonormal"):
        build_spin_factor(fake)


def test_reversibility_small_families():
    # one and two generators never leave the span
    cfg = ChainConfig(1)
    factor = build_spin_factor(jw_spin_system(cfg))
    rep = reversibility_check(factor)
    assert rep.verdict == "reversible"
    assert rep.violating_word == ()
    assert rep.residual_norm < 1e-12


def test_reversibility_pauli_factor():
    # all three Pauli symmetries: sigma_1 sigma_2 sigma_3 = -iI makes every
    # symmetrized word collapse back into the span
    factor = build_spin_factor(verify_spin_system([pauli(1), pauli(2), pauli(3)]))
    rep = reversibility_check(factor)
    assert rep.verdict == "reversible"
    w = pauli(1) @ pauli(2) @ pauli(3) + pauli(3) @ pauli(2) @ pauli(1)
    assert np.linalg.norm(w) == 0.0  # the length-3 word vanishes outright


@pytest.mark.parametrize("n", [2, 3])
def test_reversibility_jw_escapes(n):
    cfg = ChainConfig(n)
    factor = build_spin_factor(jw_spin_system(cfg))
    rep = reversibility_check(factor)
    assert rep.verdict == "non_reversible"
    # first escape: the four distinct generators c_0 c_1 c_2 c_3, whose
    # symmetrized word is orthogonal to the whole basis
    assert rep.violating_word == (1, 2, 3, 4)
    assert rep.residual_norm > 0.9
    assert abs(rep.residual_norm - 1.0) < 1e-12


def test_reversibility_monotone_in_word_length():
    cfg = ChainConfig(2)
    factor = build_spin_factor(jw_spin_system(cfg))
    at4 = reversibility_check(factor, max_word_length=4)
    at5 = reversibility_check(factor, max_word_length=5)
    assert at4.verdict == at5.verdict == "non_reversible"
    assert at4.violating_word == at5.violating_word


def test_reversibility_inconclusive_below_first_escape():
    cfg = ChainConfig(2)
    factor = build_spin_factor(jw_spin_system(cfg))
    rep = reversibility_check(factor, max_word_length=3)
    assert rep.verdict == "inconclusive"
    with pytest.raises(ValueError):
        reversibility_check(factor, max_word_length=1)
