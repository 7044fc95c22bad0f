import numpy as np
import pytest

from spinmaps.chain import ChainConfig
from spinmaps.fermion import build_spin_factor, jw_spin_system, majorana
from spinmaps.projection import build_projection
from spinmaps.superop import superop_from_function, vec


def make_projection(n):
    cfg = ChainConfig(n)
    factor = build_spin_factor(jw_spin_system(cfg))
    return cfg, factor, build_projection(factor)


def haar_state(d, rng):
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_projection_invariants(n):
    cfg, factor, proj = make_projection(n)
    mat = proj.as_superop().mat
    d = cfg.dim
    assert np.linalg.norm(mat @ mat - mat) < 1e-12  # idempotent
    assert np.linalg.norm(mat - mat.conj().T) < 1e-12  # HS self-adjoint
    assert np.linalg.norm(proj.apply(np.eye(d)) - np.eye(d)) < 1e-12  # unital
    ev = vec(np.eye(d))
    assert np.linalg.norm(mat.conj().T @ ev - ev) < 1e-12  # trace preserving


@pytest.mark.parametrize("n", [1, 2])
def test_projection_fixes_basis_and_kills_complement(n):
    cfg, factor, proj = make_projection(n)
    rng = np.random.default_rng(9)
    for e in factor.basis:
        assert np.linalg.norm(proj.apply(e) - e) < 1e-12
    a = rng.standard_normal((cfg.dim, cfg.dim)) + 1j * rng.standard_normal(
        (cfg.dim, cfg.dim)
    )
    complement = a - proj.apply(a)
    assert np.linalg.norm(proj.apply(complement)) < 1e-12


def test_projection_linear():
    cfg, factor, proj = make_projection(2)
    rng = np.random.default_rng(10)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    lhs = proj.apply(2.0 * a - 0.3j * b)
    assert np.linalg.norm(lhs - 2.0 * proj.apply(a) + 0.3j * proj.apply(b)) < 1e-12


def test_projection_matches_function_assembly():
    # two routes to the same superoperator matrix: the closed form
    # (1/d) sum vec(e) vec(e)^H versus evaluation on matrix units
    cfg, factor, proj = make_projection(2)
    direct = proj.as_superop().mat
    assembled = superop_from_function(proj.apply, cfg.dim).mat
    assert np.linalg.norm(direct - assembled) < 1e-12


def test_projection_pure_state_structure():
    # P(psi psi^H) = (I + sum t_j c_j) / d with t_j = <psi|c_j|psi>,
    # whose spectrum is (1 +- ||t||)/d, each with multiplicity d/2
    cfg, factor, proj = make_projection(2)
    d = cfg.dim
    rng = np.random.default_rng(11)
    for _ in range(20):
        psi = haar_state(d, rng)
        rho = np.outer(psi, psi.conj())
        t = np.array(
            [np.real(psi.conj() @ (c @ psi)) for c in factor.basis[1:]]
        )
        want = (np.eye(d) + sum(tj * c for tj, c in zip(t, factor.basis[1:]))) / d
        got = proj.apply(rho)
        assert np.linalg.norm(got - want) < 1e-12
        w = np.linalg.eigvalsh(got)
        r = np.linalg.norm(t)
        assert w[0] == pytest.approx((1 - r) / d, abs=1e-12)
        assert w[-1] == pytest.approx((1 + r) / d, abs=1e-12)
        assert r <= 1.0 + 1e-12


@pytest.mark.parametrize("n", [1, 2, 3])
def test_projection_positive_on_sampled_states(n):
    cfg, factor, proj = make_projection(n)
    d = cfg.dim
    rng = np.random.default_rng(12)
    worst = np.inf
    for _ in range(500):
        psi = haar_state(d, rng)
        w = np.linalg.eigvalsh(proj.apply(np.outer(psi, psi.conj())))
        worst = min(worst, w[0])
    assert worst >= -1e-10


def test_projection_positive_on_mixed_states():
    cfg, factor, proj = make_projection(2)
    rng = np.random.default_rng(13)
    for _ in range(100):
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        w = np.linalg.eigvalsh(proj.apply(rho))
        assert w[0] >= -1e-10


def test_build_projection_rejects_bad_basis():
    # SpinFactor itself does not validate; build_projection must
    from spinmaps.fermion import SpinFactor

    s = majorana(0, ChainConfig(1))
    factor = SpinFactor(basis=(np.eye(2, dtype=complex), s, s))
    with pytest.raises(ValueError, match="orthonormal"):
        build_projection(factor)
