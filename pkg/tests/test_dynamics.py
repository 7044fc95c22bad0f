import math

import numpy as np
import pytest

from spinmaps.chain import ChainConfig, Region, pauli
from spinmaps.dynamics import (
    DynamicsMap,
    Potential,
    evolve_map,
    hamiltonian,
    norm1,
    norm_exp,
    reduced_map,
    standard_potential,
)
from spinmaps.fermion import build_spin_factor, jw_spin_system
from spinmaps.linalg import expm_herm, kron
from spinmaps.projection import build_projection


def test_standard_potential_ising_terms():
    cfg = ChainConfig(2)
    p = standard_potential("ising_transverse", cfg, J=1.0, h=0.0)
    assert list(p.terms) == [Region((0, 1))]  # no field terms when h = 0
    assert np.allclose(p.terms[Region((0, 1))], kron(pauli(1), pauli(1)))
    assert p.range == 1
    p2 = standard_potential("ising_transverse", cfg, J=2.0, h=0.5)
    assert len(p2.terms) == 3
    assert np.allclose(p2.terms[Region((1,))], 0.5 * pauli(2))
    assert p2.params == {"J": 2.0, "h": 0.5}


def test_standard_potential_other_kinds():
    cfg = ChainConfig(3)
    xy = standard_potential("xy", cfg, J=1.0, h=1.0)
    heis = standard_potential("heisenberg", cfg, J=1.0)
    bond = xy.terms[Region((0, 1))]
    assert np.allclose(bond, kron(pauli(1), pauli(1)) + kron(pauli(2), pauli(2)))
    hb = heis.terms[Region((1, 2))]
    assert np.allclose(hb, sum(kron(pauli(i), pauli(i)) for i in (1, 2, 3)))
    with pytest.raises(ValueError, match="unknown potential kind"):
        standard_potential("zz", cfg)


def test_potential_validates_terms():
    with pytest.raises(ValueError, match="not Hermitian"):
        Potential(terms={Region((0,)): np.array([[0, 1], [0, 0]], dtype=complex)})
    with pytest.raises(ValueError, match="shape"):
        Potential(terms={Region((0, 1)): np.eye(2)})


def test_norm1_values():
    # uniform nearest-neighbour J: interior sites touch two bonds
    for n in (3, 4):
        cfg = ChainConfig(n)
        p = standard_potential("ising_transverse", cfg, J=1.25, h=0.0)
        assert norm1(p, cfg) == pytest.approx(2.5, abs=1e-12)
        pf = standard_potential("ising_transverse", cfg, J=1.0, h=0.5)
        assert norm1(pf, cfg) == pytest.approx(2.5, abs=1e-12)
    # a two-site chain has a single bond
    cfg2 = ChainConfig(2)
    p2 = standard_potential("ising_transverse", cfg2, J=1.0, h=1.0)
    assert norm1(p2, cfg2) == pytest.approx(2.0, abs=1e-12)


def test_norm_exp_values():
    # weight exp(lam |X|): bonds get 4, fields get 2 at lam = ln 2
    lam = math.log(2.0)
    cfg = ChainConfig(4)
    p = standard_potential("ising_transverse", cfg, J=1.5, h=0.0)
    assert norm_exp(p, cfg, lam) == pytest.approx(8 * 1.5, abs=1e-12)
    pf = standard_potential("ising_transverse", cfg, J=1.0, h=1.0)
    assert norm_exp(pf, cfg, lam) == pytest.approx(8.0 + 2.0, abs=1e-12)
    assert norm_exp(p, cfg, 0.0) == pytest.approx(norm1(p, cfg), abs=1e-12)
    with pytest.raises(ValueError):
        norm_exp(p, cfg, -0.1)


def test_hamiltonian_matches_manual_kron():
    cfg = ChainConfig(3)
    p = standard_potential("ising_transverse", cfg, J=1.0, h=0.7)
    h = hamiltonian(p, cfg)
    eye = np.eye(2)
    want = (
        kron(pauli(1), pauli(1), eye)
        + kron(eye, pauli(1), pauli(1))
        + 0.7 * (kron(pauli(2), eye, eye) + kron(eye, pauli(2), eye) + kron(eye, eye, pauli(2)))
    )
    assert np.linalg.norm(h - want) < 1e-12
    assert np.linalg.norm(h - h.conj().T) == 0.0


def test_hamiltonian_rejects_out_of_chain_terms():
    cfg = ChainConfig(2)
    p = Potential(terms={Region((2, 3)): kron(pauli(1), pauli(1))})
    with pytest.raises(ValueError, match="sticks out"):
        hamiltonian(p, cfg)


def test_evolve_map_is_conjugation():
    rng = np.random.default_rng(20)
    cfg = ChainConfig(2)
    h = hamiltonian(standard_potential("ising_transverse", cfg, 1.0, 1.0), cfg)
    t = 0.37
    al = evolve_map(h, t)
    u = expm_herm(h, t)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    assert np.linalg.norm(al.apply(a) - u @ a @ u.conj().T) < 1e-12
    # superoperator is unitary and unital
    assert np.linalg.norm(al.mat @ al.mat.conj().T - np.eye(16)) < 1e-12
    assert np.linalg.norm(al.apply(np.eye(4)) - np.eye(4)) < 1e-12


def test_evolve_map_group_and_spectrum():
    cfg = ChainConfig(2)
    h = hamiltonian(standard_potential("heisenberg", cfg, 0.8), cfg)
    a1 = evolve_map(h, 0.2)
    a2 = evolve_map(h, 0.5)
    a3 = evolve_map(h, 0.7)
    assert np.linalg.norm(a2.compose(a1).mat - a3.mat) < 1e-12
    rng = np.random.default_rng(21)
    a = rng.standard_normal((4, 4))
    a = a + a.T
    w0 = np.linalg.eigvalsh(a)
    w1 = np.linalg.eigvalsh(a3.apply(a))
    assert np.allclose(w0, w1)
    assert np.linalg.norm(evolve_map(h, 0.0).mat - np.eye(16)) < 1e-12


def test_dynamics_map_build():
    h = 0.3 * pauli(1)
    dm = DynamicsMap.build(h, 0.9)
    assert dm.t == 0.9
    assert np.allclose(dm.hamiltonian, h)
    assert np.linalg.norm(dm.superop.mat - evolve_map(h, 0.9).mat) == 0.0


def test_reduced_map_composition():
    cfg = ChainConfig(2)
    proj = build_projection(build_spin_factor(jw_spin_system(cfg)))
    h = hamiltonian(standard_potential("ising_transverse", cfg, 1.0, 1.0), cfg)
    t = 0.6
    red = reduced_map(proj, evolve_map(h, t))
    u = expm_herm(h, t)
    rng = np.random.default_rng(22)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    assert np.linalg.norm(red.apply(a) - proj.apply(u @ a @ u.conj().T)) < 1e-12
    # accepts the bundled form too
    red2 = reduced_map(proj, DynamicsMap.build(h, t))
    assert np.linalg.norm(red.mat - red2.mat) == 0.0
    # at t = 0 the reduction is the projection itself
    red0 = reduced_map(proj, evolve_map(h, 0.0))
    assert np.linalg.norm(red0.mat - proj.as_superop().mat) < 1e-12
