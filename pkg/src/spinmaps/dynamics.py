"""Finite-range potentials, Heisenberg evolution, and reduced maps.

A Potential assigns a Hermitian matrix to each region of the chain it
touches. Built-in families (couplings in the local Pauli convention,
where sigma_1 is diagonal):

    ising_transverse: J sigma_1 sigma_1 on bonds, field h sigma_2 on sites
    xy:               J (sigma_1 sigma_1 + sigma_2 sigma_2) on bonds,
                      field h sigma_3 on sites
    heisenberg:       J (sigma_1 sigma_1 + sigma_2 sigma_2 + sigma_3 sigma_3)
                      on bonds, field h sigma_2 on sites

Zero-coefficient terms are dropped. The Heisenberg map at time t is
a -> U a U^H with U = exp(i t H); its superoperator matrix is
conj(U) kron U under column stacking.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .chain import ChainConfig, Region, chain_region, pauli, region_embed
from .config import DEFAULT_TOLERANCES, Tolerances
from .linalg import as_matrix, expm_herm, kron, op_norm
from .projection import ProjectionMap
from .superop import SuperOp

STANDARD_KINDS = ("ising_transverse", "xy", "heisenberg")


@dataclass(frozen=True)
class Potential:
    """Map from regions to Hermitian interaction terms."""

    terms: Mapping[Region, np.ndarray]
    kind: str = "custom"
    params: Mapping[str, float] | None = None

    def __post_init__(self):
        checked = {}
        for region, term in self.terms.items():
            term = as_matrix(term)
            want = 2 ** len(region)
            if term.shape != (want, want):
                raise ValueError(
                    f"term on region {region.sites} has shape {term.shape}, "
                    f"expected {(want, want)}"
                )
            dev = float(np.linalg.norm(term - term.conj().T))
            if dev > 1e-12 * max(1.0, float(np.linalg.norm(term))):
                raise ValueError(
                    f"term on region {region.sites} is not Hermitian "
                    f"(deviation {dev:.3e})"
                )
            checked[region] = term
        object.__setattr__(self, "terms", checked)

    @property
    def range(self) -> int:
        """Largest region diameter; 0 for purely on-site potentials."""
        return max((r.diameter for r in self.terms), default=0)


def standard_potential(
    kind: str, cfg: ChainConfig, J: float = 1.0, h: float = 0.0
) -> Potential:
    """Translation-invariant nearest-neighbour potential of a named family."""
    if kind not in STANDARD_KINDS:
        raise ValueError(f"unknown potential kind {kind!r}; choose from {STANDARD_KINDS}")
    if kind == "ising_transverse":
        bond = J * kron(pauli(1), pauli(1))
        site = h * pauli(2)
    elif kind == "xy":
        bond = J * (kron(pauli(1), pauli(1)) + kron(pauli(2), pauli(2)))
        site = h * pauli(3)
    else:
        bond = J * sum(kron(pauli(i), pauli(i)) for i in (1, 2, 3))
        site = h * pauli(2)
    terms: dict[Region, np.ndarray] = {}
    if J != 0.0:
        for x in range(cfg.n_sites - 1):
            terms[Region((x, x + 1))] = bond
    if h != 0.0:
        for x in range(cfg.n_sites):
            terms[Region((x,))] = site
    return Potential(terms=terms, kind=kind, params={"J": float(J), "h": float(h)})


def norm1(p: Potential, cfg: ChainConfig) -> float:
    """sup over sites of the summed operator norms of terms touching it."""
    best = 0.0
    for site in range(cfg.n_sites):
        total = sum(op_norm(t) for r, t in p.terms.items() if site in r)
        best = max(best, total)
    return best


def norm_exp(p: Potential, cfg: ChainConfig, lam: float) -> float:
    """Like norm1 but each term weighted by exp(lam * region size)."""
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    best = 0.0
    for site in range(cfg.n_sites):
        total = sum(
            math.exp(lam * len(r)) * op_norm(t)
            for r, t in p.terms.items()
            if site in r
        )
        best = max(best, total)
    return best


def hamiltonian(p: Potential, cfg: ChainConfig) -> np.ndarray:
    """Sum of all embedded terms on the full chain."""
    full = chain_region(cfg)
    h = np.zeros((cfg.dim, cfg.dim), dtype=np.complex128)
    for region, term in p.terms.items():
        if region.sites and region.sites[-1] >= cfg.n_sites:
            raise ValueError(
                f"term region {region.sites} sticks out of a {cfg.n_sites}-site chain"
            )
        h += region_embed(term, region, full)
    return h


def evolve_map(h, t: float, tol: Tolerances = DEFAULT_TOLERANCES) -> SuperOp:
    """Heisenberg evolution a -> e^{itH} a e^{-itH} as a superoperator."""
    h = as_matrix(h)
    u = expm_herm(h, t, tol)
    return SuperOp(d=h.shape[0], mat=np.kron(u.conj(), u))


@dataclass(frozen=True)
class DynamicsMap:
    """Evolution bundled with its generator and time."""

    hamiltonian: np.ndarray
    t: float
    superop: SuperOp

    @classmethod
    def build(
        cls, h, t: float, tol: Tolerances = DEFAULT_TOLERANCES
    ) -> "DynamicsMap":
        h = as_matrix(h)
        return cls(hamiltonian=h, t=float(t), superop=evolve_map(h, t, tol))


def reduced_map(p: ProjectionMap, dyn: SuperOp | DynamicsMap) -> SuperOp:
    """Projected Heisenberg map P(alpha_t(.)) as a superoperator."""
    alpha = dyn.superop if isinstance(dyn, DynamicsMap) else dyn
    return p.as_superop().compose(alpha)
