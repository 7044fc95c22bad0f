"""Finite spin chain: sites, regions, local Pauli factors, embeddings.

Single-site operators live on C^2; a chain of n sites carries the n-fold
Kronecker product with site 0 as the leftmost (most significant) factor.

The Pauli labeling is nonstandard on purpose and everything downstream
depends on it: sigma_1 is the diagonal involution, sigma_2 the real
off-diagonal one, sigma_3 the imaginary one, so that

    sigma_1 sigma_2 sigma_3 = -i I.

They still satisfy sigma_i sigma_j + sigma_j sigma_i = 2 delta_ij I.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .linalg import as_matrix, kron

# index 0 is the identity; 1..3 are the involutions described above
_PAULI = (
    np.eye(2, dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, 1j], [-1j, 0]], dtype=np.complex128),
)

#: hard guard; 2^12 x 2^12 superoperators already stop being interactive
MAX_SITES_DEFAULT = 6


@dataclass(frozen=True)
class ChainConfig:
    """Chain length plus the safety cap on dense dimension."""

    n_sites: int
    max_sites: int = MAX_SITES_DEFAULT

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be >= 1, got {self.n_sites}")
        if self.n_sites > self.max_sites:
            raise ValueError(
                f"n_sites = {self.n_sites} exceeds the guard max_sites = "
                f"{self.max_sites}; raise max_sites explicitly if you mean it"
            )

    @property
    def dim(self) -> int:
        return 2**self.n_sites


@dataclass(frozen=True)
class Region:
    """Sorted tuple of distinct site indices."""

    sites: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.sites)) != len(self.sites):
            raise ValueError(f"duplicate sites in region: {self.sites}")
        if any(s < 0 for s in self.sites):
            raise ValueError(f"negative site index in region: {self.sites}")
        object.__setattr__(self, "sites", tuple(sorted(self.sites)))

    @classmethod
    def of(cls, sites: Iterable[int]) -> "Region":
        return cls(tuple(sites))

    def __len__(self) -> int:
        return len(self.sites)

    def __contains__(self, site: int) -> bool:
        return site in self.sites

    def __le__(self, other: "Region") -> bool:
        return set(self.sites) <= set(other.sites)

    @property
    def diameter(self) -> int:
        if not self.sites:
            return 0
        return self.sites[-1] - self.sites[0]


def pauli(i: int) -> np.ndarray:
    """sigma_i for i in 0..3 (0 = identity); returns a fresh copy."""
    if i not in (0, 1, 2, 3):
        raise ValueError(f"pauli index must be 0..3, got {i}")
    return _PAULI[i].copy()


def site_embed(op, site: int, cfg: ChainConfig) -> np.ndarray:
    """Single-site operator acting on `site`, identity elsewhere."""
    op = as_matrix(op)
    if op.shape != (2, 2):
        raise ValueError(f"site operators are 2x2, got {op.shape}")
    if not 0 <= site < cfg.n_sites:
        raise ValueError(f"site {site} outside chain of {cfg.n_sites} sites")
    left = np.eye(2**site, dtype=np.complex128)
    right = np.eye(2 ** (cfg.n_sites - site - 1), dtype=np.complex128)
    return kron(left, op, right)


def region_embed(op, region: Region, target: Region) -> np.ndarray:
    """Embed an operator on `region` into the larger `target` region.

    `op` must act on 2^len(region) dimensions with tensor slots ordered by
    ascending site index; the result acts on 2^len(target) the same way.
    """
    op = as_matrix(op)
    if not region <= target:
        raise ValueError(f"region {region.sites} not contained in {target.sites}")
    k = len(region)
    m = len(target) - k
    if op.shape != (2**k, 2**k):
        raise ValueError(
            f"operator shape {op.shape} does not match region of {k} sites"
        )
    extra = [s for s in target.sites if s not in region]
    big = kron(op, np.eye(2**m, dtype=np.complex128)) if m else op
    # slot p of the embedded operator must come from slot source[p] of big,
    # whose slots are ordered [region sites..., extra sites...]
    order = list(region.sites) + extra
    source = [order.index(s) for s in target.sites]
    nt = len(target)
    tens = big.reshape((2,) * (2 * nt))
    perm = source + [nt + p for p in source]
    return np.ascontiguousarray(tens.transpose(perm).reshape(2**nt, 2**nt))


def chain_region(cfg: ChainConfig) -> Region:
    return Region(tuple(range(cfg.n_sites)))


def jordan_product(a, b) -> np.ndarray:
    """Symmetrized product (ab + ba) / 2."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return (a @ b + b @ a) / 2.0
