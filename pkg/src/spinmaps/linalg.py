"""Dense complex linear algebra helpers shared by every other module.

Arrays are plain numpy complex128 matrices. The Hilbert-Schmidt inner
product carries the normalized trace tr(a^H b) / d so that the identity
has unit norm; that normalization is what makes the symmetry bases
elsewhere orthonormal without extra scale factors.
"""
from __future__ import annotations

from typing import Iterable, NamedTuple

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances


class EigResult(NamedTuple):
    values: np.ndarray  # ascending, real
    vectors: np.ndarray  # columns are the corresponding eigenvectors


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def kron(*ops) -> np.ndarray:
    """Kronecker product of one or more matrices, left factor most significant."""
    if not ops:
        raise ValueError("kron needs at least one factor")
    out = as_matrix(ops[0])
    for op in ops[1:]:
        out = np.kron(out, as_matrix(op))
    return out


def hs_inner(a, b) -> complex:
    """Normalized Hilbert-Schmidt inner product tr(a^H b) / d."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return complex(np.trace(a.conj().T @ b) / a.shape[0])


def hs_norm(a) -> float:
    """Norm induced by hs_inner; hs_norm(I) == 1 in any dimension."""
    a = as_matrix(a)
    return float(np.linalg.norm(a) / np.sqrt(a.shape[0]))


def herm_deviation(a) -> float:
    a = as_matrix(a)
    return float(np.linalg.norm(a - a.conj().T))


def herm_eig(a, tol: Tolerances = DEFAULT_TOLERANCES) -> EigResult:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Refuses visibly non-Hermitian input instead of silently symmetrizing.
    """
    a = as_matrix(a)
    dev = herm_deviation(a)
    scale = max(1.0, float(np.linalg.norm(a)))
    if dev > tol.herm_tol * scale:
        raise ValueError(
            f"matrix is not Hermitian: ||a - a^H||_F = {dev:.3e} "
            f"exceeds {tol.herm_tol:.1e} * ||a||_F"
        )
    w, v = np.linalg.eigh((a + a.conj().T) / 2.0)
    return EigResult(values=w, vectors=v)


def expm_herm(h, t: float, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Unitary exp(i t h) for Hermitian h, via the spectral decomposition."""
    w, v = herm_eig(h, tol)
    return (v * np.exp(1j * t * w)) @ v.conj().T


def op_norm(a) -> float:
    """Operator (largest-singular-value) norm."""
    return float(np.linalg.norm(as_matrix(a), 2))


def gram_matrix(ops: Iterable[np.ndarray]) -> np.ndarray:
    mats = [as_matrix(op) for op in ops]
    g = np.empty((len(mats), len(mats)), dtype=np.complex128)
    for i, a in enumerate(mats):
        for j, b in enumerate(mats):
            g[i, j] = hs_inner(a, b)
    return g
