"""Orthogonal projection onto the span of a spin factor.

P(a) = sum_j <e_j, a> e_j in the normalized trace inner product, over the
orthonormal basis [I, s_1, ..., s_k]. P is unital, trace preserving,
idempotent, self-adjoint for that inner product, and positive: on a pure
state it returns (I + sum t_j s_j) / d with sum t_j^2 <= 1, which has
smallest eigenvalue (1 - ||t||) / d >= 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .fermion import SpinFactor
from .linalg import as_matrix, gram_matrix
from .superop import SuperOp, vec


@dataclass(frozen=True)
class ProjectionMap:
    factor: SpinFactor
    _stack: np.ndarray = field(repr=False)  # (k+1, d, d) basis stack

    @property
    def d(self) -> int:
        return self.factor.dim

    def apply(self, a) -> np.ndarray:
        a = as_matrix(a)
        if a.shape != (self.d, self.d):
            raise ValueError(f"argument shape {a.shape}, expected {(self.d, self.d)}")
        coeffs = self.coefficients(a)
        return np.tensordot(coeffs, self._stack, axes=(0, 0))

    def coefficients(self, a) -> np.ndarray:
        """Expansion coefficients <e_j, a> of the projected operator."""
        a = as_matrix(a)
        return np.tensordot(self._stack.conj(), a, axes=([1, 2], [0, 1])) / self.d

    def as_superop(self) -> SuperOp:
        """Matrix form (1/d) sum_j vec(e_j) vec(e_j)^H.

        Valid because tr(x^H y) = vec(x)^H vec(y) under column stacking and
        every basis element is Hermitian.
        """
        vecs = np.stack([vec(e) for e in self.factor.basis])  # (k+1, d^2)
        mat = (vecs.T @ vecs.conj()) / self.d
        return SuperOp(d=self.d, mat=mat)


def build_projection(
    factor: SpinFactor, tol: Tolerances = DEFAULT_TOLERANCES
) -> ProjectionMap:
    g = gram_matrix(factor.basis)
    dev = float(np.linalg.norm(g - np.eye(len(factor.basis))))
    if dev > tol.algebra_tol:
        raise ValueError(
            f"factor basis is not orthonormal: ||G - I|| = {dev:.3e}"
        )
    return ProjectionMap(factor=factor, _stack=np.stack(factor.basis))
