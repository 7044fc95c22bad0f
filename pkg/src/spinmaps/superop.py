"""Linear maps on d x d matrices as d^2 x d^2 arrays.

Conventions, fixed once and used everywhere:

* vec stacks columns, so vec(X Y Z) = (Z^T kron X) vec(Y) and the map
  a -> X a Y has matrix Y^T kron X.
* The Choi matrix is unnormalized, C = sum_ij E_ij kron L(E_ij), with the
  *second* tensor factor carrying the image. Then L is completely positive
  exactly when C >= 0, and trace(C) = trace(L(I)).
* partial_transpose transposes the second factor, i.e. each d x d block
  of C in place.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import as_matrix


def vec(a) -> np.ndarray:
    """Column-stacking vectorization."""
    return as_matrix(a).reshape(-1, order="F")


def unvec(v, d: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    if d is None:
        d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise ValueError(f"vector of length {v.size} is not d^2 for d = {d}")
    return v.reshape(d, d, order="F")


@dataclass(frozen=True)
class SuperOp:
    """Linear map on d x d matrices, stored as its d^2 x d^2 matrix."""

    d: int
    mat: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.mat)
        if m.shape != (self.d**2, self.d**2):
            raise ValueError(
                f"superoperator matrix shape {m.shape} does not match d = {self.d}"
            )
        object.__setattr__(self, "mat", m)

    def apply(self, a) -> np.ndarray:
        a = as_matrix(a)
        if a.shape != (self.d, self.d):
            raise ValueError(f"argument shape {a.shape}, expected {(self.d, self.d)}")
        return unvec(self.mat @ vec(a), self.d)

    def compose(self, other: "SuperOp") -> "SuperOp":
        """self after other."""
        if self.d != other.d:
            raise ValueError(f"dimension mismatch: {self.d} vs {other.d}")
        return SuperOp(d=self.d, mat=self.mat @ other.mat)

    def adjoint(self) -> "SuperOp":
        """Adjoint with respect to the trace inner product."""
        return SuperOp(d=self.d, mat=self.mat.conj().T)

    @classmethod
    def identity(cls, d: int) -> "SuperOp":
        return cls(d=d, mat=np.eye(d * d, dtype=np.complex128))


@dataclass(frozen=True)
class ChoiMatrix:
    d: int
    mat: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.mat)
        if m.shape != (self.d**2, self.d**2):
            raise ValueError(
                f"Choi matrix shape {m.shape} does not match d = {self.d}"
            )
        object.__setattr__(self, "mat", m)

    def herm_deviation(self) -> float:
        return float(np.linalg.norm(self.mat - self.mat.conj().T))


def superop_from_function(
    f: Callable[[np.ndarray], np.ndarray], d: int, linearity_tol: float = 1e-10
) -> SuperOp:
    """Assemble the matrix of f by evaluating it on matrix units.

    Linearity is spot-checked on random combinations afterwards (fixed
    internal seed, so failures are reproducible) and a violation raises.
    """
    mat = np.empty((d * d, d * d), dtype=np.complex128)
    unit = np.zeros((d, d), dtype=np.complex128)
    for j in range(d):
        for i in range(d):
            unit[i, j] = 1.0
            mat[:, j * d + i] = vec(as_matrix(f(unit)))
            unit[i, j] = 0.0
    s = SuperOp(d=d, mat=mat)
    rng = np.random.default_rng(0x5EED)
    for _ in range(2):
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        alpha, beta = rng.standard_normal(2)
        lhs = as_matrix(f(alpha * a + beta * b))
        rhs = alpha * s.apply(a) + beta * s.apply(b)
        dev = float(np.linalg.norm(lhs - rhs))
        scale = max(1.0, float(np.linalg.norm(lhs)))
        if dev > linearity_tol * scale:
            raise ValueError(
                f"function is not linear: combination residual {dev:.3e} "
                f"exceeds {linearity_tol:.1e} (relative)"
            )
    return s


def choi(s: SuperOp) -> ChoiMatrix:
    """Unnormalized Choi matrix sum_ij E_ij kron s(E_ij).

    Computed as an index reshuffle of the superoperator matrix; the
    definitional sum over matrix units is the test oracle for this.
    """
    d = s.d
    m4 = s.mat.reshape(d, d, d, d)
    # mat[b*d+a, j*d+i] = C[(i*d+a), (j*d+b)]
    c4 = m4.transpose(3, 1, 2, 0)
    return ChoiMatrix(d=d, mat=np.ascontiguousarray(c4.reshape(d * d, d * d)))


def partial_transpose(m, d: int) -> np.ndarray:
    """Transpose the second tensor factor of a d^2 x d^2 matrix."""
    m = as_matrix(m)
    if m.shape != (d * d, d * d):
        raise ValueError(f"shape {m.shape} is not (d^2, d^2) for d = {d}")
    return np.ascontiguousarray(
        m.reshape(d, d, d, d).transpose(0, 3, 2, 1).reshape(d * d, d * d)
    )
