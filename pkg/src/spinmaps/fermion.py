"""Jordan-Wigner fermions, anticommuting symmetries, and span closure.

A *spin system* here is a family of Hermitian unitaries, none equal to
+-I, that pairwise anticommute. The Jordan-Wigner construction produces
2n of them on an n-site chain:

    c_{2x}   = sigma_1 at x, dressed by sigma_3 on every site left of x
    c_{2x+1} = sigma_2 at x, same dressing

with no normalization, so c_j^2 = I exactly. Together with the identity
they span a (2n+1)-dimensional real subspace closed under the symmetrized
product; reversibility_check probes whether longer symmetrized words stay
inside that span.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .chain import ChainConfig, pauli, site_embed
from .config import DEFAULT_TOLERANCES, Tolerances
from .linalg import as_matrix, gram_matrix, hs_inner


class SpinSystemError(ValueError):
    """Raised when a claimed family of anticommuting symmetries is not one."""


@dataclass(frozen=True)
class SpinSystem:
    """Verified family of pairwise anticommuting Hermitian unitaries."""

    symmetries: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.symmetries[0].shape[0]

    def __len__(self) -> int:
        return len(self.symmetries)


@dataclass(frozen=True)
class SpinFactor:
    """Identity plus a spin system, trace-orthonormal, Jordan closed."""

    basis: tuple[np.ndarray, ...]  # basis[0] is the identity

    @property
    def dim(self) -> int:
        return self.basis[0].shape[0]

    def __len__(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class ReversibilityReport:
    verdict: str  # "reversible" | "non_reversible" | "inconclusive"
    violating_word: tuple[int, ...]  # indices into the factor basis; empty if none
    residual_norm: float  # worst relative residual seen (the violation if any)
    max_word_length: int


def sigma_pm(sign: int) -> np.ndarray:
    """Nilpotent ladder combinations (sigma_1 +- i sigma_2) / 2."""
    if sign not in (+1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return (pauli(1) + sign * 1j * pauli(2)) / 2.0


def _jw_string(x: int, local: np.ndarray, cfg: ChainConfig) -> np.ndarray:
    out = site_embed(local, x, cfg)
    for y in range(x):
        out = out @ site_embed(pauli(3), y, cfg)
    return out


def annihilation(x: int, cfg: ChainConfig) -> np.ndarray:
    """Jordan-Wigner annihilation operator a_x."""
    if not 0 <= x < cfg.n_sites:
        raise ValueError(f"site {x} outside chain of {cfg.n_sites} sites")
    return _jw_string(x, sigma_pm(-1), cfg)


def creation(x: int, cfg: ChainConfig) -> np.ndarray:
    return annihilation(x, cfg).conj().T


def majorana(j: int, cfg: ChainConfig) -> np.ndarray:
    """Self-adjoint JW generator c_j, j in 0..2n-1, with c_j^2 = I."""
    if not 0 <= j < 2 * cfg.n_sites:
        raise ValueError(
            f"majorana index {j} outside 0..{2 * cfg.n_sites - 1}"
        )
    x, odd = divmod(j, 2)
    return _jw_string(x, pauli(2) if odd else pauli(1), cfg)


def verify_spin_system(
    mats: Sequence[np.ndarray], tol: Tolerances = DEFAULT_TOLERANCES
) -> SpinSystem:
    """Check the spin-system axioms, naming the first violation found.

    Axioms per element: Hermitian, squares to I, distinct from +-I.
    Axiom per pair: anticommutator vanishes.
    """
    mats = tuple(as_matrix(m) for m in mats)
    if not mats:
        raise SpinSystemError("empty family")
    d = mats[0].shape[0]
    eye = np.eye(d)
    t = tol.algebra_tol
    for i, s in enumerate(mats):
        if s.shape != (d, d):
            raise SpinSystemError(f"element {i} has shape {s.shape}, expected {(d, d)}")
        dev = float(np.linalg.norm(s - s.conj().T))
        if dev > t:
            raise SpinSystemError(
                f"element {i} not Hermitian: ||s - s^H|| = {dev:.3e} > {t:.1e}"
            )
        dev = float(np.linalg.norm(s @ s - eye))
        if dev > t:
            raise SpinSystemError(
                f"element {i} not an involution: ||s^2 - I|| = {dev:.3e} > {t:.1e}"
            )
        for sign, label in ((1, "+I"), (-1, "-I")):
            dev = float(np.linalg.norm(s - sign * eye))
            if dev <= t:
                raise SpinSystemError(f"element {i} equals {label} (||diff|| = {dev:.3e})")
    for i, j in itertools.combinations(range(len(mats)), 2):
        dev = float(np.linalg.norm(mats[i] @ mats[j] + mats[j] @ mats[i]))
        if dev > t:
            raise SpinSystemError(
                f"elements {i},{j} do not anticommute: "
                f"||{{s_{i},s_{j}}}|| = {dev:.3e} > {t:.1e}"
            )
    return SpinSystem(symmetries=mats)


def jw_spin_system(cfg: ChainConfig, tol: Tolerances = DEFAULT_TOLERANCES) -> SpinSystem:
    return verify_spin_system(
        [majorana(j, cfg) for j in range(2 * cfg.n_sites)], tol
    )


def build_spin_factor(
    system: SpinSystem, tol: Tolerances = DEFAULT_TOLERANCES
) -> SpinFactor:
    """Adjoin the identity and verify orthonormality and Jordan closure."""
    d = system.dim
    basis = (np.eye(d, dtype=np.complex128),) + system.symmetries
    g = gram_matrix(basis)
    dev = float(np.linalg.norm(g - np.eye(len(basis))))
    if dev > tol.algebra_tol:
        raise SpinSystemError(
            f"basis not orthonormal in the normalized trace inner product: "
            f"||G - I|| = {dev:.3e}"
        )
    # symmetrized products of basis pairs must land back in the span:
    # s_i o s_j = delta_ij I, and I o b = b, which the coefficients recover
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            prod = (a @ b + b @ a) / 2.0
            coeffs = [hs_inner(e, prod) for e in basis]
            recon = sum(c * e for c, e in zip(coeffs, basis))
            dev = float(np.linalg.norm(prod - recon))
            if dev > tol.algebra_tol:
                raise SpinSystemError(
                    f"basis pair ({i},{j}) breaks Jordan closure: residual {dev:.3e}"
                )
    return SpinFactor(basis=basis)


def _canonical_words(n_gens: int, length: int):
    """Index words over 1..n_gens, no adjacent repeats, up to reversal."""
    for word in itertools.product(range(1, n_gens + 1), repeat=length):
        if any(word[k] == word[k + 1] for k in range(length - 1)):
            continue
        if word > word[::-1]:
            continue
        yield word


def reversibility_check(
    factor: SpinFactor,
    max_word_length: int = 5,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> ReversibilityReport:
    """Probe closure of the factor span under symmetrized operator words.

    For each word (w_1, ..., w_m) of basis elements the symmetrized word

        w_1 ... w_m + w_m ... w_1

    is projected onto the span of the basis; a relative residual above
    closure_tol certifies the span is not closed under the symmetrized
    product ("non_reversible"). Words are enumerated by increasing length,
    so the reported violating word is the lexicographically first shortest
    one, and a non_reversible verdict at some max length persists for any
    larger one.

    If no violation occurs the verdict is "reversible" provided
    max_word_length >= 4: for pairwise anticommuting symmetries any
    symmetrized word reduces, up to sign, to a product of k distinct
    generators, which is Hermitian only for k = 0, 1 mod 4, so the first
    possible escape from the span is a word of four distinct generators.
    Below that length the search is "inconclusive".
    """
    if max_word_length < 2:
        raise ValueError("max_word_length must be >= 2")
    basis = factor.basis
    n_gens = len(basis) - 1
    stack = np.stack(basis)
    d = factor.dim
    worst = 0.0
    for length in range(2, max_word_length + 1):
        for word in _canonical_words(n_gens, length):
            fwd = basis[word[0]]
            for idx in word[1:]:
                fwd = fwd @ basis[idx]
            # reversing a product of Hermitian factors takes the adjoint
            sym = fwd + fwd.conj().T
            coeffs = np.tensordot(stack.conj(), sym, axes=([1, 2], [0, 1])) / d
            recon = np.tensordot(coeffs, stack, axes=(0, 0))
            total = float(np.linalg.norm(sym))
            if total < tol.algebra_tol:
                continue  # symmetrized word vanished identically
            rel = float(np.linalg.norm(sym - recon)) / total
            worst = max(worst, rel)
            if rel > tol.closure_tol:
                return ReversibilityReport(
                    verdict="non_reversible",
                    violating_word=word,
                    residual_norm=rel,
                    max_word_length=max_word_length,
                )
    verdict = "reversible" if max_word_length >= 4 else "inconclusive"
    return ReversibilityReport(
        verdict=verdict,
        violating_word=(),
        residual_norm=worst,
        max_word_length=max_word_length,
    )
