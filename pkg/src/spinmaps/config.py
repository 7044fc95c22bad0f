"""Centralized numeric tolerances and iteration budgets.

Every module takes its thresholds from a Tolerances instance instead of
scattering literals, so a run can tighten or relax the whole stack at once.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    # exact-algebra checks (anticommutators, CAR, Jordan closure of the basis)
    algebra_tol: float = 1e-12
    # hermiticity deviation allowed before herm_eig refuses the input
    herm_tol: float = 1e-10
    # eigendecomposition residual ||a v - v diag(w)||
    eig_tol: float = 1e-9
    # relative residual above which a symmetrized word counts as leaving the span
    closure_tol: float = 1e-8
    # Choi eigenvalue threshold for the CP / co-CP verdicts
    cp_tol: float = 1e-9
    # distance below which C = A + B^Gamma counts as an exact decomposition
    dist_tol: float = 1e-6
    # PPT slack allowed in a witness state
    ppt_tol: float = 1e-9
    # a witness objective must beat -witness_margin to certify anything
    witness_margin: float = 1e-6
    # iteration caps
    max_iters: int = 20000
    refine_iters: int = 5000
    # per-step improvement below this ends the alternating projection
    improve_tol: float = 1e-12
    # positivity probe: random starts and refinement sweeps per start
    probe_starts: int = 64
    probe_refine: int = 12

    def override(self, **kwargs: float | int) -> "Tolerances":
        names = {f.name for f in fields(self)}
        bad = set(kwargs) - names
        if bad:
            raise ValueError(f"unknown tolerance fields: {sorted(bad)}")
        return replace(self, **kwargs)


DEFAULT_TOLERANCES = Tolerances()
