"""Spin-chain symmetry algebras, projected dynamics, and map classification.

The pipeline, end to end: Jordan-Wigner generators on a finite chain
(`fermion`), the orthogonal projection onto their span (`projection`),
finite-range Hamiltonian dynamics (`dynamics`), and the positivity /
decomposability analysis of the projected evolution (`analysis`), with
machine-checkable certificates throughout. `spinmaps.cli` exposes the
same pipeline as a command line tool.
"""
from ._kernels import BACKEND, HAVE_NUMBA, NUMBA_ACTIVE
from .analysis import (
    AnalysisReport,
    CheckRecord,
    ConeCheck,
    DecompositionResult,
    ProbeResult,
    WitnessCertificate,
    WitnessOutcome,
    WitnessSearchError,
    classify,
    decomposability_project,
    extract_witness,
    is_cocp,
    is_cp,
    positivity_probe,
    witness_search,
)
from .chain import ChainConfig, Region, chain_region, jordan_product, pauli, region_embed, site_embed
from .config import DEFAULT_TOLERANCES, Tolerances
from .dynamics import (
    DynamicsMap,
    Potential,
    evolve_map,
    hamiltonian,
    norm1,
    norm_exp,
    reduced_map,
    standard_potential,
)
from .fermion import (
    ReversibilityReport,
    SpinFactor,
    SpinSystem,
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
from .linalg import EigResult, expm_herm, herm_eig, hs_inner, hs_norm, kron, op_norm
from .projection import ProjectionMap, build_projection
from .superop import ChoiMatrix, SuperOp, choi, partial_transpose, superop_from_function, unvec, vec

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "BACKEND",
    "ChainConfig",
    "CheckRecord",
    "ChoiMatrix",
    "ConeCheck",
    "DEFAULT_TOLERANCES",
    "DecompositionResult",
    "DynamicsMap",
    "EigResult",
    "HAVE_NUMBA",
    "NUMBA_ACTIVE",
    "Potential",
    "ProbeResult",
    "ProjectionMap",
    "Region",
    "ReversibilityReport",
    "SpinFactor",
    "SpinSystem",
    "SpinSystemError",
    "SuperOp",
    "Tolerances",
    "WitnessCertificate",
    "WitnessOutcome",
    "WitnessSearchError",
    "annihilation",
    "build_projection",
    "build_spin_factor",
    "chain_region",
    "choi",
    "classify",
    "creation",
    "decomposability_project",
    "evolve_map",
    "expm_herm",
    "extract_witness",
    "hamiltonian",
    "herm_eig",
    "hs_inner",
    "hs_norm",
    "is_cocp",
    "is_cp",
    "jordan_product",
    "jw_spin_system",
    "kron",
    "majorana",
    "norm1",
    "norm_exp",
    "op_norm",
    "partial_transpose",
    "pauli",
    "positivity_probe",
    "reduced_map",
    "region_embed",
    "reversibility_check",
    "sigma_pm",
    "site_embed",
    "standard_potential",
    "superop_from_function",
    "unvec",
    "vec",
    "verify_spin_system",
    "witness_search",
]
