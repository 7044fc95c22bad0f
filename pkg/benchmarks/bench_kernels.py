"""Benchmark the numba kernels against their pure-numpy twins.

Runs every kernel pair on a chain-sized problem, checks the two backends
agree, and prints a timing table. The jit pass is warmed up once before
timing so compilation is not counted.

    python3 benchmarks/bench_kernels.py --n-sites 3 --repeats 5
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from spinmaps import _kernels as K
from spinmaps.chain import ChainConfig
from spinmaps.dynamics import evolve_map, hamiltonian, reduced_map, standard_potential
from spinmaps.fermion import build_spin_factor, jw_spin_system, majorana
from spinmaps.linalg import op_norm
from spinmaps.projection import build_projection
from spinmaps.superop import choi


def _best_of(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-sites", type=int, default=3)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--states", type=int, default=10000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if not K.HAVE_NUMBA:
        print("numba is not importable; nothing to compare")
        return 1

    cfg = ChainConfig(args.n_sites)
    d = cfg.dim
    rng = np.random.default_rng(args.seed)

    factor = build_spin_factor(jw_spin_system(cfg))
    proj = build_projection(factor)
    pot = standard_potential("ising_transverse", cfg, J=1.0, h=1.0)
    red = reduced_map(proj, evolve_map(hamiltonian(pot, cfg), 0.3))
    c = np.ascontiguousarray(choi(red).mat)

    herm = rng.standard_normal((d * d, d * d)) + 1j * rng.standard_normal((d * d, d * d))
    herm = herm + herm.conj().T

    starts = rng.standard_normal((64, d)) + 1j * rng.standard_normal((64, d))
    starts /= np.linalg.norm(starts, axis=1, keepdims=True)
    smat = np.ascontiguousarray(red.mat)
    smat_adj = np.ascontiguousarray(red.mat.conj().T)

    syms = np.ascontiguousarray(np.stack([majorana(j, cfg) for j in range(2 * cfg.n_sites)]))
    z = rng.standard_normal((args.states, d)) + 1j * rng.standard_normal((args.states, d))
    states = z / np.linalg.norm(z, axis=1, keepdims=True)

    rho0 = -c / np.linalg.norm(c)
    step0 = 0.5 / op_norm(c)

    cases = [
        (
            "psd_project",
            lambda: K.psd_project_py(herm),
            lambda: K.psd_project_jit(herm),
            lambda a, b: np.allclose(a[0], b[0], atol=1e-10),
        ),
        (
            "partial_transpose",
            lambda: K.partial_transpose_py(herm, d),
            lambda: K.partial_transpose_jit(herm, d),
            lambda a, b: np.allclose(a, b),
        ),
        (
            "alt_decompose",
            lambda: K.alt_decompose_py(c, d, 20000, 1e-12),
            lambda: K.alt_decompose_jit(c, d, 20000, 1e-12),
            lambda a, b: abs(a[2] - b[2]) < 1e-8 and a[3] == b[3],
        ),
        (
            "feasibility_cycles",
            lambda: K.feasibility_cycles_py(rho0.copy(), d, 50),
            lambda: K.feasibility_cycles_jit(rho0.copy(), d, 50),
            lambda a, b: np.allclose(a, b, atol=1e-9),
        ),
        (
            "witness_descent",
            lambda: K.witness_descent_py(c, d, rho0, 2000, step0, 3),
            lambda: K.witness_descent_jit(c, d, rho0, 2000, step0, 3),
            lambda a, b: abs(a[1] - b[1]) < 1e-8,
        ),
        (
            "probe_sweep",
            lambda: K.probe_sweep_py(smat, smat_adj, starts, 12, d),
            lambda: K.probe_sweep_jit(smat, smat_adj, starts, 12, d),
            lambda a, b: abs(a[0] - b[0]) < 1e-9,
        ),
        (
            "state_stats",
            lambda: K.state_stats_py(syms, states),
            lambda: K.state_stats_jit(syms, states),
            lambda a, b: np.allclose(a[0], b[0], atol=1e-10)
            and np.allclose(a[1], b[1], atol=1e-10),
        ),
    ]

    print(f"n_sites={args.n_sites} d={d} repeats={args.repeats} states={args.states}")
    print(f"{'kernel':<20} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>9}  agree")
    for name, py, jt, agree in cases:
        jt()  # warm up / compile outside the timer
        t_py, out_py = _best_of(py, args.repeats)
        t_jt, out_jt = _best_of(jt, args.repeats)
        ok = agree(out_py, out_jt)
        print(
            f"{name:<20} {t_py * 1e3:>12.3f} {t_jt * 1e3:>12.3f} "
            f"{t_py / t_jt:>8.2f}x  {'yes' if ok else 'NO'}"
        )
        if not ok:
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
