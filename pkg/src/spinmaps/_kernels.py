"""Hot numeric kernels, each implemented twice.

Every kernel has a vectorized numpy form (suffix ``_py``) and a numba
``@njit`` form (suffix ``_jit``, compiled on first call). The public
unsuffixed names bind one family at import time:

    SPINMAPS_NUMBA=0|false|no|off  -> numpy
    unset or anything else        -> numba when importable, numpy otherwise

Kernels are pure functions of arrays and scalars. Randomness stays with
the callers (start vectors arrive as arrays), so both backends walk the
same iteration path and agree to rounding.

benchmarks/bench_kernels.py times the two families against each other.
"""
from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("SPINMAPS_NUMBA", "1").strip().lower()
NUMBA_REQUESTED = _flag not in ("0", "false", "no", "off")

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    HAVE_NUMBA = False

NUMBA_ACTIVE = NUMBA_REQUESTED and HAVE_NUMBA


# ---------------------------------------------------------------- numpy ----

def _herm(m):
    return (m + m.conj().T) * 0.5


def psd_project_py(m):
    """Nearest PSD matrix (Frobenius) to the hermitized input, plus min eig."""
    w, v = np.linalg.eigh(_herm(m))
    proj = (v * np.maximum(w, 0.0)) @ v.conj().T
    return proj, float(w[0])


def partial_transpose_py(m, d):
    """Transpose the second tensor factor of a d^2 x d^2 matrix."""
    return np.ascontiguousarray(
        m.reshape(d, d, d, d).transpose(0, 3, 2, 1).reshape(d * d, d * d)
    )


def alt_decompose_py(c, d, max_iters, improve_tol):
    """Alternating PSD projections for C ~ A + B^Gamma.

    Exact block minimization in each factor, so the distance is
    non-increasing; stops when one sweep improves it by less than
    improve_tol (converged) or the iteration budget runs out.
    Returns (a, b, dist, iters, converged, history).
    """
    a, _ = psd_project_py(c)
    b = np.zeros_like(c)
    hist = np.empty(max_iters, dtype=np.float64)
    prev = np.inf
    dist = np.inf
    iters = 0
    converged = False
    for iters in range(1, max_iters + 1):
        a, _ = psd_project_py(c - partial_transpose_py(b, d))
        b, _ = psd_project_py(partial_transpose_py(c - a, d))
        dist = float(np.linalg.norm(c - a - partial_transpose_py(b, d)))
        hist[iters - 1] = dist
        if prev - dist < improve_tol:
            converged = True
            break
        prev = dist
    return a, b, dist, iters, converged, hist[:iters].copy()


def feasibility_cycles_py(rho, d, n_cycles):
    """Push rho toward {PSD} ∩ {PSD after partial transpose} ∩ {trace 1}."""
    dd = d * d
    for _ in range(n_cycles):
        rho, _ = psd_project_py(rho)
        ptr, _ = psd_project_py(partial_transpose_py(rho, d))
        rho = partial_transpose_py(ptr, d)
        tr = float(np.trace(rho).real)
        if tr > 1e-300:
            rho = rho / tr
        else:
            rho = np.eye(dd, dtype=np.complex128) / dd
    return rho


def _objective_py(rho, c):
    return float(np.sum(rho * c.T).real)


def witness_descent_py(c, d, rho0, max_iters, step0, cycles_per_step):
    """Projected subgradient descent of tr(rho C) over the PPT states.

    Steps along -C, re-projects with feasibility cycles, halves the step
    on non-improvement, and returns the best iterate and objective.
    """
    rho = feasibility_cycles_py(rho0.copy(), d, 10)
    best = rho.copy()
    best_obj = _objective_py(rho, c)
    step = step0
    for _ in range(max_iters):
        cand = feasibility_cycles_py(rho - step * c, d, cycles_per_step)
        obj = _objective_py(cand, c)
        if obj < best_obj - 1e-15:
            rho = cand
            best = cand.copy()
            best_obj = obj
        else:
            step *= 0.5
            if step < step0 * 1e-14:
                break
            rho = best.copy()
    return best, best_obj


def _vec_state_outer_py(x):
    # column-stacked vec(x x^H)
    return np.outer(x, x.conj()).reshape(-1, order="F")


def probe_sweep_py(smat, smat_adj, starts, n_refine, d):
    """min over unit x, y of <y| L(x x^H) |y> by alternating eigenvectors.

    For fixed x the optimal y is the bottom eigenvector of herm(L(x x^H));
    for fixed y the optimal x is the bottom eigenvector of herm(L^H(y y^H)).
    Each half-step cannot increase the value. Returns (best, x, y).
    """
    best = np.inf
    bx = starts[0].copy()
    by = starts[0].copy()
    for s in range(starts.shape[0]):
        x = starts[s].copy()
        for _ in range(n_refine):
            m = _herm(unvec_col(smat @ _vec_state_outer_py(x), d))
            w, v = np.linalg.eigh(m)
            y = v[:, 0]
            if w[0] < best:
                best = float(w[0])
                bx = x.copy()
                by = y.copy()
            m2 = _herm(unvec_col(smat_adj @ _vec_state_outer_py(y), d))
            w2, v2 = np.linalg.eigh(m2)
            x = v2[:, 0]
            if w2[0] < best:
                best = float(w2[0])
                bx = x.copy()
                by = y.copy()
    return best, bx, by


def unvec_col(v, d):
    return v.reshape(d, d, order="F")


def state_stats_py(syms, states):
    """Projection of each pure state onto span[I, syms]: min eig and sum t^2.

    syms: (k, d, d) Hermitian stack; states: (N, d) unit vectors. Returns
    (min_eigs, coeff_sq) with coeff_sq[i] = sum_j <psi_i|s_j|psi_i>^2.
    """
    d = states.shape[1]
    t = np.einsum("na,jab,nb->nj", states.conj(), syms, states).real
    coeff_sq = np.sum(t * t, axis=1)
    mats = (np.eye(d)[None, :, :] + np.tensordot(t, syms, axes=(1, 0))) / d
    mins = np.linalg.eigvalsh(mats)[:, 0]
    return mins, coeff_sq


# ---------------------------------------------------------------- numba ----

if HAVE_NUMBA:

    @njit(cache=True)
    def _herm_jit(m):
        n = m.shape[0]
        out = np.empty((n, n), dtype=np.complex128)
        for i in range(n):
            for j in range(n):
                out[i, j] = 0.5 * (m[i, j] + np.conj(m[j, i]))
        return out

    @njit(cache=True)
    def psd_project_jit(m):
        w, v = np.linalg.eigh(_herm_jit(m))
        proj = (v * np.maximum(w, 0.0)) @ np.conj(v).T
        return proj, w[0]

    @njit(cache=True)
    def partial_transpose_jit(m, d):
        out = np.empty_like(m)
        for i in range(d):
            for a in range(d):
                for j in range(d):
                    for b in range(d):
                        out[i * d + a, j * d + b] = m[i * d + b, j * d + a]
        return out

    @njit(cache=True)
    def alt_decompose_jit(c, d, max_iters, improve_tol):
        a, _ = psd_project_jit(c)
        b = np.zeros_like(c)
        hist = np.empty(max_iters, dtype=np.float64)
        prev = np.inf
        dist = np.inf
        iters = 0
        converged = False
        for it in range(1, max_iters + 1):
            iters = it
            a, _ = psd_project_jit(c - partial_transpose_jit(b, d))
            b, _ = psd_project_jit(partial_transpose_jit(c - a, d))
            dist = np.linalg.norm(c - a - partial_transpose_jit(b, d))
            hist[it - 1] = dist
            if prev - dist < improve_tol:
                converged = True
                break
            prev = dist
        return a, b, dist, iters, converged, hist[:iters].copy()

    @njit(cache=True)
    def feasibility_cycles_jit(rho, d, n_cycles):
        dd = d * d
        for _ in range(n_cycles):
            rho, _ = psd_project_jit(rho)
            ptr, _ = psd_project_jit(partial_transpose_jit(rho, d))
            rho = partial_transpose_jit(ptr, d)
            tr = 0.0
            for i in range(dd):
                tr += rho[i, i].real
            if tr > 1e-300:
                rho = rho / tr
            else:
                rho = np.zeros((dd, dd), dtype=np.complex128)
                for i in range(dd):
                    rho[i, i] = 1.0 / dd
        return rho

    @njit(cache=True)
    def _objective_jit(rho, c):
        dd = rho.shape[0]
        acc = 0.0
        for i in range(dd):
            for j in range(dd):
                acc += (rho[i, j] * c[j, i]).real
        return acc

    @njit(cache=True)
    def witness_descent_jit(c, d, rho0, max_iters, step0, cycles_per_step):
        rho = feasibility_cycles_jit(rho0.copy(), d, 10)
        best = rho.copy()
        best_obj = _objective_jit(rho, c)
        step = step0
        for _ in range(max_iters):
            cand = feasibility_cycles_jit(rho - step * c, d, cycles_per_step)
            obj = _objective_jit(cand, c)
            if obj < best_obj - 1e-15:
                rho = cand
                best = cand.copy()
                best_obj = obj
            else:
                step *= 0.5
                if step < step0 * 1e-14:
                    break
                rho = best.copy()
        return best, best_obj

    @njit(cache=True)
    def probe_sweep_jit(smat, smat_adj, starts, n_refine, d):
        ns = starts.shape[0]
        best = np.inf
        bx = starts[0].copy()
        by = starts[0].copy()
        vbuf = np.empty(d * d, dtype=np.complex128)
        m = np.empty((d, d), dtype=np.complex128)
        for s in range(ns):
            x = starts[s].copy()
            for _ in range(n_refine):
                for j in range(d):
                    cj = np.conj(x[j])
                    for i in range(d):
                        vbuf[j * d + i] = x[i] * cj
                w1 = smat @ vbuf
                for j in range(d):
                    for i in range(d):
                        m[i, j] = w1[j * d + i]
                mh = _herm_jit(m)
                ew, ev = np.linalg.eigh(mh)
                y = np.ascontiguousarray(ev[:, 0])
                if ew[0] < best:
                    best = ew[0]
                    bx = x.copy()
                    by = y.copy()
                for j in range(d):
                    cj = np.conj(y[j])
                    for i in range(d):
                        vbuf[j * d + i] = y[i] * cj
                w2 = smat_adj @ vbuf
                for j in range(d):
                    for i in range(d):
                        m[i, j] = w2[j * d + i]
                mh = _herm_jit(m)
                ew2, ev2 = np.linalg.eigh(mh)
                x = np.ascontiguousarray(ev2[:, 0])
                if ew2[0] < best:
                    best = ew2[0]
                    bx = x.copy()
                    by = y.copy()
        return best, bx, by

    @njit(cache=True)
    def state_stats_jit(syms, states):
        n = states.shape[0]
        k = syms.shape[0]
        d = states.shape[1]
        mins = np.empty(n, dtype=np.float64)
        coeff_sq = np.empty(n, dtype=np.float64)
        m = np.empty((d, d), dtype=np.complex128)
        for idx in range(n):
            psi = states[idx]
            for a in range(d):
                for b in range(d):
                    m[a, b] = 0.0
            for a in range(d):
                m[a, a] = 1.0 / d
            s2 = 0.0
            for j in range(k):
                acc = 0.0 + 0.0j
                for a in range(d):
                    row = 0.0 + 0.0j
                    for b in range(d):
                        row += syms[j, a, b] * psi[b]
                    acc += np.conj(psi[a]) * row
                t = acc.real
                s2 += t * t
                scale = t / d
                for a in range(d):
                    for b in range(d):
                        m[a, b] += scale * syms[j, a, b]
            w, _ = np.linalg.eigh(m)
            mins[idx] = w[0]
            coeff_sq[idx] = s2
        return mins, coeff_sq


# -------------------------------------------------------------- binding ----

if NUMBA_ACTIVE:
    psd_project = psd_project_jit
    partial_transpose = partial_transpose_jit
    alt_decompose = alt_decompose_jit
    feasibility_cycles = feasibility_cycles_jit
    witness_descent = witness_descent_jit
    probe_sweep = probe_sweep_jit
    state_stats = state_stats_jit
    BACKEND = "numba"
else:
    psd_project = psd_project_py
    partial_transpose = partial_transpose_py
    alt_decompose = alt_decompose_py
    feasibility_cycles = feasibility_cycles_py
    witness_descent = witness_descent_py
    probe_sweep = probe_sweep_py
    state_stats = state_stats_py
    BACKEND = "numpy"
