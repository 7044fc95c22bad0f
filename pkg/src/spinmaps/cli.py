"""Command line front end.

Subcommands
    verify         algebra axioms: Pauli relations, CAR, spin system, factor
    project        projection invariants plus sampled positivity
    classify       CP / co-CP / positivity / decomposability of the reduced map
    sweep          classification quantities over a time grid, written as CSV
    reversibility  closure of the factor span under symmetrized words
    witness        non-decomposability certificate for the reduced map

Every subcommand accepts --config (JSON, grammar below) and flags that
override it: --n-sites, --potential, --t-grid, --seed, --out, --jobs.
Outputs land in the output directory: report.json always, sweep.csv for
sweeps. Writes are atomic (temp file, then rename).

Config grammar (all keys optional):

    {
      "n_sites": 3,
      "potential": {"kind": "ising_transverse", "J": 1.0, "h": 1.0},
      "time_grid": [0.0, 0.5, 1.0],
      "seed": 7,
      "analyses": ["classify"],
      "output_dir": "out",
      "jobs": 1,
      "max_word_length": 5,
      "n_state_samples": 2000,
      "max_sites": 6,
      "tolerances": {"dist_tol": 1e-6}
    }

A custom potential uses kind "custom" with explicit Hermitian terms,
complex entries as [re, im] pairs:

    "potential": {"kind": "custom",
                  "terms": [{"sites": [0, 1],
                             "matrix": [[[1,0],[0,0],...], ...]}]}

report.json:

    {"model": {"n_sites": ..., "potential": {"kind": ..., "params": ...}},
     "checks": [{"name", "verdict", "values", "tol", "runtime_ms"}, ...],
     "certificates": {"witness": {"rho": [[re,im], ...],  # row-major
                                  "objective": ..., "min_eig": ...,
                                  "min_eig_pt": ...}},
     "meta": {"seed": ..., "version": ..., "backend": ..., "analyses": [...]}}

Check verdicts: "pass"/"fail" for assertion-style checks, "true"/"false"
for classification facts, "unknown" for an inconclusive decomposability
verdict, "error" for a numerical failure, and the reversibility verdicts
verbatim. Exit status: 0 normally, 1 if any verdict is "fail" or
"error", 2 on configuration errors. "false" and "non_reversible" are
measurements, not failures.

sweep.csv: header
    t,choi_min_eig,positivity_probe_min,decomp_distance,witness_objective
one row per grid point, 17 significant digits, "\n" line endings. The
witness_objective column always reports the measured objective of the
hardened candidate state, whether or not it certifies anything (for a
decomposable point it sits near zero).

Two runs with the same config and seed produce byte-identical CSV and a
report.json that differs at most in runtime_ms.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import __version__
from . import _kernels as K
from .analysis import (
    classify,
    decomposability_project,
    positivity_probe,
    witness_search,
)
from .chain import ChainConfig, Region, pauli
from .config import DEFAULT_TOLERANCES, Tolerances
from .dynamics import (
    Potential,
    evolve_map,
    hamiltonian,
    reduced_map,
    standard_potential,
)
from .fermion import (
    SpinSystemError,
    annihilation,
    build_spin_factor,
    jw_spin_system,
    majorana,
    reversibility_check,
    sigma_pm,
    verify_spin_system,
)
from .projection import build_projection
from .superop import choi, partial_transpose, vec

CSV_HEADER = "t,choi_min_eig,positivity_probe_min,decomp_distance,witness_objective"

ANALYSES = ("verify_algebra", "project", "classify", "sweep", "reversibility", "witness")

_SUBCOMMAND_ANALYSIS = {
    "verify": "verify_algebra",
    "project": "project",
    "classify": "classify",
    "sweep": "sweep",
    "reversibility": "reversibility",
    "witness": "witness",
}

_REVERSIBILITY_NOTE = (
    "verdict reflects the concrete operator span of this representation: "
    "families of at most three anticommuting symmetries never escape, while "
    "four or more escape at symmetrized words of four distinct generators"
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    n_sites: int = 3
    potential_kind: str = "ising_transverse"
    potential_params: dict = field(default_factory=lambda: {"J": 1.0, "h": 0.0})
    custom_terms: tuple = ()  # ((sites, matrix), ...) for kind "custom"
    time_grid: tuple[float, ...] = ()
    seed: int = 0
    analyses: tuple[str, ...] = ("classify",)
    output_dir: str = "."
    jobs: int = 1
    max_word_length: int = 5
    n_state_samples: int = 2000
    max_sites: int = 6
    tolerances: Tolerances = DEFAULT_TOLERANCES


# ------------------------------------------------------------- parsing ----

def _parse_potential_flag(text: str) -> tuple[str, dict]:
    kind, _, rest = text.partition(":")
    kind = kind.strip()
    params: dict = {}
    if rest:
        for tok in rest.split(","):
            tok = tok.strip()
            if not tok:
                continue
            key, _, val = tok.partition("=")
            if not _ or not key.strip():
                raise ConfigError(f"bad potential parameter {tok!r}; use J=1,h=0.5")
            try:
                params[key.strip()] = float(val)
            except ValueError as exc:
                raise ConfigError(f"bad potential parameter {tok!r}: {exc}") from exc
    return kind, params


def _parse_grid(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid {text!r} must be start:stop:step or a comma list")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError as exc:
            raise ConfigError(f"bad grid {text!r}: {exc}") from exc
        if step <= 0:
            raise ConfigError(f"grid step must be positive, got {step}")
        if stop < start:
            raise ConfigError(f"grid stop {stop} below start {start}")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(start + k * step for k in range(n))
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise ConfigError(f"bad grid {text!r}: {exc}") from exc


def _json_to_matrix(rows: Any) -> np.ndarray:
    try:
        arr = np.array(
            [[complex(cell[0], cell[1]) for cell in row] for row in rows],
            dtype=np.complex128,
        )
    except (TypeError, IndexError) as exc:
        raise ConfigError(f"bad matrix entry in custom term: {exc}") from exc
    return arr


def load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path} must be a JSON object")
    return raw


def build_run_config(raw: dict, overrides: dict) -> RunConfig:
    known = {
        "n_sites", "potential", "time_grid", "seed", "analyses", "output_dir",
        "jobs", "max_word_length", "n_state_samples", "max_sites", "tolerances",
    }
    bad = set(raw) - known
    if bad:
        raise ConfigError(f"unknown config keys: {sorted(bad)}")

    merged: dict = {}
    pot = raw.get("potential", {})
    if not isinstance(pot, dict):
        raise ConfigError("potential must be an object")
    kind = pot.get("kind", "ising_transverse")
    params = {k: float(v) for k, v in pot.items() if k not in ("kind", "terms")}
    custom_terms: list = []
    if "terms" in pot:
        if kind != "custom":
            raise ConfigError('explicit "terms" require potential kind "custom"')
        for entry in pot["terms"]:
            try:
                sites = tuple(int(s) for s in entry["sites"])
                matrix = _json_to_matrix(entry["matrix"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"bad custom term {entry!r}: {exc}") from exc
            custom_terms.append((sites, matrix))
    if kind == "custom" and not custom_terms:
        raise ConfigError('potential kind "custom" needs a nonempty "terms" list')
    if kind != "custom" and kind not in ("ising_transverse", "xy", "heisenberg"):
        raise ConfigError(f"unknown potential kind {kind!r}")

    merged["potential_kind"] = kind
    merged["potential_params"] = params
    merged["custom_terms"] = tuple(custom_terms)

    if "n_sites" in raw:
        merged["n_sites"] = int(raw["n_sites"])
    if "time_grid" in raw:
        grid = raw["time_grid"]
        if isinstance(grid, str):
            merged["time_grid"] = _parse_grid(grid)
        else:
            merged["time_grid"] = tuple(float(t) for t in grid)
    if "seed" in raw:
        merged["seed"] = int(raw["seed"])
    if "analyses" in raw:
        analyses = tuple(raw["analyses"])
        unknown = set(analyses) - set(ANALYSES)
        if unknown:
            raise ConfigError(f"unknown analyses: {sorted(unknown)}")
        merged["analyses"] = analyses
    if "output_dir" in raw:
        merged["output_dir"] = str(raw["output_dir"])
    if "jobs" in raw:
        merged["jobs"] = int(raw["jobs"])
    if "max_word_length" in raw:
        merged["max_word_length"] = int(raw["max_word_length"])
    if "n_state_samples" in raw:
        merged["n_state_samples"] = int(raw["n_state_samples"])
    if "max_sites" in raw:
        merged["max_sites"] = int(raw["max_sites"])
    if "tolerances" in raw:
        if not isinstance(raw["tolerances"], dict):
            raise ConfigError("tolerances must be an object")
        try:
            merged["tolerances"] = DEFAULT_TOLERANCES.override(**raw["tolerances"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    merged.update(overrides)
    if merged.get("jobs", 1) < 1:
        raise ConfigError("jobs must be >= 1")
    try:
        return RunConfig(**merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def _potential(cfg: RunConfig, chain: ChainConfig) -> Potential:
    if cfg.potential_kind == "custom":
        terms = {Region(sites): mat for sites, mat in cfg.custom_terms}
        return Potential(terms=terms, kind="custom", params=cfg.potential_params)
    params = dict(cfg.potential_params)
    bad = set(params) - {"J", "h"}
    if bad:
        raise ConfigError(
            f"potential {cfg.potential_kind!r} takes J and h, got {sorted(bad)}"
        )
    return standard_potential(
        cfg.potential_kind, chain, J=params.get("J", 1.0), h=params.get("h", 0.0)
    )


# -------------------------------------------------------------- checks ----

def _check(name: str, verdict: str, values: dict, tol: float | None, ms: float) -> dict:
    return {
        "name": name,
        "verdict": verdict,
        "values": values,
        "tol": tol,
        "runtime_ms": round(ms, 3),
    }


def _timed_check(name, tol_value, fn) -> dict:
    t0 = time.perf_counter()
    try:
        verdict, values = fn()
    except Exception as exc:  # noqa: BLE001 - report and keep going
        ms = (time.perf_counter() - t0) * 1e3
        return _check(name, "error", {"message": str(exc)}, tol_value, ms)
    ms = (time.perf_counter() - t0) * 1e3
    return _check(name, verdict, values, tol_value, ms)


def _verify_algebra(cfg: RunConfig, chain: ChainConfig) -> list[dict]:
    tol = cfg.tolerances
    checks = []

    def pauli_relations():
        worst = 0.0
        eye = np.eye(2)
        for i in range(1, 4):
            for j in range(1, 4):
                anti = pauli(i) @ pauli(j) + pauli(j) @ pauli(i)
                want = 2.0 * eye if i == j else np.zeros((2, 2))
                worst = max(worst, float(np.linalg.norm(anti - want)))
        worst = max(
            worst,
            float(np.linalg.norm(pauli(1) @ pauli(2) @ pauli(3) + 1j * eye)),
        )
        sp, sm = sigma_pm(+1), sigma_pm(-1)
        worst = max(worst, float(np.linalg.norm(sp @ sp)))
        worst = max(worst, float(np.linalg.norm(sm @ sm)))
        worst = max(worst, float(np.linalg.norm(sp @ sm + sm @ sp - eye)))
        worst = max(worst, float(np.linalg.norm(sp @ sm - sm @ sp + pauli(3))))
        verdict = "pass" if worst <= tol.algebra_tol else "fail"
        return verdict, {"max_residual": worst}

    def car():
        ops = [annihilation(x, chain) for x in range(chain.n_sites)]
        eye = np.eye(chain.dim)
        worst = 0.0
        for x, ax in enumerate(ops):
            for y, ay in enumerate(ops):
                worst = max(worst, float(np.linalg.norm(ax @ ay + ay @ ax)))
                want = eye if x == y else np.zeros_like(eye)
                adag = ay.conj().T
                worst = max(worst, float(np.linalg.norm(ax @ adag + adag @ ax - want)))
        verdict = "pass" if worst <= tol.algebra_tol else "fail"
        return verdict, {"max_residual": worst, "n_modes": chain.n_sites}

    def spin_system():
        mats = [majorana(j, chain) for j in range(2 * chain.n_sites)]
        try:
            verify_spin_system(mats, tol)
        except SpinSystemError as exc:
            return "fail", {"message": str(exc)}
        worst = 0.0
        eye = np.eye(chain.dim)
        for i, a in enumerate(mats):
            worst = max(worst, float(np.linalg.norm(a - a.conj().T)))
            worst = max(worst, float(np.linalg.norm(a @ a - eye)))
            for b in mats[i + 1:]:
                worst = max(worst, float(np.linalg.norm(a @ b + b @ a)))
        return "pass", {"max_residual": worst, "n_generators": 2 * chain.n_sites}

    def spin_factor():
        try:
            factor = build_spin_factor(jw_spin_system(chain, tol), tol)
        except SpinSystemError as exc:
            return "fail", {"message": str(exc)}
        return "pass", {"basis_size": len(factor), "dim": factor.dim}

    checks.append(_timed_check("pauli_relations", tol.algebra_tol, pauli_relations))
    checks.append(_timed_check("car", tol.algebra_tol, car))
    checks.append(_timed_check("spin_system", tol.algebra_tol, spin_system))
    checks.append(_timed_check("spin_factor", tol.algebra_tol, spin_factor))
    return checks


def _project_checks(cfg: RunConfig, chain: ChainConfig) -> list[dict]:
    tol = cfg.tolerances
    factor = build_spin_factor(jw_spin_system(chain, tol), tol)
    proj = build_projection(factor, tol)
    mat = proj.as_superop().mat
    d = chain.dim
    checks = []

    def invariants():
        eye_vec = vec(np.eye(d))
        devs = {
            "idempotent": float(np.linalg.norm(mat @ mat - mat)),
            "unital": float(np.linalg.norm(proj.apply(np.eye(d)) - np.eye(d))),
            "trace_preserving": float(np.linalg.norm(mat.conj().T @ eye_vec - eye_vec)),
            "selfadjoint": float(np.linalg.norm(mat - mat.conj().T)),
        }
        worst = max(devs.values())
        verdict = "pass" if worst <= tol.herm_tol else "fail"
        devs["max_residual"] = worst
        return verdict, devs

    def range_check():
        worst = 0.0
        for e in factor.basis:
            worst = max(worst, float(np.linalg.norm(proj.apply(e) - e)))
        verdict = "pass" if worst <= tol.herm_tol else "fail"
        return verdict, {"max_residual": worst}

    def positivity_sample():
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(901,)))
        n = cfg.n_state_samples
        z = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
        states = z / np.linalg.norm(z, axis=1, keepdims=True)
        syms = np.ascontiguousarray(np.stack(factor.basis[1:]))
        mins, coeff_sq = K.state_stats(syms, states)
        values = {
            "n_states": n,
            "min_eig": float(np.min(mins)),
            "max_coeff_sq": float(np.max(coeff_sq)),
        }
        ok = values["min_eig"] >= -1e-12 and values["max_coeff_sq"] <= 1.0 + 1e-12
        return ("pass" if ok else "fail"), values

    checks.append(_timed_check("projection_invariants", tol.herm_tol, invariants))
    checks.append(_timed_check("projection_range", tol.herm_tol, range_check))
    checks.append(_timed_check("projection_positivity_sample", 1e-12, positivity_sample))
    return checks


def _reduced_superop(cfg: RunConfig, chain: ChainConfig, t: float | None):
    tol = cfg.tolerances
    factor = build_spin_factor(jw_spin_system(chain, tol), tol)
    proj = build_projection(factor, tol)
    if t is None:
        return proj.as_superop()
    pot = _potential(cfg, chain)
    h = hamiltonian(pot, chain)
    return reduced_map(proj, evolve_map(h, t, tol))


def _classify_checks(cfg: RunConfig, chain: ChainConfig) -> tuple[list[dict], dict]:
    tol = cfg.tolerances
    targets: list[tuple[str, float | None]] = (
        [("", None)]
        if not cfg.time_grid
        else [(f"@t={t:g}", t) for t in cfg.time_grid]
    )
    checks: list[dict] = []
    certificates: dict = {}
    for idx, (suffix, t) in enumerate(targets):
        s = _reduced_superop(cfg, chain, t)
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(idx,)))
        report = classify(s, tol, rng)
        for rec in report.checks:
            checks.append(
                _check(rec.name + suffix, rec.verdict, rec.values, rec.tol, rec.runtime_ms)
            )
        if report.witness is not None and "witness" not in certificates:
            certificates["witness"] = _serialize_witness(report.witness)
    return checks, certificates


def _serialize_witness(w) -> dict:
    flat = w.rho.reshape(-1)
    return {
        "rho": [[float(z.real), float(z.imag)] for z in flat],
        "objective": float(w.objective),
        "min_eig": float(w.min_eig_rho),
        "min_eig_pt": float(w.min_eig_rho_pt),
    }


def _reversibility_checks(cfg: RunConfig, chain: ChainConfig) -> list[dict]:
    tol = cfg.tolerances

    def check():
        factor = build_spin_factor(jw_spin_system(chain, tol), tol)
        report = reversibility_check(factor, cfg.max_word_length, tol)
        values = {
            "violating_word": list(report.violating_word),
            "residual_norm": report.residual_norm,
            "max_word_length": report.max_word_length,
            "n_generators": 2 * chain.n_sites,
            "note": _REVERSIBILITY_NOTE,
        }
        return report.verdict, values

    return [_timed_check("reversibility", tol.closure_tol, check)]


def _witness_checks(cfg: RunConfig, chain: ChainConfig) -> tuple[list[dict], dict]:
    tol = cfg.tolerances
    t = cfg.time_grid[0] if cfg.time_grid else None
    certificates: dict = {}

    def check():
        s = _reduced_superop(cfg, chain, t)
        cm = choi(s)
        dec = decomposability_project(cm, tol)
        values: dict = {
            "distance": dec.distance,
            "iterations": dec.iterations,
            "converged": dec.converged,
        }
        if t is not None:
            values["t"] = t
        if dec.distance <= tol.dist_tol:
            values["message"] = "map is decomposable; no witness exists"
            return "false", values
        residual = cm.mat - dec.a - partial_transpose(dec.b, cm.d)
        out = witness_search(cm, residual, tol)
        values["objective"] = out.objective
        values["min_eig"] = out.min_eig_rho
        values["min_eig_pt"] = out.min_eig_rho_pt
        if not out.valid:
            values["message"] = (
                "distance exceeds dist_tol but the witness search did not "
                "produce a verifiable certificate"
            )
            return "fail", values
        certificates["witness"] = _serialize_witness(out)
        return "true", values

    return [_timed_check("witness", tol.witness_margin, check)], certificates


# --------------------------------------------------------------- sweep ----

def _sweep_point(args: tuple) -> tuple:
    (n_sites, max_sites, kind, params, custom_terms, tol, seed, index, t) = args
    chain = ChainConfig(n_sites, max_sites)
    cfg = RunConfig(
        n_sites=n_sites,
        potential_kind=kind,
        potential_params=params,
        custom_terms=custom_terms,
        max_sites=max_sites,
        tolerances=tol,
        seed=seed,
    )
    s = _reduced_superop(cfg, chain, t)
    cm = choi(s)
    choi_min = float(np.linalg.eigvalsh((cm.mat + cm.mat.conj().T) / 2.0)[0])
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    probe = positivity_probe(s, tol, rng)
    dec = decomposability_project(cm, tol)
    residual = cm.mat - dec.a - partial_transpose(dec.b, cm.d)
    out = witness_search(cm, residual, tol)
    return (t, choi_min, probe.min_value, dec.distance, out.objective)


def _sweep(cfg: RunConfig, chain: ChainConfig) -> tuple[list[dict], list[tuple]]:
    if not cfg.time_grid:
        raise ConfigError("sweep needs a nonempty time grid (--t-grid or time_grid)")
    payloads = [
        (
            cfg.n_sites,
            cfg.max_sites,
            cfg.potential_kind,
            cfg.potential_params,
            cfg.custom_terms,
            cfg.tolerances,
            cfg.seed,
            i,
            t,
        )
        for i, t in enumerate(cfg.time_grid)
    ]
    t0 = time.perf_counter()
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_sweep_point, payloads))
    else:
        rows = [_sweep_point(p) for p in payloads]
    ms = (time.perf_counter() - t0) * 1e3
    values = {
        "points": len(rows),
        "jobs": cfg.jobs,
        "max_choi_min_eig": max(r[1] for r in rows),
        "max_distance": max(r[3] for r in rows),
        "csv": "sweep.csv",
    }
    return [_check("sweep", "pass", values, None, ms)], rows


# ----------------------------------------------------------------- run ----

def run(cfg: RunConfig) -> tuple[dict, list[tuple] | None]:
    """Execute the configured analyses; returns (report, sweep rows or None)."""
    chain = ChainConfig(cfg.n_sites, cfg.max_sites)
    checks: list[dict] = []
    certificates: dict = {}
    rows: list[tuple] | None = None
    for analysis in cfg.analyses:
        if analysis == "verify_algebra":
            checks.extend(_verify_algebra(cfg, chain))
        elif analysis == "project":
            checks.extend(_project_checks(cfg, chain))
        elif analysis == "classify":
            cls_checks, certs = _classify_checks(cfg, chain)
            checks.extend(cls_checks)
            certificates.update(certs)
        elif analysis == "reversibility":
            checks.extend(_reversibility_checks(cfg, chain))
        elif analysis == "witness":
            w_checks, certs = _witness_checks(cfg, chain)
            checks.extend(w_checks)
            certificates.update(certs)
        elif analysis == "sweep":
            sweep_checks, rows = _sweep(cfg, chain)
            checks.extend(sweep_checks)
        else:  # pragma: no cover - guarded at parse time
            raise ConfigError(f"unknown analysis {analysis!r}")
    if cfg.potential_kind == "custom":
        eff_params = dict(cfg.potential_params)
        eff_params["n_terms"] = len(cfg.custom_terms)
    else:
        eff_params = {
            "J": float(cfg.potential_params.get("J", 1.0)),
            "h": float(cfg.potential_params.get("h", 0.0)),
        }
    report = {
        "model": {
            "n_sites": cfg.n_sites,
            "potential": {
                "kind": cfg.potential_kind,
                "params": eff_params,
            },
        },
        "checks": checks,
        "certificates": certificates,
        "meta": {
            "seed": cfg.seed,
            "version": __version__,
            "backend": K.BACKEND,
            "analyses": list(cfg.analyses),
        },
    }
    return report, rows


def _json_default(obj):
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_csv(rows: Sequence[tuple]) -> str:
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(",".join(f"{float(v):.17g}" for v in row))
    return "\n".join(lines) + "\n"


def emit_report(report: dict, rows: list[tuple] | None, output_dir: str) -> None:
    os.makedirs(output_dir, exist_ok=True)
    text = json.dumps(report, indent=2, default=_json_default) + "\n"
    _atomic_write(os.path.join(output_dir, "report.json"), text)
    if rows is not None:
        _atomic_write(os.path.join(output_dir, "sweep.csv"), format_csv(rows))


_FAIL_VERDICTS = ("fail", "error")


def exit_code(report: dict) -> int:
    if any(c["verdict"] in _FAIL_VERDICTS for c in report["checks"]):
        return 1
    return 0


# ---------------------------------------------------------------- main ----

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override it")
    common.add_argument("--n-sites", type=int, dest="n_sites")
    common.add_argument(
        "--potential",
        help='e.g. "ising_transverse:J=1,h=1" (kinds: ising_transverse, xy, heisenberg)',
    )
    common.add_argument(
        "--t-grid", dest="t_grid", help='"start:stop:step" or "t1,t2,..."'
    )
    common.add_argument("--seed", type=int)
    common.add_argument("--out", dest="output_dir", help="output directory")
    common.add_argument("--jobs", type=int, help="parallel workers for sweeps")
    common.add_argument(
        "--max-word-length", type=int, dest="max_word_length",
        help="longest symmetrized word for reversibility",
    )

    parser = argparse.ArgumentParser(
        prog="spinmaps",
        description="spin-chain symmetry algebras and map classification",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "verify": "check the algebra axioms (Pauli, CAR, spin system, factor)",
        "project": "projection invariants and sampled positivity",
        "classify": "CP / co-CP / positivity / decomposability of the reduced map",
        "sweep": "classification quantities over a time grid (writes sweep.csv)",
        "reversibility": "closure of the factor span under symmetrized words",
        "witness": "search a non-decomposability certificate",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        raw = load_config(ns.config) if ns.config else {}
        overrides: dict = {}
        if ns.n_sites is not None:
            overrides["n_sites"] = ns.n_sites
        if ns.potential is not None:
            kind, params = _parse_potential_flag(ns.potential)
            overrides["potential_kind"] = kind
            overrides["potential_params"] = params
            if kind == "custom":
                raise ConfigError("custom potentials need a config file")
        if ns.t_grid is not None:
            overrides["time_grid"] = _parse_grid(ns.t_grid)
        if ns.seed is not None:
            overrides["seed"] = ns.seed
        if ns.output_dir is not None:
            overrides["output_dir"] = ns.output_dir
        if ns.jobs is not None:
            overrides["jobs"] = ns.jobs
        if ns.max_word_length is not None:
            overrides["max_word_length"] = ns.max_word_length
        overrides["analyses"] = (_SUBCOMMAND_ANALYSIS[ns.command],)
        cfg = build_run_config(raw, overrides)
        report, rows = run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, SpinSystemError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    emit_report(report, rows, cfg.output_dir)
    for c in report["checks"]:
        print(f"{c['name']}: {c['verdict']}")
    out_path = os.path.join(cfg.output_dir, "report.json")
    print(f"report: {out_path}")
    if rows is not None:
        print(f"csv: {os.path.join(cfg.output_dir, 'sweep.csv')}")
    return exit_code(report)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
