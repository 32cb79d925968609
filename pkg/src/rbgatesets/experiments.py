"""Table builders behind the command-line interface.

Each function returns ``(header, rows)`` ready for :mod:`rbgatesets.io`.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from . import compilation, gatesets, theory
from .engine import GateLevelNoise, PulseNoise, RBConfig, build_noise, run_experiment
from .fitting import estimate_infidelity, fit_decay

MARKOV_HEADER = ["m", "label", "probability"]
TV_HEADER = ["m", "tv_uniform_c12", "tv_uniform_sqrtz_c12", "tv_uniform_c"]
DECOMP_HEADER = ["row", "gateset", "gate_label", "variant", "pulse_string", "noisy_count"]
SUMMARY_HEADER = ["row", "gateset", "convention", "mean_noisy_count", "table_value", "status"]
SWEEP_HEADER = [
    "model", "row", "r_C", "r_N", "n_C", "n_N", "r_C_over_n_C", "r_N_over_n_N", "ratio",
]
SPECTRAL_HEADER = ["context", "eigenvalue_index", "real", "imag"]
DATASET_HEADER = [
    "protocol", "pulse_row", "error_model", "m", "mean_survival", "stderr", "n_sequences", "shots",
]
FIT_HEADER = ["protocol", "pulse_row", "error_model", "A", "B", "p", "r", "residual", "ci_halfwidth"]


def markov_tables(max_m: int):
    if max_m < 1:
        raise ValueError("max_m must be >= 1")
    c12, sqrt_z = gatesets.design_subsets()
    u12, usz, uc = (gatesets.uniform_over(s) for s in (c12, sqrt_z, range(24)))
    t = gatesets.transition_matrix(gatesets.nist_labels())
    probs = gatesets.uniform_over(gatesets.nist_labels())
    dist_rows, tv_rows = [], []
    for m in range(1, max_m + 1):
        if m > 1:
            probs = probs @ t
        dist_rows.extend((m, lab, float(probs[lab])) for lab in range(24))
        tv_rows.append(
            (m, gatesets.total_variation(probs, u12), gatesets.total_variation(probs, usz),
             gatesets.total_variation(probs, uc))
        )
    return dist_rows, tv_rows


def decompose_tables(rows, gatesets_, convention=None):
    """Decompositions plus per-(row, gateset) comparison with the reference table."""
    decomp_rows, summary = [], []
    for row in rows:
        ps = compilation.pulse_set(row)
        for gs in gatesets_:
            conv = compilation.default_convention(gs, row) if convention is None else compilation.Convention(convention)
            table = compilation.decompose_gateset(gs, row, conv)
            for lab, variants in sorted(table.items()):
                for v, d in enumerate(variants):
                    decomp_rows.append((row, gs, lab, v, d.pulse_string, d.noisy_count))
            mean = compilation.mean_noisy_count(table)
            target = ps.target(gs)
            status = "PASS" if compilation.matches_table(mean, target) else "FAIL"
            summary.append((row, gs, conv.value, mean, target, status))
    return decomp_rows, summary


def simulate(cfg: RBConfig, threads: int = 1):
    ds = run_experiment(cfg, threads=threads)
    fix_b = 0.5 if cfg.randomized_recovery else None
    fit = fit_decay(ds, fix_B=fix_b, min_length=cfg.min_fit_length)
    row = "abstract" if cfg.pulse_row is None else cfg.pulse_row
    shots = "exact" if cfg.shots is None else cfg.shots
    data_rows = [
        (cfg.protocol, row, cfg.noise, m, mean, se, "all" if ds.exhaustive else n, shots)
        for m, mean, se, n in ds.rows()
    ]
    fit_rows = [(cfg.protocol, row, cfg.noise, fit.A, fit.B, fit.p, fit.r, fit.residual, fit.ci_halfwidth)]
    return ds, fit, data_rows, fit_rows


def sweep(models, rows, base: RBConfig | None = None, threads: int = 1):
    """r_C and r_N for every (error model, pulse row) pair."""
    base = base or RBConfig(average="exact")
    out = []
    for model in models:
        for row in rows:
            r = {}
            n = {}
            for protocol, gs in (("SRB", "C"), ("NIST", "N")):
                cfg = replace(base, protocol=protocol, pulse_row=row, noise=model, noise_params={})
                _, fit, _, _ = simulate(cfg, threads)
                r[gs] = estimate_infidelity(fit)
                n[gs] = compilation.mean_noisy_count(compilation.decompose_gateset(gs, row))
            lo, hi = sorted((r["C"], r["N"]))
            ratio = hi / lo if lo > 0 else float("inf")
            out.append((model, row, r["C"], r["N"], n["C"], n["N"], r["C"] / n["C"], r["N"] / n["N"], ratio))
    return out


def noise_for_spectral(gateset: str, noise: str, params: dict, row: int | None):
    """Expected noisy PTM for each gate of ``gateset``."""
    labels = gatesets.gateset_labels(gateset)
    ptms = gatesets.clifford_ptms()
    if noise == "ideal" and row is None:
        return {lab: ptms[lab] for lab in labels}, None
    if row is not None:
        pn = PulseNoise(row, compilation.error_model(noise, **params))
        return {lab: pn.ptm(lab, gateset) for lab in labels}, None
    gl = build_noise(RBConfig(noise=noise, noise_params=params))
    assert isinstance(gl, GateLevelNoise)
    ch = gl.channel
    return {lab: ch @ ptms[lab] for lab in labels}, ch


def spectral_rows(gateset: str, noise: str = "ideal", params: dict | None = None, row: int | None = None):
    impl, channel = noise_for_spectral(gateset, noise, params or {}, row)
    out = []
    vals = theory.spectrum(theory.averaged_superop(gateset, impl))
    out.extend(("averaged_superop", k, float(v.real), float(v.imag)) for k, v in enumerate(vals))
    if gateset == "N" and channel is not None:
        pauli = theory.twirl(channel, "P")
        x, y, z = pauli[1, 1], pauli[2, 2], pauli[3, 3]
        mvals = np.linalg.eigvals(theory.recursion_matrix(x, y, z))
        mvals = mvals[np.argsort(-np.abs(mvals))]
        out.extend(("recursion_matrix", k, float(v.real), float(v.imag)) for k, v in enumerate(mvals))
    p = theory.decay_eigenvalue(gateset, impl)
    res = theory.compute_L(gateset, impl, p)
    out.append(("decay_eigenvalue", 0, p, 0.0))
    out.append(("L_singular_spread", 0, res.singular_spread, 0.0))
    return out
