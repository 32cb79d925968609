"""Fitting ``A p^m + B`` to survival data.

The model is separable: for fixed ``p`` the amplitudes ``(A, B)`` follow from
linear least squares, so only ``p`` is searched.  A coarse grid of 64 seeds
over ``(0, 1]`` locates the basin, golden-section search refines it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DecayFit",
    "FitError",
    "UnidentifiableError",
    "InsufficientLengthsError",
    "fit_decay",
    "estimate_infidelity",
    "golden_section",
]

N_SEEDS = 64
_INV_PHI = (math.sqrt(5) - 1) / 2


class FitError(ValueError):
    pass


class UnidentifiableError(FitError):
    pass


class InsufficientLengthsError(FitError):
    pass


@dataclass(frozen=True)
class DecayFit:
    A: float
    B: float
    p: float
    residual: float
    ci_halfwidth: float

    @property
    def r(self) -> float:
        return estimate_infidelity(self)


def estimate_infidelity(fit: DecayFit | float) -> float:
    """``(1 - p) / 2`` for a single qubit."""
    p = fit.p if isinstance(fit, DecayFit) else float(fit)
    return (1.0 - p) / 2.0


def golden_section(f, lo: float, hi: float, xtol: float = 1e-15, max_iter: int = 200):
    """Minimize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    candidates = [(fc, c), (fd, d), (f(a), a), (f(b), b)]
    fx, x = min(candidates)
    return x, fx


def _solve(p, m, y, fix_b):
    """Best amplitudes and residual sum of squares at fixed ``p``."""
    pm = p**m
    if fix_b is None:
        design = np.column_stack([pm, np.ones_like(pm)])
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        a, b = float(coef[0]), float(coef[1])
    else:
        denom = float(pm @ pm)
        a = float(pm @ (y - fix_b)) / denom if denom > 0 else 0.0
        b = fix_b
    resid = y - (a * pm + b)
    return a, b, float(resid @ resid)


def fit_decay(ds, fix_B: float | None = None, min_length: int = 1) -> DecayFit:
    """Least-squares fit of ``A p^m + B``.

    ``ds`` is a :class:`~rbgatesets.engine.DecayDataset` or a pair
    ``(lengths, means)``.  Lengths below ``min_length`` are ignored.
    """
    if hasattr(ds, "lengths"):
        lengths, means = ds.lengths, ds.means
        stderrs = getattr(ds, "stderrs", None)
    else:
        lengths, means = ds
        stderrs = None
    m = np.asarray(lengths, dtype=float)
    y = np.asarray(means, dtype=float)
    keep = m >= min_length
    m, y = m[keep], y[keep]
    noise = 0.0 if stderrs is None else float(np.max(np.asarray(stderrs)[keep], initial=0.0))

    needed = 2 if fix_B is not None else 3
    if len(np.unique(m)) < needed:
        raise InsufficientLengthsError(
            f"need at least {needed} distinct lengths >= {min_length}, got {len(np.unique(m))}"
        )
    tol = max(1e-12, 2 * noise)
    flat = np.ptp(y) <= tol
    if flat and (fix_B is None or abs(float(np.mean(y)) - fix_B) <= tol):
        raise UnidentifiableError("survival data are constant; the decay rate is unconstrained")

    def objective(p):
        return _solve(p, m, y, fix_B)[2]

    seeds = 1.0 - np.exp(np.linspace(math.log(1e-7), math.log(0.999), N_SEEDS))[::-1]
    seeds = np.concatenate([seeds, [1.0]])
    values = [objective(p) for p in seeds]
    k = int(np.argmin(values))
    lo = seeds[k - 1] if k > 0 else 1e-9
    hi = seeds[k + 1] if k + 1 < len(seeds) else 1.0
    p, _ = golden_section(objective, float(lo), float(hi))
    a, b, ss = _solve(p, m, y, fix_B)

    n = len(m)
    n_params = 2 if fix_B is not None else 3
    ci = 0.0
    if n > n_params and ss > 0:
        pm = p**m
        cols = [pm, a * m * p ** (m - 1)]
        if fix_B is None:
            cols.insert(1, np.ones_like(m))
        jac = np.column_stack(cols)
        try:
            cov = np.linalg.inv(jac.T @ jac) * ss / (n - n_params)
            ci = 1.96 * math.sqrt(max(cov[-1, -1], 0.0))
        except np.linalg.LinAlgError:
            ci = math.inf
    return DecayFit(A=a, B=b, p=float(p), residual=math.sqrt(ss / n), ci_halfwidth=ci)
