"""Analytical side of Clifford and NIST randomized benchmarking.

Covers twirls over the named gatesets, the 3x3 recursion that propagates the
Pauli-diagonal decay triple under NIST sampling, its spectrum, and the
16x16 averaged superoperator ``E[G ⊗ G̃]`` used for gate-dependent noise.

Vectorization is column-major, so ``(G ⊗ G̃) vec(L) = vec(G̃ L Gᵀ)``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .gatesets import clifford_ptms, gateset_labels

__all__ = [
    "twirl",
    "recursion_matrix",
    "recursion_states",
    "nist_decay_parameter",
    "perturbative_spectrum",
    "decay_components",
    "averaged_superop",
    "traceless_block",
    "spectrum",
    "nonzero_eigenvalues",
    "decay_eigenvalue",
    "compute_L",
    "LResult",
    "ConvergenceError",
]

PERTURBATIVE_RANGE = 0.2


class ConvergenceError(RuntimeError):
    pass


def _labels(gateset) -> tuple[int, ...]:
    return gateset_labels(gateset) if isinstance(gateset, str) else tuple(gateset)


def twirl(channel: np.ndarray, gateset="C") -> np.ndarray:
    """``mean over G of G⁻¹ Λ G`` with ideal gate PTMs."""
    ptms = clifford_ptms()
    labels = _labels(gateset)
    out = np.zeros((4, 4))
    for lab in labels:
        g = ptms[lab]
        out += g.T @ channel @ g
    return out / len(labels)


def recursion_matrix(x: float, y: float, z: float) -> np.ndarray:
    return 0.5 * np.array([[x, 0.0, z], [0.0, y, z], [x, y, 0.0]])


def recursion_states(x: float, y: float, z: float, m: int) -> np.ndarray:
    """Rows ``(x_k, y_k, z_k)`` for ``k = 0..m`` by direct scalar iteration."""
    out = np.empty((m + 1, 3))
    xk, yk, zk = 1.0, 1.0, 1.0
    out[0] = xk, yk, zk
    for k in range(1, m + 1):
        xk, yk, zk = (x * xk + z * zk) / 2, (y * yk + z * zk) / 2, (x * xk + y * yk) / 2
        out[k] = xk, yk, zk
    return out


def _cubic_roots(b: float, c: float, d: float) -> list[complex]:
    """Roots of ``t³ + b t² + c t + d`` in closed form."""
    shift = b / 3
    p = c - b * b / 3
    q = 2 * b**3 / 27 - b * c / 3 + d
    if abs(p) < 1e-300:
        t = -math.copysign(abs(q) ** (1 / 3), q)
        return [t - shift] * 3
    disc = (q / 2) ** 2 + (p / 3) ** 3
    if disc <= 0:
        # three real roots
        r = 2 * math.sqrt(-p / 3)
        arg = max(-1.0, min(1.0, 3 * q / (p * r)))
        phi = math.acos(arg) / 3
        return [r * math.cos(phi - 2 * math.pi * k / 3) - shift for k in range(3)]
    s = math.sqrt(disc)
    u = math.copysign(abs(-q / 2 + s) ** (1 / 3), -q / 2 + s)
    v = math.copysign(abs(-q / 2 - s) ** (1 / 3), -q / 2 - s)
    w = cmath.exp(2j * math.pi / 3)
    return [u + v - shift, u * w + v * w.conjugate() - shift, u * w.conjugate() + v * w - shift]


def nist_decay_parameter(x: float, y: float, z: float):
    """Exact spectrum of the recursion matrix.

    Returns ``(p_nist, (sub_1, sub_2))`` where ``p_nist`` is the eigenvalue of
    largest magnitude and the subleading pair is ordered by decreasing real
    part (near ``+1/2`` and ``-1/2`` for weak noise).
    """
    a, b, c = x / 2, y / 2, z / 2
    # det(λ - M) = λ³ - (a+b) λ² + (ab - bc - ac) λ + 2abc
    roots = _cubic_roots(-(a + b), a * b - b * c - a * c, 2 * a * b * c)
    roots = sorted(roots, key=lambda r: (-abs(r), -complex(r).real))
    lead = roots[0]
    if abs(complex(lead).imag) > 1e-12:
        raise ValueError("recursion matrix has no real dominant eigenvalue")
    lead = complex(lead).real
    rest = sorted(roots[1:], key=lambda r: -complex(r).real)
    rest = tuple(complex(r).real if abs(complex(r).imag) < 1e-12 else complex(r) for r in rest)
    if abs(1 - lead) > PERTURBATIVE_RANGE:
        warnings.warn(
            f"dominant eigenvalue {lead:.4f} is outside the perturbative regime",
            RuntimeWarning,
            stacklevel=2,
        )
    return lead, rest


def perturbative_spectrum(x: float, y: float, z: float) -> tuple[float, float, float]:
    """Second-order approximations of the three recursion eigenvalues."""
    return (x + y + z) / 3, (x + y) / 4, -(x + y + 4 * z) / 12


def decay_components(x: float, y: float, z: float):
    """Eigenvalues ``λ_k`` and vectors ``c_k`` with ``M^m (1,1,1) = Σ λ_k^m c_k``."""
    vals, vecs = np.linalg.eig(recursion_matrix(x, y, z))
    coeffs = np.linalg.solve(vecs, np.ones(3))
    order = np.argsort(-np.abs(vals))
    return vals[order], [vecs[:, k] * coeffs[k] for k in order]


NoisyImpl = Callable[[int], np.ndarray] | Mapping[int, np.ndarray]


def _noisy(impl, label):
    return impl[label] if isinstance(impl, Mapping) else impl(label)


def averaged_superop(gateset, noisy_impl: NoisyImpl | None = None) -> np.ndarray:
    """``mean over G of G ⊗ G̃`` (ideal factor first); ideal gates by default."""
    ptms = clifford_ptms()
    labels = _labels(gateset)
    out = np.zeros((16, 16))
    for lab in labels:
        g = ptms[lab]
        gt = g if noisy_impl is None else _noisy(noisy_impl, lab)
        out += np.kron(g, gt)
    return out / len(labels)


def traceless_block(gateset, noisy_impl: NoisyImpl | None = None) -> np.ndarray:
    """Restriction of the averaged superoperator to matrices supported on the
    Bloch block; an invariant subspace for trace-preserving noise."""
    ptms = clifford_ptms()
    labels = _labels(gateset)
    out = np.zeros((9, 9))
    for lab in labels:
        g = ptms[lab]
        gt = g if noisy_impl is None else _noisy(noisy_impl, lab)
        out += np.kron(g[1:, 1:], gt[1:, 1:])
    return out / len(labels)


def spectrum(a: np.ndarray) -> np.ndarray:
    """Eigenvalues sorted by decreasing magnitude, ties by decreasing real part."""
    vals = np.linalg.eigvals(a)
    order = np.lexsort((-vals.real, -np.round(np.abs(vals), 12)))
    return vals[order]


def nonzero_eigenvalues(a: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    vals = spectrum(a)
    return vals[np.abs(vals) > tol]


def decay_eigenvalue(gateset, noisy_impl: NoisyImpl | None = None) -> float:
    """Dominant eigenvalue of the Bloch block of ``E[G ⊗ G̃]``, i.e. the RB
    decay rate under gate-dependent noise."""
    vals = spectrum(traceless_block(gateset, noisy_impl))
    lead = vals[0]
    if abs(lead.imag) > 1e-10:
        raise ValueError("dominant decay eigenvalue is not real")
    return float(lead.real)


@dataclass(frozen=True)
class LResult:
    L: np.ndarray
    singular_spread: float
    iterations: int


def compute_L(gateset, noisy_impl: NoisyImpl, p: float, infidelity: float | None = None) -> LResult:
    """Fixed point of ``L ↦ Π E[G̃ L G⁻¹] Π / p`` started from ``Π``.

    ``Π = diag(0, 1, 1, 1)``.  Iterates until the relative change drops below
    1e-12 and at least ``ceil(-2 log r / log 2)`` steps have been taken
    (``r`` defaults to ``(1 - p) / 2``).  ``p`` must be the exact decay
    eigenvalue, otherwise the iterate drifts geometrically and a
    ``ConvergenceError`` is raised after ten times the prescribed depth.
    """
    if not 0 < p <= 1:
        raise ValueError(f"decay parameter must lie in (0, 1], got {p}")
    r = (1 - p) / 2 if infidelity is None else infidelity
    prescribed = 1 if r <= 0 else max(1, math.ceil(-2 * math.log(r) / math.log(2)))
    limit = 10 * max(prescribed, 8)
    ptms = clifford_ptms()
    labels = _labels(gateset)
    pairs = [(ptms[lab][1:, 1:], _noisy(noisy_impl, lab)[1:, 1:]) for lab in labels]
    block = np.eye(3)
    for k in range(1, limit + 1):
        nxt = sum(gt @ block @ g.T for g, gt in pairs) / (len(pairs) * p)
        change = np.max(np.abs(nxt - block)) / max(np.max(np.abs(nxt)), 1e-300)
        block = nxt
        if change < 1e-12 and k >= prescribed:
            break
    else:
        raise ConvergenceError(f"L did not converge within {limit} iterations")
    L = np.zeros((4, 4))
    L[1:, 1:] = block
    sv = np.linalg.svd(block, compute_uv=False)
    sv = sv[sv > 1e-12 * sv[0]]
    return LResult(L=L, singular_spread=float(sv[0] / sv[-1]), iterations=k)
