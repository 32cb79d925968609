"""Single-qubit channels in the Pauli-Liouville (Pauli transfer matrix) picture.

Conventions used throughout the package:

* basis order (I, X, Y, Z), entries ``R[i, j] = tr(B_i Λ(B_j)) / 2``;
* a PTM acts on column vectors ``s = (tr ρ, tr Xρ, tr Yρ, tr Zρ)``, so a
  trace-preserving channel has first row ``(1, 0, 0, 0)``;
* ``compose(later, earlier)`` is the matrix product ``later @ earlier``.

Global phases never survive the conversion, so ``X_{+π}`` and ``X_{-π}`` give
the same PTM.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

__all__ = [
    "PAULIS",
    "pulse_unitary",
    "ptm_from_unitary",
    "compose",
    "compose_sequence",
    "infidelity",
    "pauli_diagonal",
    "depolarizing",
    "dephasing",
    "is_trace_preserving",
    "channels_equal",
    "zero_state",
    "basis_effect",
    "probability",
]

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, SIGMA_X, SIGMA_Y, SIGMA_Z)
_AXES = {"X": SIGMA_X, "Y": SIGMA_Y, "Z": SIGMA_Z}

CHANNEL_ATOL = 1e-9
_UNITARY_ATOL = 1e-8


def pulse_unitary(axis: str, angle: float) -> np.ndarray:
    """Rotation ``exp(-i angle/2 σ_axis)``; axis ``"I"`` gives the identity."""
    if not np.isfinite(angle):
        raise ValueError(f"pulse angle must be finite, got {angle!r}")
    if axis == "I":
        return I2.copy()
    try:
        sigma = _AXES[axis]
    except KeyError:
        raise ValueError(f"unknown pulse axis {axis!r}") from None
    return expm(-0.5j * angle * sigma)


def ptm_from_unitary(u) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {u.shape}")
    dev = np.max(np.abs(u.conj().T @ u - I2))
    if dev > _UNITARY_ATOL:
        raise ValueError(f"matrix is not unitary (max deviation {dev:.2e})")
    ud = u.conj().T
    out = np.empty((4, 4))
    for j, bj in enumerate(PAULIS):
        image = u @ bj @ ud
        for i, bi in enumerate(PAULIS):
            out[i, j] = 0.5 * np.trace(bi @ image).real
    return out


def compose(later: np.ndarray, earlier: np.ndarray) -> np.ndarray:
    """Channel that applies ``earlier`` first, then ``later``."""
    return later @ earlier


def compose_sequence(ptms) -> np.ndarray:
    """Compose PTMs given in time order (first applied first)."""
    out = np.eye(4)
    for r in ptms:
        out = r @ out
    return out


def infidelity(channel: np.ndarray) -> float:
    """Average gate infidelity to the identity, ``1/2 - (R_xx + R_yy + R_zz)/6``."""
    channel = np.asarray(channel)
    return 0.5 - (channel[1, 1] + channel[2, 2] + channel[3, 3]) / 6.0


def pauli_diagonal(x: float, y: float, z: float) -> np.ndarray:
    return np.diag([1.0, x, y, z])


def depolarizing(p: float) -> np.ndarray:
    return np.diag([1.0, p, p, p])


def dephasing(alpha: float) -> np.ndarray:
    """Z-dephasing ``diag(1, α, α, 1)``."""
    return np.diag([1.0, alpha, alpha, 1.0])


def is_trace_preserving(channel: np.ndarray, atol: float = 1e-12) -> bool:
    return bool(np.allclose(channel[0], [1.0, 0.0, 0.0, 0.0], rtol=0.0, atol=atol))


def channels_equal(a: np.ndarray, b: np.ndarray, atol: float = CHANNEL_ATOL) -> bool:
    return bool(np.allclose(a, b, rtol=0.0, atol=atol))


def zero_state() -> np.ndarray:
    """Pauli vector of ``|0><0|``."""
    return np.array([1.0, 0.0, 0.0, 1.0])


def basis_effect(bit: int = 0) -> np.ndarray:
    """Pauli vector of the projector ``|bit><bit|``."""
    return np.array([1.0, 0.0, 0.0, 1.0 if bit == 0 else -1.0])


def probability(effect: np.ndarray, state: np.ndarray) -> float:
    """``tr(E ρ)`` from Pauli vectors of the effect and the state."""
    return 0.5 * float(np.dot(effect, state))
