"""Independent reference computations used by the tests.

Nothing here calls into the code paths under test except for the data
(decompositions, labels) the oracles are asked to check.
"""

import itertools

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = [I2, X, Y, Z]
AXES = {"X": X, "Y": Y, "Z": Z}


def rotation(axis, angle):
    """Closed form cos(θ/2) I - i sin(θ/2) σ."""
    if axis == "I":
        return I2.copy()
    return np.cos(angle / 2) * I2 - 1j * np.sin(angle / 2) * AXES[axis]


def kraus_ptm(kraus):
    """PTM of a Kraus channel by conjugating all four basis elements."""
    out = np.zeros((4, 4))
    for j, bj in enumerate(PAULI):
        image = sum(k @ bj @ k.conj().T for k in kraus)
        for i, bi in enumerate(PAULI):
            out[i, j] = 0.5 * np.trace(bi @ image).real
    return out


def random_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_kraus(rng, rank=3):
    z = rng.normal(size=(2 * rank, 2)) + 1j * rng.normal(size=(2 * rank, 2))
    v, _ = np.linalg.qr(z)
    return [v[2 * k : 2 * k + 2, :] for k in range(rank)]


def random_channel(rng, rank=3):
    return kraus_ptm(random_kraus(rng, rank))


def weak_channel(rng, strength=0.05):
    """Random CPTP channel close to the identity (not necessarily unital)."""
    u = random_unitary(rng)
    other = random_kraus(rng, 2)
    # mix a small random channel into a small random unitary rotation
    h = u - u.conj().T
    small_u = _expm_antiherm(0.1 * strength * h)
    ks = [np.sqrt(1 - strength) * small_u] + [np.sqrt(strength) * k for k in other]
    return kraus_ptm(ks)


def _expm_antiherm(a):
    w, v = np.linalg.eig(a)
    return v @ np.diag(np.exp(w)) @ np.linalg.inv(v)


def random_pauli_diagonal(rng, max_infidelity=0.01):
    """Pauli channel with infidelity uniform in (0, max_infidelity]."""
    r = rng.uniform(0, max_infidelity)
    px, py, pz = rng.dirichlet([1, 1, 1]) * 1.5 * r
    return 1 - 2 * (py + pz), 1 - 2 * (px + pz), 1 - 2 * (px + py)


def apply_dephasing(rho, alpha):
    return (1 + alpha) / 2 * rho + (1 - alpha) / 2 * Z @ rho @ Z


def density_survival_dephasing(pulse_strings, alpha, flip):
    """Survival from explicit 2x2 density-matrix evolution.

    ``pulse_strings`` lists, per gate, the pulse list actually applied; each
    pulse is ``(axis, signed_angle, noisy)`` and noisy pulses are followed
    by Z-dephasing.
    """
    rho = np.array([[1, 0], [0, 0]], dtype=complex)
    for pulses in pulse_strings:
        for axis, angle, noisy in pulses:
            u = rotation(axis, angle)
            rho = u @ rho @ u.conj().T
            if noisy:
                rho = apply_dephasing(rho, alpha)
    proj = np.diag([1, 0]) if flip == 0 else np.diag([0, 1])
    return float(np.trace(proj @ rho).real)


def pulse_realizations(decomposition):
    """All (sign-resolved) pulse lists of a decomposition, equally likely."""
    options = []
    for p in decomposition.pulses:
        if p.is_pi:
            options.append([(p.axis, np.pi, p.noisy), (p.axis, -np.pi, p.noisy)])
        else:
            options.append([(p.axis, p.angle, p.noisy)])
    return [list(c) for c in itertools.product(*options)]


def enumerate_aggregate(labels, m, mul):
    """Exact law of the aggregate circuit by enumerating all ``|labels|^m`` words."""
    counts = np.zeros(24)
    for word in itertools.product(labels, repeat=m):
        c = 0
        for g in word:
            c = mul[g][c]
        counts[c] += 1
    return counts / len(labels) ** m
