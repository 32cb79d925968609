"""The single-qubit Clifford group and the gate subsets used for benchmarking.

Clifford labels are canonical: ``label = 4 * s + p`` where ``s`` indexes the
coset representatives ``(I, X90, Y90, Z90, Z90·X90, X-90·Z-90)`` and ``p``
indexes the Paulis ``(I, X180, Y180, Z180)``.  The element with label ``4s+p``
applies the Pauli first and the coset representative second.  Products such
as ``Z90·X90`` are operator products (``X90`` acts first).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ptm import compose, ptm_from_unitary, pulse_unitary

__all__ = [
    "IDENTITY",
    "X180_LABEL",
    "GroupTable",
    "CircuitDistribution",
    "clifford_elements",
    "clifford_ptms",
    "group_table",
    "identify",
    "nist_elements",
    "nist_labels",
    "nist_factorizations",
    "design_subsets",
    "pauli_labels",
    "gateset_labels",
    "closure",
    "transition_matrix",
    "circuit_distribution",
    "uniform_over",
    "total_variation",
    "label_names",
]

_H = np.pi / 2
_PI = np.pi

# Coset representatives as unitaries; products are operator products.
_S_NAMES = ("I", "X90", "Y90", "Z90", "Z90.X90", "X-90.Z-90")
_S_UNITARIES = (
    pulse_unitary("I", 0.0),
    pulse_unitary("X", _H),
    pulse_unitary("Y", _H),
    pulse_unitary("Z", _H),
    pulse_unitary("Z", _H) @ pulse_unitary("X", _H),
    pulse_unitary("X", -_H) @ pulse_unitary("Z", -_H),
)
_P_NAMES = ("I", "X180", "Y180", "Z180")
_P_UNITARIES = (
    pulse_unitary("I", 0.0),
    pulse_unitary("X", _PI),
    pulse_unitary("Y", _PI),
    pulse_unitary("Z", _PI),
)
_Q_NAMES = ("X90", "X-90", "Y90", "Y-90")
_Q_UNITARIES = (
    pulse_unitary("X", _H),
    pulse_unitary("X", -_H),
    pulse_unitary("Y", _H),
    pulse_unitary("Y", -_H),
)

IDENTITY = 0
X180_LABEL = 1

MATCH_THRESHOLD = 1e-6


@lru_cache(maxsize=None)
def _elements() -> tuple[np.ndarray, ...]:
    ptms = []
    for s in _S_UNITARIES:
        for p in _P_UNITARIES:
            ptms.append(ptm_from_unitary(s @ p))
    for i, a in enumerate(ptms):
        for b in ptms[:i]:
            if np.max(np.abs(a - b)) < MATCH_THRESHOLD:
                raise RuntimeError("coset construction produced duplicate Clifford elements")
    if len(ptms) != 24:
        raise RuntimeError(f"expected 24 Clifford elements, got {len(ptms)}")
    for r in ptms:
        r.setflags(write=False)
    return tuple(ptms)


def clifford_elements() -> list[tuple[int, np.ndarray]]:
    """All 24 Clifford elements as ``(label, ptm)`` pairs in label order."""
    return list(enumerate(_elements()))


def clifford_ptms() -> tuple[np.ndarray, ...]:
    return _elements()


def identify(ptm: np.ndarray) -> int:
    """Label of the Clifford element nearest to ``ptm``.

    Raises ``ValueError`` if the nearest element differs by more than
    ``MATCH_THRESHOLD`` in any entry.
    """
    ptms = _elements()
    errs = [float(np.max(np.abs(ptm - r))) for r in ptms]
    best = int(np.argmin(errs))
    if errs[best] > MATCH_THRESHOLD:
        raise ValueError(f"channel is not a Clifford element (closest mismatch {errs[best]:.2e})")
    return best


@dataclass(frozen=True)
class GroupTable:
    """``mul[a, b]`` is the label of ``a ∘ b`` (``b`` applied first)."""

    mul: np.ndarray
    inv: np.ndarray

    def compose(self, later: int, earlier: int) -> int:
        return int(self.mul[later, earlier])

    def inverse(self, label: int) -> int:
        return int(self.inv[label])

    def product(self, labels) -> int:
        """Label of the aggregate circuit for labels given in time order."""
        out = IDENTITY
        for g in labels:
            out = int(self.mul[g, out])
        return out


@lru_cache(maxsize=None)
def group_table() -> GroupTable:
    ptms = _elements()
    mul = np.empty((24, 24), dtype=np.int64)
    for a, ra in enumerate(ptms):
        for b, rb in enumerate(ptms):
            mul[a, b] = identify(compose(ra, rb))
    inv = np.array([int(np.flatnonzero(mul[a] == IDENTITY)[0]) for a in range(24)])
    mul.setflags(write=False)
    inv.setflags(write=False)
    return GroupTable(mul=mul, inv=inv)


@lru_cache(maxsize=None)
def nist_factorizations() -> tuple[tuple[int, int, int], ...]:
    """The 16 ``(label, q_index, p_index)`` products ``Q ∘ P``.

    Every NIST label appears exactly twice since ``X90 ∘ X180`` and
    ``X-90 ∘ I`` (and similar pairs) coincide as channels.
    """
    out = []
    for qi, q in enumerate(_Q_UNITARIES):
        for pi, p in enumerate(_P_UNITARIES):
            out.append((identify(ptm_from_unitary(q @ p)), qi, pi))
    return tuple(out)


@lru_cache(maxsize=None)
def nist_labels() -> tuple[int, ...]:
    return tuple(sorted({lab for lab, _, _ in nist_factorizations()}))


def nist_elements() -> list[tuple[int, np.ndarray]]:
    ptms = _elements()
    return [(lab, ptms[lab]) for lab in nist_labels()]


def pauli_labels() -> tuple[int, ...]:
    return (0, 1, 2, 3)


@lru_cache(maxsize=None)
def design_subsets() -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Labels of ``C12 = T·P`` and ``√Z·C12 = Z90·C12``."""
    t_unitaries = (_S_UNITARIES[0], _S_UNITARIES[4], _S_UNITARIES[5])
    c12 = sorted({identify(ptm_from_unitary(t @ p)) for t in t_unitaries for p in _P_UNITARIES})
    z90 = identify(ptm_from_unitary(_S_UNITARIES[3]))
    table = group_table()
    sqrt_z = sorted({table.compose(z90, c) for c in c12})
    return tuple(c12), tuple(sqrt_z)


def gateset_labels(name: str) -> tuple[int, ...]:
    """Labels of a named gateset: ``P``, ``C``, ``N``, ``C12`` or ``sqrtZ_C12``."""
    if name == "C":
        return tuple(range(24))
    if name == "N":
        return nist_labels()
    if name == "P":
        return pauli_labels()
    if name == "C12":
        return design_subsets()[0]
    if name == "sqrtZ_C12":
        return design_subsets()[1]
    raise ValueError(f"unknown gateset {name!r}")


def closure(labels) -> set[int]:
    """Smallest set containing ``labels`` closed under composition."""
    table = group_table()
    found = set(labels)
    frontier = set(found)
    while frontier:
        new = {table.compose(a, b) for a in frontier for b in labels} - found
        found |= new
        frontier = new
    return found


@dataclass(frozen=True)
class CircuitDistribution:
    """Law of the aggregate circuit ``G_m ∘ ... ∘ G_1`` over Clifford labels."""

    probs: np.ndarray
    m: int


def transition_matrix(labels) -> np.ndarray:
    """Row-stochastic ``T[c, c']``: probability that one uniform draw from
    ``labels`` moves aggregate circuit ``c`` to ``c'``."""
    table = group_table()
    labels = tuple(labels)
    t = np.zeros((24, 24))
    w = 1.0 / len(labels)
    for c in range(24):
        for g in labels:
            t[c, table.compose(g, c)] += w
    return t


def circuit_distribution(m: int, labels=None) -> CircuitDistribution:
    """Exact distribution of the aggregate circuit after ``m`` uniform draws
    (default: from the NIST gateset)."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    labels = nist_labels() if labels is None else tuple(labels)
    t = transition_matrix(labels)
    probs = uniform_over(labels)
    for _ in range(m - 1):
        probs = probs @ t
    return CircuitDistribution(probs=probs, m=m)


def uniform_over(labels) -> np.ndarray:
    labels = tuple(labels)
    out = np.zeros(24)
    out[list(labels)] = 1.0 / len(labels)
    return out


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.sum(np.abs(np.asarray(p) - np.asarray(q))))


def label_names() -> list[str]:
    """Readable ``S∘P`` name for each canonical label."""
    names = []
    for s in _S_NAMES:
        for p in _P_NAMES:
            names.append(p if s == "I" else s if p == "I" else f"{s}.{p}")
    return names
