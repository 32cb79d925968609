"""Pulse alphabets, gate decompositions and pulse-level error models.

A pulse is either noisy (implemented physically, marked with ``~``) or
virtual (ideal, free).  Gates are compiled into pulse strings by a
minimum-cost search; the cost of a string is its number of noisy pulses.

Three compilation conventions are available:

``global_min``
    cheapest string over the whole alphabet; the identity is the empty string.
``global_min_nonempty``
    as above, but every gate (the identity included) is at least one pulse,
    so the identity costs a canceling noisy pair when no ideal/noisy identity
    pulse exists.
``pauli_first``
    the gate is written in factor form (``S∘P`` for Cliffords, ``Q∘P`` for
    NIST gates), each factor is compiled with ``global_min_nonempty`` and the
    pulse strings are concatenated (Pauli first).  A NIST label has two
    factorizations; both are kept as equally likely variants.

Which convention reproduces the published pulse counts is decided by
:func:`calibrate`, not hard-coded.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable

import numpy as np

from . import gatesets
from .gatesets import IDENTITY, group_table, identify
from .ptm import compose_sequence, dephasing, ptm_from_unitary, pulse_unitary

__all__ = [
    "Pulse",
    "PulseSet",
    "Decomposition",
    "Convention",
    "ErrorModel",
    "CompilationError",
    "CalibrationError",
    "pulse_set",
    "pulse_sets",
    "decompose_gateset",
    "mean_noisy_count",
    "calibrate",
    "default_convention",
    "error_model",
    "ERROR_MODELS",
    "noisy_gate_ptm",
    "pulse_ptm",
]

MAX_PULSES = 6


class CompilationError(RuntimeError):
    pass


class CalibrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Pulse:
    """Rotation by ``quarters * π/2`` about ``axis``.

    Pulses with ``abs(quarters) == 2`` are π pulses whose rotation sign is
    chosen at execution time.
    """

    axis: str
    quarters: int = 0
    noisy: bool = True

    def __post_init__(self):
        if self.axis not in ("I", "X", "Y", "Z"):
            raise ValueError(f"bad pulse axis {self.axis!r}")
        if self.axis == "I" and self.quarters != 0:
            raise ValueError("identity pulse must have zero angle")
        if self.quarters not in (0, 1, -1, 2):
            raise ValueError(f"unsupported pulse angle {self.quarters} * pi/2")

    @property
    def angle(self) -> float:
        return self.quarters * math.pi / 2

    @property
    def is_pi(self) -> bool:
        return self.quarters == 2

    @property
    def name(self) -> str:
        if self.axis == "I":
            body = "I"
        elif self.is_pi:
            body = f"{self.axis}180"
        else:
            body = f"{self.axis}{'+' if self.quarters > 0 else '-'}90"
        return ("~" if self.noisy else "") + body

    def ideal_ptm(self) -> np.ndarray:
        return _ideal_pulse_ptm(self.axis, self.quarters)

    def __str__(self) -> str:
        return self.name


@lru_cache(maxsize=None)
def _ideal_pulse_ptm(axis: str, quarters: int) -> np.ndarray:
    r = ptm_from_unitary(pulse_unitary(axis, quarters * math.pi / 2))
    r.setflags(write=False)
    return r


def _p(spec: str) -> Pulse:
    """Parse ``"~X+90"``-style pulse names."""
    noisy = spec.startswith("~")
    body = spec.lstrip("~")
    if body == "I":
        return Pulse("I", 0, noisy)
    axis, rest = body[0], body[1:]
    quarters = {"180": 2, "+90": 1, "-90": -1}[rest]
    return Pulse(axis, quarters, noisy)


@dataclass(frozen=True)
class PulseSet:
    index: int
    alphabet: tuple[Pulse, ...]
    n_clifford: float
    n_nist: float

    def target(self, gateset: str) -> float:
        return self.n_clifford if gateset == "C" else self.n_nist

    def __str__(self) -> str:
        return "{" + ", ".join(p.name for p in self.alphabet) + "}"


# (alphabet, printed n_C, printed n_N), alphabet order is the tie-break order
_TABLE = {
    1: ("I ~X+90 ~Y+90", 3.08333, 4.0),
    2: ("~X+90 ~X-90 ~Y+90 ~Y-90", 2.25, 3.5),
    3: ("I ~X+90 ~X-90 ~Y+90 ~Y-90", 2.16667, 3.0),
    4: ("~X180 ~Y180 ~X+90 ~X-90 ~Y+90 ~Y-90", 1.91667, 2.5),
    5: ("~I ~Z180 ~X+90 ~X-90 ~Y+90 ~Y-90", 1.91667, 2.5),
    6: ("~I ~X180 ~Y180 ~X+90 ~X-90 ~Y+90 ~Y-90", 1.875, 2.25),
    7: ("~I ~X180 ~Y180 ~Z180 ~X+90 ~X-90 ~Y+90 ~Y-90", 1.8333, 2.0),
    8: ("I Z180 ~X+90 ~X-90 ~Y+90 ~Y-90", 1.66667, 2.0),
    9: ("I ~X180 ~Y180 Z180 ~X+90 ~X-90 ~Y+90 ~Y-90", 1.58333, 1.5),
}


@lru_cache(maxsize=None)
def pulse_set(index: int) -> PulseSet:
    if index not in _TABLE:
        raise ValueError(f"pulse set index must be in 1..9, got {index!r}")
    names, n_c, n_n = _TABLE[index]
    return PulseSet(index, tuple(_p(s) for s in names.split()), n_c, n_n)


def pulse_sets() -> list[PulseSet]:
    return [pulse_set(i) for i in sorted(_TABLE)]


@dataclass(frozen=True)
class Decomposition:
    gate: int
    pulses: tuple[Pulse, ...]

    @property
    def noisy_count(self) -> int:
        return sum(p.noisy for p in self.pulses)

    @property
    def pulse_string(self) -> str:
        return " ".join(p.name for p in self.pulses) if self.pulses else "-"

    def ideal_ptm(self) -> np.ndarray:
        return compose_sequence(p.ideal_ptm() for p in self.pulses)


class Convention(str, Enum):
    GLOBAL_MIN = "global_min"
    GLOBAL_MIN_NONEMPTY = "global_min_nonempty"
    PAULI_FIRST = "pauli_first"


# preference order when several conventions reproduce a row
_PREFERENCE = (Convention.GLOBAL_MIN_NONEMPTY, Convention.PAULI_FIRST, Convention.GLOBAL_MIN)


@lru_cache(maxsize=None)
def _search(index: int) -> dict[tuple[int, bool], tuple[int, ...]]:
    """Best pulse strings (as alphabet indices) for every reachable
    ``(label, nonempty)`` state, ranked by (noisy count, length, lexicographic).

    The ranking is a total order that is preserved by appending a pulse, so a
    Dijkstra search over group elements returns globally optimal strings.
    """
    ps = pulse_set(index)
    table = group_table()
    labels = [identify(p.ideal_ptm()) for p in ps.alphabet]
    costs = [int(p.noisy) for p in ps.alphabet]
    best: dict[tuple[int, bool], tuple[int, ...]] = {}
    heap = [(0, 0, (), IDENTITY, False)]
    while heap:
        cost, length, word, elem, nonempty = heapq.heappop(heap)
        state = (elem, nonempty)
        if state in best:
            continue
        best[state] = word
        if length == MAX_PULSES:
            continue
        for k, (lab, c) in enumerate(zip(labels, costs)):
            nxt = (table.compose(lab, elem), True)
            if nxt not in best:
                heapq.heappush(heap, (cost + c, length + 1, word + (k,), nxt[0], True))
    return best


def _min_decomposition(index: int, label: int, nonempty: bool) -> Decomposition:
    best = _search(index)
    key = (label, nonempty or label != IDENTITY)
    if key not in best:
        raise CompilationError(
            f"pulse set {index} cannot reach Clifford {label} within {MAX_PULSES} pulses"
        )
    alphabet = pulse_set(index).alphabet
    return Decomposition(label, tuple(alphabet[k] for k in best[key]))


def _factor(index: int, gate: int, first: int, second: int) -> Decomposition:
    a = _min_decomposition(index, first, True)
    b = _min_decomposition(index, second, True)
    return Decomposition(gate, a.pulses + b.pulses)


@lru_cache(maxsize=None)
def _decompose(gateset: str, index: int, convention: Convention):
    pulse_set(index)
    conv = Convention(convention)
    labels = gatesets.gateset_labels(gateset)
    out: dict[int, tuple[Decomposition, ...]] = {}
    if conv is Convention.PAULI_FIRST:
        if gateset == "C":
            for lab in labels:
                s, p = divmod(lab, 4)
                # label 4s is the coset representative itself, label p the Pauli
                out[lab] = (_factor(index, lab, p, 4 * s),)
        elif gateset == "N":
            q_labels = [identify(ptm_from_unitary(u)) for u in gatesets._Q_UNITARIES]
            variants: dict[int, list[Decomposition]] = {lab: [] for lab in labels}
            for lab, qi, pi in gatesets.nist_factorizations():
                variants[lab].append(_factor(index, lab, pi, q_labels[qi]))
            out = {lab: tuple(v) for lab, v in variants.items()}
        else:
            raise ValueError("pauli_first is defined for the C and N gatesets only")
    else:
        nonempty = conv is Convention.GLOBAL_MIN_NONEMPTY
        for lab in labels:
            out[lab] = (_min_decomposition(index, lab, nonempty),)
    return out


def decompose_gateset(
    gateset: str, ps: PulseSet | int, convention: Convention | str | None = None
) -> dict[int, tuple[Decomposition, ...]]:
    """Compile every gate of ``gateset`` ("C" or "N") with pulse set ``ps``.

    Returns ``label -> variants``; a gate is implemented by a uniformly random
    choice among its variants (only NIST gates under ``pauli_first`` have
    more than one).  ``convention=None`` uses :func:`default_convention`.
    """
    index = ps.index if isinstance(ps, PulseSet) else int(ps)
    if convention is None:
        convention = default_convention(gateset, index)
    return dict(_decompose(gateset, index, Convention(convention)))


def mean_noisy_count(decomps: dict[int, tuple[Decomposition, ...]]) -> float:
    per_gate = [sum(d.noisy_count for d in v) / len(v) for v in decomps.values()]
    return sum(per_gate) / len(per_gate)


def _printed_digits(value: float) -> int:
    text = repr(value)
    return len(text.split(".")[1]) if "." in text else 0


def matches_table(mean: float, printed: float) -> bool:
    """True when ``mean`` rounds to the printed reference-table value."""
    digits = _printed_digits(printed)
    return round(mean, digits) == printed and abs(mean - printed) <= 1 / 240


@lru_cache(maxsize=None)
def calibrate(gateset: str, index: int) -> tuple[Convention, ...]:
    """Conventions whose mean noisy count reproduces the reference-table entry."""
    target = pulse_set(index).target(gateset)
    return tuple(
        conv
        for conv in _PREFERENCE
        if matches_table(mean_noisy_count(_decompose(gateset, index, conv)), target)
    )


def default_convention(gateset: str, index: int) -> Convention:
    found = calibrate(gateset, index)
    if not found:
        raise CalibrationError(f"no convention reproduces the reference table for row {index}, gateset {gateset}")
    return found[0]


# ---------------------------------------------------------------------------
# error models


@dataclass(frozen=True)
class ErrorModel:
    """Noisy implementation of physical pulses.

    ``noisy_rotation(axis, signed_angle)`` returns the PTM applied in place of
    a noisy pulse; virtual pulses are always exact.
    """

    name: str
    noisy_rotation: Callable[[str, float], np.ndarray]
    params: dict = field(default_factory=dict)

    def pulse_ptm(self, pulse: Pulse, sign: int = 1) -> np.ndarray:
        angle = sign * pulse.angle if pulse.is_pi else pulse.angle
        if not pulse.noisy:
            return ptm_from_unitary(pulse_unitary(pulse.axis, angle))
        return self.noisy_rotation(pulse.axis, angle)


def _rot(axis: str, angle: float) -> np.ndarray:
    return ptm_from_unitary(pulse_unitary(axis, angle))


def _over_rotation(eps: float):
    def noisy(axis, angle):
        if axis == "I":
            return np.eye(4)
        return _rot(axis, angle + math.copysign(eps, angle))

    return noisy


def _z_rotation(eps: float):
    def noisy(axis, angle):
        if axis == "Z":
            return _rot("Z", angle + eps)
        return _rot("Z", eps) @ _rot(axis, angle)

    return noisy


def _dephasing(alpha: float):
    d = dephasing(alpha)

    def noisy(axis, angle):
        return d @ _rot(axis, angle)

    return noisy


def error_model(name: str, **params) -> ErrorModel:
    """Built-in error models: ``over_rotation`` (eps=0.1), ``z_rotation``
    (eps=0.1), ``dephasing`` (alpha=0.99) and ``ideal``."""
    if name == "over_rotation":
        eps = params.get("eps", 0.1)
        return ErrorModel(name, _over_rotation(eps), {"eps": eps})
    if name == "z_rotation":
        eps = params.get("eps", 0.1)
        return ErrorModel(name, _z_rotation(eps), {"eps": eps})
    if name == "dephasing":
        alpha = params.get("alpha", 0.99)
        return ErrorModel(name, _dephasing(alpha), {"alpha": alpha})
    if name == "ideal":
        return ErrorModel(name, _rot, {})
    raise ValueError(f"unknown error model {name!r}")


ERROR_MODELS = ("over_rotation", "z_rotation", "dephasing")


def pulse_ptm(pulse: Pulse, em: ErrorModel, sign_choice=None) -> np.ndarray:
    """Noisy PTM of one pulse occurrence.

    ``sign_choice=None`` averages a π pulse over both rotation directions;
    a ``numpy.random.Generator`` draws the direction; ``+1``/``-1`` fixes it.
    """
    if not pulse.is_pi:
        return em.pulse_ptm(pulse)
    if sign_choice is None:
        return 0.5 * (em.pulse_ptm(pulse, 1) + em.pulse_ptm(pulse, -1))
    if isinstance(sign_choice, np.random.Generator):
        sign = 1 if sign_choice.integers(2) == 0 else -1
    else:
        sign = int(sign_choice)
    return em.pulse_ptm(pulse, sign)


def noisy_gate_ptm(
    gate: int,
    ps: PulseSet | int,
    em: ErrorModel,
    sign_choice=None,
    gateset: str = "C",
    convention: Convention | str | None = None,
) -> np.ndarray:
    """Noisy PTM of a gate compiled with pulse set ``ps`` under ``em``.

    In expectation mode (``sign_choice=None``) π-pulse directions and the
    decomposition variant are averaged; with a generator both are sampled.
    """
    variants = decompose_gateset(gateset, ps, convention)[gate]
    if sign_choice is None:
        total = np.zeros((4, 4))
        for d in variants:
            total += compose_sequence(pulse_ptm(p, em, None) for p in d.pulses)
        return total / len(variants)
    if isinstance(sign_choice, np.random.Generator):
        d = variants[int(sign_choice.integers(len(variants)))]
    else:
        d = variants[0]
    return compose_sequence(pulse_ptm(p, em, sign_choice) for p in d.pulses)
