"""Simulation of Clifford-group (SRB) and NIST randomized benchmarking.

Two estimators of the per-length survival probability are provided:

* :func:`run_experiment` samples ``s`` random sequences per length, exactly as
  an experiment would, optionally followed by binomial shot noise;
* :func:`expected_survival` returns the exact average over *all* sequences by
  propagating the joint law of (aggregate ideal circuit, noisy state) through
  the 24 Clifford labels, which costs ``O(m · 24 · |gateset|)``.

Noise enters through a :class:`GateNoise`: either a fixed gate-level channel
applied after every ideal gate, or pulse-level errors on compiled gates.
Recovery gates are Cliffords and are always compiled as members of the
Clifford gateset.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import compilation
from .gatesets import X180_LABEL, clifford_ptms, gateset_labels, group_table
from .ptm import basis_effect, is_trace_preserving, probability, zero_state

__all__ = [
    "PROTOCOLS",
    "GateNoise",
    "GateLevelNoise",
    "PulseNoise",
    "Spam",
    "RBConfig",
    "SequenceRecord",
    "DecayDataset",
    "NonPhysicalError",
    "protocol_gateset",
    "build_noise",
    "sample_sequence",
    "survival_probability",
    "run_experiment",
    "expected_survival",
    "exact_dataset",
    "default_lengths",
]

PROTOCOLS = ("SRB", "NIST")


class NonPhysicalError(ValueError):
    pass


def protocol_gateset(protocol: str) -> str:
    try:
        return {"SRB": "C", "NIST": "N"}[protocol]
    except KeyError:
        raise ValueError(f"unknown protocol {protocol!r}; expected SRB or NIST") from None


def default_lengths() -> tuple[int, ...]:
    return tuple(2**k for k in range(10))


class GateNoise:
    """Maps a Clifford label, drawn as a member of gateset ``"C"`` or ``"N"``,
    to the PTM actually applied.  ``rng=None`` requests the expected PTM."""

    def ptm(self, label: int, gateset: str = "C", rng=None) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class GateLevelNoise(GateNoise):
    """Gate-independent noise: every ideal gate is followed by ``channel``."""

    channel: np.ndarray

    def __post_init__(self):
        if not is_trace_preserving(np.asarray(self.channel), atol=1e-9):
            raise ValueError("gate-level noise channel must be trace preserving")

    def ptm(self, label, gateset="C", rng=None):
        return self.channel @ clifford_ptms()[label]


class PulseNoise(GateNoise):
    """Gates compiled with one of the nine pulse sets under a pulse error model."""

    def __init__(self, row: int, em: compilation.ErrorModel, conventions: dict | None = None):
        self.row = int(row)
        self.em = em
        self.conventions = dict(conventions or {})
        self._expected: dict[str, dict[int, np.ndarray]] = {}
        for gs in ("C", "N"):
            conv = self.conventions.get(gs)
            self._expected[gs] = {
                lab: compilation.noisy_gate_ptm(lab, self.row, em, None, gs, conv)
                for lab in gateset_labels(gs)
            }

    def ptm(self, label, gateset="C", rng=None):
        if rng is None:
            return self._expected[gateset][label]
        return compilation.noisy_gate_ptm(
            label, self.row, self.em, rng, gateset, self.conventions.get(gateset)
        )

    def expected_map(self, gateset: str) -> dict[int, np.ndarray]:
        return dict(self._expected[gateset])


@dataclass(frozen=True)
class Spam:
    """Preparation and measurement error channels (identity by default)."""

    prep: np.ndarray = field(default_factory=lambda: np.eye(4))
    meas: np.ndarray = field(default_factory=lambda: np.eye(4))


@dataclass
class RBConfig:
    """One RB experiment.

    ``noise`` names either a gate-level channel (``depolarizing`` with
    ``p``, ``pauli`` with ``x, y, z``, ``channel`` with a 4x4 ``ptm``) when
    ``pulse_row`` is None, or a pulse error model (``over_rotation``,
    ``z_rotation``, ``dephasing``, ``ideal``) when a pulse-set row is given.
    ``shots=None`` means exact survival probabilities.  ``average="exact"``
    replaces sequence sampling by the exact all-sequence average.
    """

    protocol: str = "SRB"
    lengths: tuple[int, ...] = field(default_factory=default_lengths)
    sequences: int = 30
    shots: int | None = None
    pulse_row: int | None = None
    noise: str = "depolarizing"
    noise_params: dict = field(default_factory=lambda: {"p": 0.99})
    spam_prep: list | None = None
    spam_meas: list | None = None
    randomized_recovery: bool = True
    seed: int = 0
    sign_mode: str = "expectation"
    average: str = "sampled"
    fit_min_length: int | None = None

    def __post_init__(self):
        protocol_gateset(self.protocol)
        self.lengths = tuple(int(m) for m in self.lengths)
        if not self.lengths or any(m < 1 for m in self.lengths):
            raise ValueError("lengths must be a non-empty list of integers >= 1")
        if any(b <= a for a, b in zip(self.lengths, self.lengths[1:])):
            raise ValueError("lengths must be strictly increasing")
        if self.sequences < 1:
            raise ValueError("sequences must be >= 1")
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be >= 1 or None for exact probabilities")
        if self.sign_mode not in ("expectation", "sample"):
            raise ValueError("sign_mode must be 'expectation' or 'sample'")
        if self.average not in ("sampled", "exact"):
            raise ValueError("average must be 'sampled' or 'exact'")
        if self.pulse_row is not None:
            compilation.pulse_set(self.pulse_row)

    @property
    def spam(self) -> Spam:
        prep = np.eye(4) if self.spam_prep is None else np.asarray(self.spam_prep, dtype=float)
        meas = np.eye(4) if self.spam_meas is None else np.asarray(self.spam_meas, dtype=float)
        return Spam(prep, meas)

    @property
    def min_fit_length(self) -> int:
        if self.fit_min_length is not None:
            return self.fit_min_length
        return 8 if self.protocol == "NIST" else 1


def build_noise(cfg: RBConfig) -> GateNoise:
    params = dict(cfg.noise_params or {})
    if cfg.pulse_row is not None:
        return _pulse_noise(cfg.pulse_row, cfg.noise, tuple(sorted(params.items())))
    if cfg.noise == "depolarizing":
        p = float(params.get("p", 0.99))
        return GateLevelNoise(np.diag([1.0, p, p, p]))
    if cfg.noise == "pauli":
        return GateLevelNoise(np.diag([1.0, params["x"], params["y"], params["z"]]))
    if cfg.noise == "channel":
        return GateLevelNoise(np.asarray(params["ptm"], dtype=float))
    if cfg.noise == "ideal":
        return GateLevelNoise(np.eye(4))
    raise ValueError(f"unknown gate-level noise {cfg.noise!r}")


@lru_cache(maxsize=64)
def _pulse_noise(row: int, model: str, params: tuple) -> PulseNoise:
    return PulseNoise(row, compilation.error_model(model, **dict(params)))


@dataclass(frozen=True)
class SequenceRecord:
    protocol: str
    gates: tuple[int, ...]
    recovery: int
    flip: int

    @property
    def m(self) -> int:
        return len(self.gates)


def sample_sequence(protocol: str, m: int, randomized_recovery: bool, rng: np.random.Generator):
    """Draw ``m`` gates uniformly from the protocol's gateset and the recovery
    ``X180^b ∘ (G_m ∘ ... ∘ G_1)^-1``."""
    if m < 1:
        raise ValueError("sequence length must be >= 1")
    labels = np.asarray(gateset_labels(protocol_gateset(protocol)))
    gates = tuple(int(g) for g in rng.choice(labels, size=m))
    table = group_table()
    inverse = table.inverse(table.product(gates))
    flip = int(rng.integers(2)) if randomized_recovery else 0
    recovery = table.compose(X180_LABEL, inverse) if flip else inverse
    return SequenceRecord(protocol, gates, recovery, flip)


def _checked(value: float) -> float:
    if not -1e-9 <= value <= 1 + 1e-9:
        raise NonPhysicalError(f"survival probability {value!r} outside [0, 1]")
    return min(1.0, max(0.0, value))


def survival_probability(rec: SequenceRecord, noise: GateNoise, spam: Spam | None = None, rng=None) -> float:
    """``tr Q G̃_{m+1} ∘ ... ∘ G̃_1 (ρ)`` with ``ρ = |0><0|`` and
    ``Q = X180^b |0><0|``, deformed by SPAM channels if given."""
    spam = spam or Spam()
    gs = protocol_gateset(rec.protocol)
    state = spam.prep @ zero_state()
    for g in rec.gates:
        state = noise.ptm(g, gs, rng) @ state
    state = spam.meas @ (noise.ptm(rec.recovery, "C", rng) @ state)
    return _checked(probability(basis_effect(rec.flip), state))


@dataclass(frozen=True)
class DecayDataset:
    lengths: tuple[int, ...]
    means: tuple[float, ...]
    stderrs: tuple[float, ...]
    counts: tuple[int, ...]
    exhaustive: bool = False

    def rows(self):
        return list(zip(self.lengths, self.means, self.stderrs, self.counts))


def _task_rng(seed: int, j: int, k: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(j, k)))


def _one_sequence(cfg: RBConfig, noise: GateNoise, spam: Spam, j: int, k: int) -> float:
    rng = _task_rng(cfg.seed, j, k)
    rec = sample_sequence(cfg.protocol, cfg.lengths[j], cfg.randomized_recovery, rng)
    sign_rng = rng if cfg.sign_mode == "sample" else None
    prob = survival_probability(rec, noise, spam, sign_rng)
    if cfg.shots is not None:
        prob = rng.binomial(cfg.shots, prob) / cfg.shots
    return prob


def run_experiment(cfg: RBConfig, threads: int = 1, noise: GateNoise | None = None) -> DecayDataset:
    """Sampled RB experiment (or the exact average when ``cfg.average == "exact"``).

    Sequence ``k`` of length index ``j`` draws from its own generator seeded
    by ``(seed, j, k)``, so results do not depend on ``threads``.
    """
    noise = noise or build_noise(cfg)
    if cfg.average == "exact":
        return exact_dataset(cfg, noise)
    spam = cfg.spam
    tasks = [(j, k) for j in range(len(cfg.lengths)) for k in range(cfg.sequences)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(lambda t: _one_sequence(cfg, noise, spam, *t), tasks))
    else:
        values = [_one_sequence(cfg, noise, spam, j, k) for j, k in tasks]
    grid = np.asarray(values).reshape(len(cfg.lengths), cfg.sequences)
    means = grid.mean(axis=1)
    if cfg.sequences > 1:
        stderrs = grid.std(axis=1, ddof=1) / math.sqrt(cfg.sequences)
    else:
        stderrs = np.zeros(len(cfg.lengths))
    return DecayDataset(
        lengths=cfg.lengths,
        means=tuple(float(v) for v in means),
        stderrs=tuple(float(v) for v in stderrs),
        counts=(cfg.sequences,) * len(cfg.lengths),
    )


def expected_survival(
    protocol: str,
    lengths,
    noise: GateNoise,
    spam: Spam | None = None,
    randomized_recovery: bool = True,
) -> np.ndarray:
    """Exact survival probability averaged over every sequence (and recovery
    bit) for each length, using expected gate PTMs."""
    spam = spam or Spam()
    gs = protocol_gateset(protocol)
    labels = gateset_labels(gs)
    table = group_table()
    weight = 1.0 / len(labels)
    moves = [(np.asarray(table.mul[g]), noise.ptm(g, gs).T * weight) for g in labels]
    flips = (0, 1) if randomized_recovery else (0,)
    # recovery operator per aggregate circuit, averaged over the flip bit
    readout = np.zeros((24, 4))
    for c in range(24):
        inv = table.inverse(c)
        for b in flips:
            rec = table.compose(X180_LABEL, inv) if b else inv
            effect = basis_effect(b) @ spam.meas @ noise.ptm(rec, "C")
            readout[c] += 0.5 * effect / len(flips)
    lengths = [int(m) for m in lengths]
    want = set(lengths)
    out = {}
    # states[c] = E[1{aggregate = c} · noisy state]
    states = np.zeros((24, 4))
    states[0] = spam.prep @ zero_state()
    for m in range(1, max(lengths) + 1):
        nxt = np.zeros((24, 4))
        for perm, gt in moves:
            np.add.at(nxt, perm, states @ gt)
        states = nxt
        if m in want:
            out[m] = _checked(float(np.sum(states * readout)))
    return np.array([out[m] for m in lengths])


def exact_dataset(cfg: RBConfig, noise: GateNoise | None = None) -> DecayDataset:
    noise = noise or build_noise(cfg)
    means = expected_survival(cfg.protocol, cfg.lengths, noise, cfg.spam, cfg.randomized_recovery)
    n = len(cfg.lengths)
    return DecayDataset(
        lengths=cfg.lengths,
        means=tuple(float(v) for v in means),
        stderrs=(0.0,) * n,
        counts=(0,) * n,
        exhaustive=True,
    )
