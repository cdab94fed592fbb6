"""Information measures over discrete symbol data, in bits.

Conventions: logarithms are base 2, ``0 * log2(0) = 0``, and an empty
observation window carries 0 bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Hashable, Iterable, Mapping, Sequence

import numpy as np

from . import kernels

NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True)
class ProbabilityDistribution:
    """Finite map symbol -> probability.

    ``alphabet_size`` counts every declared symbol, including those with
    zero mass.
    """

    entries: Mapping[Hashable, float]
    alphabet_size: int = field(default=0)

    def __post_init__(self):
        entries = dict(self.entries)
        if not entries:
            raise ValueError("distribution has no symbols")
        for sym, p in entries.items():
            if not (isinstance(p, (int, float, np.floating, np.integer)) and math.isfinite(p)):
                raise ValueError(f"probability of {sym!r} is not a finite number: {p!r}")
            if p < 0.0 or p > 1.0:
                raise ValueError(f"probability of {sym!r} outside [0, 1]: {p!r}")
        total = math.fsum(entries.values())
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        size = self.alphabet_size or len(entries)
        if size < len(entries):
            raise ValueError("alphabet_size smaller than the number of entries")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "alphabet_size", int(size))

    @classmethod
    def uniform(cls, symbols: Iterable[Hashable]) -> "ProbabilityDistribution":
        symbols = list(symbols)
        return cls({s: 1.0 / len(symbols) for s in symbols})

    @classmethod
    def from_probs(cls, probs: Sequence[float]) -> "ProbabilityDistribution":
        """Distribution over symbols ``0..len(probs)-1``."""
        return cls({i: float(p) for i, p in enumerate(probs)})

    def probabilities(self) -> np.ndarray:
        return np.array([float(p) for p in self.entries.values()], dtype=np.float64)

    def __getitem__(self, symbol):
        return self.entries.get(symbol, 0.0)


class SymbolStream:
    """Ordered sequence of symbols drawn from a declared alphabet.

    Internally stored as integer codes into ``alphabet``.
    """

    __slots__ = ("alphabet", "values", "_index")

    def __init__(self, alphabet: Sequence[Hashable], values: Sequence[int] | np.ndarray = ()):
        alphabet = tuple(alphabet)
        index = {}
        for i, sym in enumerate(alphabet):
            if sym in index:
                raise ValueError(f"duplicate symbol {sym!r} in alphabet")
            index[sym] = i
        codes = np.asarray(values, dtype=np.int64).reshape(-1)
        if codes.size and (codes.min() < 0 or codes.max() >= len(alphabet)):
            raise ValueError("stream value outside alphabet")
        codes.setflags(write=False)
        self.alphabet = alphabet
        self.values = codes
        self._index = index

    @classmethod
    def from_symbols(cls, symbols: Iterable[Hashable], alphabet: Sequence[Hashable] | None = None) -> "SymbolStream":
        """Encode ``symbols``; the alphabet defaults to symbols in first-seen order."""
        symbols = list(symbols)
        if alphabet is None:
            alphabet = list(dict.fromkeys(symbols))
        alphabet = tuple(alphabet)
        index = {s: i for i, s in enumerate(alphabet)}
        try:
            codes = [index[s] for s in symbols]
        except KeyError as exc:
            raise ValueError(f"symbol {exc.args[0]!r} not in alphabet") from None
        return cls(alphabet, codes)

    def __len__(self):
        return int(self.values.shape[0])

    def __getitem__(self, item):
        if isinstance(item, slice):
            return SymbolStream(self.alphabet, self.values[item])
        return self.alphabet[self.values[item]]

    def __eq__(self, other):
        if not isinstance(other, SymbolStream):
            return NotImplemented
        return self.alphabet == other.alphabet and np.array_equal(self.values, other.values)

    def __repr__(self):
        return f"SymbolStream(alphabet={self.alphabet!r}, n={len(self)})"

    @property
    def symbols(self) -> list:
        return [self.alphabet[v] for v in self.values]

    def code(self, symbol) -> int:
        return self._index[symbol]


@dataclass(frozen=True)
class DynamicsClass:
    kind: str  # "Static" | "Periodic" | "Chaotic" | "Complex"
    period: int | None = None
    entropy: float | None = None  # mean normalized sliding entropy when measured

    KINDS = ("Static", "Periodic", "Chaotic", "Complex")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown dynamics class {self.kind!r}")
        if (self.kind == "Periodic") != (self.period is not None):
            raise ValueError("period is set exactly for Periodic")

    def __str__(self):
        return f"Periodic({self.period})" if self.kind == "Periodic" else self.kind


@dataclass(frozen=True)
class DynamicsParams:
    transient: int = 100
    window: int = 64
    chaos_threshold: float = 0.75

    def __post_init__(self):
        if self.transient < 0 or self.window < 1:
            raise ValueError("transient must be >= 0 and window >= 1")
        if not 0.0 <= self.chaos_threshold <= 1.0:
            raise ValueError("chaos_threshold must lie in [0, 1]")


def _as_distribution(dist) -> ProbabilityDistribution:
    if isinstance(dist, ProbabilityDistribution):
        return dist
    if isinstance(dist, Mapping):
        return ProbabilityDistribution(dist)
    return ProbabilityDistribution.from_probs(dist)


def entropy(dist) -> float:
    """Shannon entropy ``-sum p log2 p`` in bits.

    Accepts a :class:`ProbabilityDistribution`, a mapping or a sequence of
    probabilities; malformed input raises ``ValueError``.
    """
    d = _as_distribution(dist)
    h = 0.0
    for p in d.entries.values():
        p = float(p)
        if p > 0.0:
            h -= p * math.log2(p)
    # rounding can overshoot the uniform bound by an ulp
    return min(max(h, 0.0), math.log2(d.alphabet_size))


def empirical_distribution(stream: SymbolStream) -> ProbabilityDistribution:
    n = len(stream)
    if n == 0:
        raise ValueError("empirical distribution of an empty stream")
    counts = kernels.symbol_counts(stream.values, len(stream.alphabet))
    return ProbabilityDistribution(
        {sym: int(c) / n for sym, c in zip(stream.alphabet, counts)},
        alphabet_size=len(stream.alphabet),
    )


def stream_entropy(stream: SymbolStream) -> float:
    """Entropy of the stream's empirical distribution; 0 for an empty stream."""
    if len(stream) == 0:
        return 0.0
    return kernels.entropy_from_counts(kernels.symbol_counts(stream.values, len(stream.alphabet)))


def sliding_entropy(stream: SymbolStream, window: int) -> np.ndarray:
    if window < 1:
        raise ValueError("window must be positive")
    if window > len(stream):
        raise ValueError(f"window {window} larger than stream length {len(stream)}")
    return kernels.sliding_entropy_codes(stream.values, len(stream.alphabet), window)


def mutual_information(x: SymbolStream, y: SymbolStream) -> float:
    """Plug-in estimate of I(X;Y) over aligned positions."""
    if len(x) != len(y):
        raise ValueError(f"stream lengths differ: {len(x)} != {len(y)}")
    if len(x) == 0:
        raise ValueError("mutual information of empty streams")
    kx, ky = len(x.alphabet), len(y.alphabet)
    joint = kernels.joint_counts(x.values, y.values, kx, ky)
    hx = kernels.entropy_from_counts(joint.sum(axis=1))
    hy = kernels.entropy_from_counts(joint.sum(axis=0))
    hxy = kernels.entropy_from_counts(joint.ravel())
    mi = hx + hy - hxy
    return mi if mi > 0.0 else 0.0


def normalized_entropy(dist) -> float:
    d = _as_distribution(dist)
    if d.alphabet_size < 2:
        raise ValueError("normalized entropy needs an alphabet of at least 2 symbols")
    return min(entropy(d) / math.log2(d.alphabet_size), 1.0)


def complexity(h_norm: float) -> float:
    """Balance between stasis (h=0) and noise (h=1): ``4 h (1 - h)``."""
    if not (math.isfinite(h_norm) and 0.0 <= h_norm <= 1.0):
        raise ValueError(f"normalized entropy outside [0, 1]: {h_norm!r}")
    return 4.0 * h_norm * (1.0 - h_norm)


def _jsd(p: np.ndarray, q: np.ndarray) -> float:
    m = 0.5 * (p + q)
    return kernels.entropy_from_counts(m) - 0.5 * (
        kernels.entropy_from_counts(p) + kernels.entropy_from_counts(q)
    )


def novelty_score(history: SymbolStream, recent: SymbolStream) -> float:
    """Jensen-Shannon divergence (bits) between two streams' symbol frequencies.

    0 means the recent traffic imitates the history; 1 means disjoint support.
    """
    if len(history) == 0 or len(recent) == 0:
        raise ValueError("novelty needs two non-empty streams")
    if history.alphabet != recent.alphabet:
        raise ValueError("streams do not share an alphabet")
    k = len(history.alphabet)
    p = kernels.symbol_counts(history.values, k) / len(history)
    q = kernels.symbol_counts(recent.values, k) / len(recent)
    return float(min(max(_jsd(p, q), 0.0), 1.0))


def _minimal_period(seq: Sequence[Any], max_period: int) -> int | None:
    n = len(seq)
    for p in range(1, min(max_period, n // 2) + 1):
        if all(seq[i] == seq[i + p] for i in range(n - p)):
            return p
    return None


def classify_dynamics(trajectory: Sequence[Hashable], params: DynamicsParams | None = None) -> DynamicsClass:
    """Assign one of Static / Periodic / Chaotic / Complex to a fingerprint sequence.

    After dropping ``params.transient`` entries: all-equal is Static; a
    repetition with period ``p <= params.window`` (seen at least twice) is
    Periodic. Otherwise the mean sliding entropy over windows of
    ``params.window`` fingerprints, normalized by the largest entropy such a
    window can hold, separates Chaotic (above ``chaos_threshold``) from
    Complex.
    """
    params = params or DynamicsParams()
    trajectory = list(trajectory)
    if len(trajectory) < params.transient + params.window:
        raise ValueError(
            f"trajectory of length {len(trajectory)} shorter than transient + window "
            f"= {params.transient + params.window}"
        )
    tail = trajectory[params.transient:]
    if all(t == tail[0] for t in tail):
        return DynamicsClass("Static", entropy=0.0)
    period = _minimal_period(tail, params.window)
    if period is not None:
        return DynamicsClass("Periodic", period=period)
    stream = SymbolStream.from_symbols(tail)
    cap = math.log2(min(len(stream.alphabet), params.window))
    h = float(np.mean(sliding_entropy(stream, params.window))) / cap
    h = min(max(h, 0.0), 1.0)
    kind = "Chaotic" if h > params.chaos_threshold else "Complex"
    return DynamicsClass(kind, entropy=h)
