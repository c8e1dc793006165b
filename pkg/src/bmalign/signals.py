"""Bit-packed binary signals, cyclic shifts, and the shift-and-flip channel.

A signal of length L lives in Z_2^L and is packed into a single Python int
(bit j holds entry j).  An observation is produced by drawing a cyclic shift
S from an exact rational distribution, reading the signal at the kept
coordinates, and XOR-ing independent Bernoulli(p) noise onto each kept bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence, Union

import numpy as np

# Signals fit one machine word; anything that enumerates 2^L signals is
# capped much lower so exhaustive sweeps stay desk-scale.
MAX_LENGTH = 63
MAX_EXHAUSTIVE_LENGTH = 24

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class BooleanSignal:
    """Length-`length` vector over Z_2, packed into `word` (bit j = entry j)."""

    length: int
    word: int

    def __post_init__(self):
        # normalize numpy integer types so downstream bit twiddling stays exact
        object.__setattr__(self, "length", int(self.length))
        object.__setattr__(self, "word", int(self.word))
        if not 1 <= self.length <= MAX_LENGTH:
            raise ValueError(f"length must be in [1, {MAX_LENGTH}], got {self.length}")
        if not 0 <= self.word < (1 << self.length):
            raise ValueError(f"word {self.word:#x} out of range for length {self.length}")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BooleanSignal":
        bits = tuple(bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bits must be 0 or 1")
        word = 0
        for j, b in enumerate(bits):
            word |= b << j
        return cls(len(bits), word)

    @classmethod
    def from_string(cls, text: str) -> "BooleanSignal":
        """Parse a bit-string such as "1101000" (leftmost char is entry 0)."""
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a bit-string: {text!r}")
        return cls.from_bits(int(c) for c in text)

    @classmethod
    def zeros(cls, length: int) -> "BooleanSignal":
        return cls(length, 0)

    @classmethod
    def ones(cls, length: int) -> "BooleanSignal":
        return cls(length, (1 << length) - 1)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, index: int) -> int:
        # index arithmetic is cyclic: x[-1] is the last entry, x[L] the first
        return (self.word >> (index % self.length)) & 1

    def bits(self) -> tuple[int, ...]:
        return tuple((self.word >> j) & 1 for j in range(self.length))

    def __str__(self) -> str:
        return "".join(str((self.word >> j) & 1) for j in range(self.length))

    @property
    def weight(self) -> int:
        """Hamming weight."""
        return self.word.bit_count()

    @property
    def lex_key(self) -> int:
        """Integer whose ordering matches bit-string lexicographic order."""
        key = 0
        for j in range(self.length):
            key = (key << 1) | ((self.word >> j) & 1)
        return key

    def __lt__(self, other: "BooleanSignal") -> bool:
        if not isinstance(other, BooleanSignal):
            return NotImplemented
        return (self.length, self.lex_key) < (other.length, other.lex_key)

    def __xor__(self, other: "BooleanSignal") -> "BooleanSignal":
        if self.length != other.length:
            raise ValueError("length mismatch")
        return BooleanSignal(self.length, self.word ^ other.word)


@dataclass(frozen=True)
class SignedSignal:
    """Length-L vector with entries in {-1, +1}."""

    entries: tuple[int, ...]

    def __post_init__(self):
        if not self.entries or any(e not in (-1, 1) for e in self.entries):
            raise ValueError("entries must be -1 or +1")

    @property
    def length(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: int) -> int:
        return self.entries[index % len(self.entries)]

    def __mul__(self, other: "SignedSignal") -> "SignedSignal":
        """Entrywise product (the group operation on sign vectors)."""
        if len(self) != len(other):
            raise ValueError("length mismatch")
        return SignedSignal(tuple(a * b for a, b in zip(self.entries, other.entries)))


def signed(x: BooleanSignal) -> SignedSignal:
    """Map bits to signs: 0 -> +1, 1 -> -1 (entry j becomes 1 - 2*x[j])."""
    return SignedSignal(tuple(1 - 2 * ((x.word >> j) & 1) for j in range(x.length)))


def signed_weight(u: SignedSignal) -> int:
    """Sum of the +/-1 entries; equals L - 2*weight for a sign-mapped signal."""
    return sum(u.entries)


@dataclass(frozen=True)
class ShiftDistribution:
    """Exact rational distribution over Z_L: weights numerators[s] / denominator.

    Floating-point weights are rejected on construction; every downstream
    zero-test on autocorrelations and distribution derivatives relies on the
    weights being exact.
    """

    numerators: tuple[int, ...]
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        if not self.numerators:
            raise ValueError("empty distribution")
        if any(not isinstance(n, int) or n < 0 for n in self.numerators):
            raise ValueError("numerators must be non-negative integers")
        if sum(self.numerators) != self.denominator:
            raise ValueError("weights must sum to exactly 1")

    @classmethod
    def uniform(cls, length: int) -> "ShiftDistribution":
        return cls((1,) * length, length)

    @classmethod
    def from_weights(cls, weights: Sequence[Rational]) -> "ShiftDistribution":
        fracs = []
        for w in weights:
            if isinstance(w, float):
                raise TypeError("floating-point shift weights are not allowed; pass Fraction")
            fracs.append(Fraction(w))
        if any(f < 0 for f in fracs):
            raise ValueError("weights must be non-negative")
        den = 1
        for f in fracs:
            den = den * f.denominator // gcd(den, f.denominator)
        nums = tuple(int(f * den) for f in fracs)
        return cls(nums, den)

    def __len__(self) -> int:
        return len(self.numerators)

    def weight(self, shift: int) -> Fraction:
        return Fraction(self.numerators[shift % len(self.numerators)], self.denominator)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.numerators)) == 1

    @cached_property
    def _cumulative(self) -> np.ndarray:
        return np.cumsum(np.array(self.numerators, dtype=np.int64))


def draw_shift(shifts: ShiftDistribution, rng: np.random.Generator, size=None):
    """Sample shift indices by exact inverse CDF on the integer numerators."""
    r = rng.integers(0, shifts.denominator, size=size)
    out = np.searchsorted(shifts._cumulative, r, side="right")
    if size is None:
        return int(out)
    return out


@dataclass(frozen=True)
class DeletionPattern:
    """Ordered set of kept coordinates; everything outside it is deleted."""

    kept: tuple[int, ...]

    def __post_init__(self):
        if not self.kept:
            raise ValueError("at least one coordinate must be kept")
        if any(v < 0 for v in self.kept):
            raise ValueError("kept coordinates must be non-negative")
        if any(a >= b for a, b in zip(self.kept, self.kept[1:])):
            raise ValueError("kept coordinates must be strictly increasing")

    @classmethod
    def full(cls, length: int) -> "DeletionPattern":
        return cls(tuple(range(length)))

    def __len__(self) -> int:
        return len(self.kept)

    def is_full(self, length: int) -> bool:
        return self.kept == tuple(range(length))


@dataclass(frozen=True)
class ObservationModel:
    """Channel parameters: signal length, kept coordinates, shift law, flip probability.

    An observation of a signal x is x read at positions (S + kept[j]) mod L,
    with S drawn from `shifts`, XOR independent Bernoulli(flip_prob) noise.
    """

    length: int
    kept: DeletionPattern
    shifts: ShiftDistribution
    flip_prob: Union[float, Fraction]

    def __post_init__(self):
        if len(self.shifts) != self.length:
            raise ValueError("shift distribution length must equal signal length")
        if self.kept.kept[-1] >= self.length:
            raise ValueError("kept coordinates must be below the signal length")
        if not 0 <= self.flip_prob <= 1:
            raise ValueError("flip probability must be in [0, 1]")

    @classmethod
    def full_uniform(cls, length: int, flip_prob: Union[float, Fraction]) -> "ObservationModel":
        """The basic configuration: no deletions, uniform shifts."""
        return cls(length, DeletionPattern.full(length), ShiftDistribution.uniform(length), flip_prob)

    @property
    def num_kept(self) -> int:
        return len(self.kept)

    @property
    def snr(self) -> float:
        return snr(self.flip_prob)

    def to_config(self) -> dict:
        """JSON-ready record: {L, V, xi: {num, den}, p}."""
        return {
            "L": self.length,
            "V": list(self.kept.kept),
            "xi": {"num": list(self.shifts.numerators), "den": self.shifts.denominator},
            "p": float(self.flip_prob),
        }

    @classmethod
    def from_config(cls, config: dict) -> "ObservationModel":
        return cls(
            int(config["L"]),
            DeletionPattern(tuple(int(v) for v in config["V"])),
            ShiftDistribution(tuple(int(n) for n in config["xi"]["num"]), int(config["xi"]["den"])),
            config["p"],
        )


def snr(flip_prob: Union[float, Fraction]) -> Union[float, Fraction]:
    """Signal-to-noise ratio of the flip channel: (p - 1/2)^2."""
    if isinstance(flip_prob, Fraction):
        return (flip_prob - Fraction(1, 2)) ** 2
    return (flip_prob - 0.5) ** 2


def cyclic_shift(x: BooleanSignal, amount: int) -> BooleanSignal:
    """Rotate one step to the right `amount` times: result[j] = x[j - amount]."""
    length = x.length
    amount = int(amount) % length
    if amount == 0:
        return x
    mask = (1 << length) - 1
    word = ((x.word << amount) | (x.word >> (length - amount))) & mask
    return BooleanSignal(length, word)


def restrict(x: BooleanSignal, shift: int, kept: DeletionPattern) -> BooleanSignal:
    """Read x at the kept coordinates after shifting: result[j] = x[shift + kept[j]]."""
    length = x.length
    if kept.kept[-1] >= length:
        raise ValueError("kept coordinates must be below the signal length")
    shift = int(shift)
    word = 0
    for j, v in enumerate(kept.kept):
        word |= ((x.word >> ((shift + v) % length)) & 1) << j
    return BooleanSignal(len(kept), word)


def sample_observation(
    x: BooleanSignal, model: ObservationModel, rng: np.random.Generator
) -> BooleanSignal:
    """Draw one observation: random shift, restriction, independent bit flips."""
    if x.length != model.length:
        raise ValueError("signal length does not match model")
    s = draw_shift(model.shifts, rng)
    base = restrict(x, s, model.kept)
    flips = rng.random(model.num_kept) < float(model.flip_prob)
    noise_word = 0
    for j, f in enumerate(flips):
        if f:
            noise_word |= 1 << j
    return BooleanSignal(model.num_kept, base.word ^ noise_word)


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator for stream `stream` of the run seeded by `seed`.

    Streams with distinct keys are statistically independent, so trials can
    be generated in any order or in parallel without changing results.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=stream)))
