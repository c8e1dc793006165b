"""Exact conditional observation distributions and their expansion at p = 1/2.

For a fixed signal the observation distribution over Z_2^K is a mixture over
shifts of binomial-type terms; it is stored exactly as per-outcome counts of
shifts at each Hamming distance.  Substituting p = 1/2 - eps turns each
outcome probability into a degree-K polynomial in eps with rational
coefficients, which this module computes exactly.  Whether two signals'
distributions first differ at derivative order m is then an integer
comparison, with no tolerance anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Union

import numpy as np

from .signals import BooleanSignal, ObservationModel, restrict
from .autocorr import NotFound

MAX_PROFILE_KEPT = 20  # 2^K outcomes are materialized


@dataclass(frozen=True)
class HammingProfile:
    """Counts n[y, d] of shift-weight numerators at Hamming distance d from y.

    The probability of outcome y at flip probability p is
    sum_d n[y, d] p^d (1-p)^(K-d) / denominator.
    """

    num_kept: int
    denominator: int
    counts: np.ndarray  # shape (2^K, K+1), int64

    def __post_init__(self):
        self.counts.setflags(write=False)

    @property
    def num_outcomes(self) -> int:
        return 1 << self.num_kept

    def probability(self, outcome: Union[BooleanSignal, int], p) -> Union[Fraction, float]:
        """Mass of one outcome; exact if p is a Fraction or int, float otherwise."""
        y = outcome.word if isinstance(outcome, BooleanSignal) else int(outcome)
        k = self.num_kept
        if isinstance(p, float):
            q = 1.0 - p
            acc = 0.0
            for d in range(k + 1):
                c = int(self.counts[y, d])
                if c:
                    acc += c * p**d * q ** (k - d)
            return acc / self.denominator
        p = Fraction(p)
        q = 1 - p
        acc = Fraction(0)
        for d in range(k + 1):
            c = int(self.counts[y, d])
            if c:
                acc += c * p**d * q ** (k - d)
        return acc / self.denominator

    def probabilities(self, p: float) -> np.ndarray:
        """Float probability vector over all 2^K outcomes."""
        p = float(p)
        k = self.num_kept
        powers = np.array([p**d * (1.0 - p) ** (k - d) for d in range(k + 1)])
        return (self.counts @ powers) / self.denominator

    def probabilities_exact(self, p) -> list[Fraction]:
        p = Fraction(p)
        q = 1 - p
        k = self.num_kept
        powers = [p**d * q ** (k - d) for d in range(k + 1)]
        return [
            sum((int(c) * w for c, w in zip(row, powers)), Fraction(0)) / self.denominator
            for row in self.counts
        ]

    def to_csv_rows(self) -> list[tuple[str, int, int, int]]:
        """(outcome bit-string, distance, count, denominator) for nonzero counts."""
        rows = []
        for y in range(self.num_outcomes):
            text = str(BooleanSignal(self.num_kept, y))
            for d in range(self.num_kept + 1):
                c = int(self.counts[y, d])
                if c:
                    rows.append((text, d, c, self.denominator))
        return rows


def hamming_profile(x, kept, shifts) -> HammingProfile:
    """Profile of the observation distribution for signal x under (kept, shifts)."""
    num_kept = len(kept)
    if num_kept > MAX_PROFILE_KEPT:
        raise ValueError(f"kept size {num_kept} exceeds cap {MAX_PROFILE_KEPT}")
    outcomes = np.arange(1 << num_kept, dtype=np.uint32)
    counts = np.zeros((1 << num_kept, num_kept + 1), dtype=np.int64)
    rows = np.arange(1 << num_kept)
    for s in range(x.length):
        weight = shifts.numerators[s]
        if weight == 0:
            continue
        base = restrict(x, s, kept).word
        dist = np.bitwise_count(outcomes ^ np.uint32(base))
        counts[rows, dist] += weight
    return HammingProfile(num_kept, shifts.denominator, counts)


def conditional_distribution(x: BooleanSignal, model: ObservationModel) -> HammingProfile:
    """Exact distribution of one observation given the signal (p enters only at evaluation)."""
    if x.length != model.length:
        raise ValueError("signal length does not match model")
    return hamming_profile(x, model.kept, model.shifts)


def _power_expansion_table(num_kept: int) -> list[list[int]]:
    """table[d][m]: integer such that p^d (1-p)^(K-d) at p = 1/2 - eps equals
    sum_m table[d][m] eps^m / 2^(K-m)."""
    k = num_kept
    return [
        [
            sum(
                (-1) ** i * comb(d, i) * comb(k - d, m - i)
                for i in range(max(0, m - (k - d)), min(d, m) + 1)
            )
            for m in range(k + 1)
        ]
        for d in range(k + 1)
    ]


@dataclass(frozen=True)
class EpsilonExpansion:
    """Exact coefficients of every outcome's mass as a polynomial in eps = 1/2 - p.

    Stored as scaled integers: coefficient(y, m) = scaled[y, m] / (D * 2^(K-m)).
    The constant term is 2^-K for every outcome, and the m-th derivative of the
    mass in p at p = 1/2 is (-1)^m m! coefficient(y, m).
    """

    num_kept: int
    denominator: int
    scaled: np.ndarray  # shape (2^K, K+1); int64, or object when entries are huge

    def __post_init__(self):
        self.scaled.setflags(write=False)

    def coefficient(self, outcome: Union[BooleanSignal, int], order: int) -> Fraction:
        y = outcome.word if isinstance(outcome, BooleanSignal) else int(outcome)
        return Fraction(
            int(self.scaled[y, order]),
            self.denominator * (1 << (self.num_kept - order)),
        )

    def derivative_at_half(self, outcome: Union[BooleanSignal, int], order: int) -> Fraction:
        return (-1) ** order * factorial(order) * self.coefficient(outcome, order)

    def centered_deltas(self, eps: float) -> np.ndarray:
        """Float vector of 2^K * mass - 1 at p = 1/2 - eps, by Horner on the
        exact coefficients.  Accurate to roundoff even when the deltas are tiny."""
        k = self.num_kept
        coef = self.scaled.astype(np.float64)
        for m in range(k + 1):
            coef[:, m] *= 2.0**m / self.denominator
        out = np.zeros(self.scaled.shape[0])
        for m in range(k, 0, -1):  # constant term drops out of the delta
            out = (out + coef[:, m]) * eps
        return out


def epsilon_expansion(profile: HammingProfile) -> EpsilonExpansion:
    """Expand the profile at p = 1/2 - eps; exact integer arithmetic throughout."""
    k = profile.num_kept
    table = _power_expansion_table(k)
    max_abs = max(abs(v) for row in table for v in row)
    bound = (k + 1) * int(profile.counts.max(initial=1)) * max_abs
    if bound < 2**62:
        scaled = profile.counts @ np.array(table, dtype=np.int64)
    else:
        # arbitrary-precision fallback for extreme shift-weight denominators
        rows = []
        for row in profile.counts:
            ints = [int(v) for v in row]
            rows.append([sum(n * table[d][m] for d, n in enumerate(ints)) for m in range(k + 1)])
        scaled = np.array(rows, dtype=object)
    return EpsilonExpansion(k, profile.denominator, scaled)


def derivative_order(
    x1: BooleanSignal, x2: BooleanSignal, model: ObservationModel
) -> int | NotFound:
    """Smallest derivative order at which the two conditional distributions
    differ at p = 1/2, or NotFound(K) when they are identical polynomials."""
    if x1 == x2:
        raise ValueError("signals must be distinct")
    e1 = epsilon_expansion(conditional_distribution(x1, model))
    e2 = epsilon_expansion(conditional_distribution(x2, model))
    return first_difference_order(e1, e2)


def first_difference_order(e1: EpsilonExpansion, e2: EpsilonExpansion) -> int | NotFound:
    if e1.num_kept != e2.num_kept or e1.denominator != e2.denominator:
        raise ValueError("expansions come from different models")
    for m in range(e1.num_kept + 1):
        if not np.array_equal(e1.scaled[:, m], e2.scaled[:, m]):
            return m
    return NotFound(e1.num_kept)


def chi2_term(
    x1: BooleanSignal, x2: BooleanSignal, model: ObservationModel, order: int
) -> Fraction:
    """Exact chi-square-style contrast of the order-n derivatives at p = 1/2:
    sum over outcomes of (difference of n-th derivatives)^2 / (uniform mass).

    Meaningful as the leading contrast when all lower-order derivatives agree.
    """
    e1 = epsilon_expansion(conditional_distribution(x1, model))
    e2 = epsilon_expansion(conditional_distribution(x2, model))
    return chi2_from_expansions(e1, e2, order)


def chi2_from_expansions(e1: EpsilonExpansion, e2: EpsilonExpansion, order: int) -> Fraction:
    if e1.num_kept != e2.num_kept or e1.denominator != e2.denominator:
        raise ValueError("expansions come from different models")
    k = e1.num_kept
    total = 0
    col1, col2 = e1.scaled[:, order], e2.scaled[:, order]
    for a, b in zip(col1, col2):
        d = int(a) - int(b)
        total += d * d
    scale = e1.denominator * (1 << (k - order))
    return Fraction((1 << k) * factorial(order) ** 2 * total, scale * scale)
