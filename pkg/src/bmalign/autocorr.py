"""Cyclic autocorrelations, distinguishing orders, and necklace catalogs.

The order-d autocorrelation of x at offsets (k_1, ..., k_d) is the
shift-distribution-weighted average of the products x[k_1+s] * ... * x[k_d+s].
All values are exact rationals; deciding at which order two signals first
differ is a zero-test and is never done in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .signals import (
    MAX_EXHAUSTIVE_LENGTH,
    BooleanSignal,
    DeletionPattern,
    ShiftDistribution,
    SignedSignal,
    cyclic_shift,
)


@dataclass(frozen=True)
class NotFound:
    """Tagged result for an order search that exhausted its cap."""

    limit: int

    def __str__(self) -> str:
        return f">{self.limit}"


DEFAULT_MAX_ORDER = 6


def _rotation_words(x: BooleanSignal) -> list[int]:
    """words[k] has bit s equal to x[(s + k) mod L]."""
    return [cyclic_shift(x, -k).word for k in range(x.length)]


def _mask_numerator(mask: int, numerators: tuple[int, ...]) -> int:
    """Sum of shift-weight numerators over the set bits of `mask`."""
    total = 0
    while mask:
        low = mask & -mask
        total += numerators[low.bit_length() - 1]
        mask ^= low
    return total


def autocorrelation(
    x: BooleanSignal, offsets: Sequence[int], shifts: ShiftDistribution
) -> Fraction:
    """Exact autocorrelation of x at the given offset tuple.

    Offsets are reduced mod L; repeated offsets are idempotent because the
    entries are 0/1.
    """
    if len(shifts) != x.length:
        raise ValueError("shift distribution length must equal signal length")
    if not offsets:
        raise ValueError("offset tuple must have order at least 1")
    mask = (1 << x.length) - 1
    for k in set(int(k) % x.length for k in offsets):
        mask &= cyclic_shift(x, -k).word
    return Fraction(_mask_numerator(mask, shifts.numerators), shifts.denominator)


def signed_autocorrelation(
    u: SignedSignal, offsets: Sequence[int], shifts: ShiftDistribution
) -> Fraction:
    """Autocorrelation of a +/-1 signal; repeated offsets are not idempotent here."""
    if len(shifts) != u.length:
        raise ValueError("shift distribution length must equal signal length")
    if not offsets:
        raise ValueError("offset tuple must have order at least 1")
    length = u.length
    total = 0
    for s in range(length):
        prod = 1
        for k in offsets:
            prod *= u.entries[(k + s) % length]
        total += shifts.numerators[s] * prod
    return Fraction(total, shifts.denominator)


def _check_pair(x1: BooleanSignal, x2: BooleanSignal, kept: DeletionPattern,
                shifts: ShiftDistribution) -> None:
    if x1.length != x2.length:
        raise ValueError("signals must have equal length")
    if len(shifts) != x1.length:
        raise ValueError("shift distribution length must equal signal length")
    if kept.kept[-1] >= x1.length:
        raise ValueError("kept coordinates must be below the signal length")


def autocorr_sq_diff(
    x1: BooleanSignal,
    x2: BooleanSignal,
    order: int,
    kept: DeletionPattern,
    shifts: ShiftDistribution,
) -> Fraction:
    """Sum over all order-d offset tuples in kept^d of squared autocorrelation gaps.

    With uniform shifts and no deletions the sum is translation invariant in
    the offsets, so only tuples with first offset 0 are enumerated and the
    reduced sum is multiplied by L.
    """
    _check_pair(x1, x2, kept, shifts)
    if order < 1:
        raise ValueError("order must be at least 1")
    length = x1.length
    rot1 = _rotation_words(x1)
    rot2 = _rotation_words(x2)
    nums = shifts.numerators
    den = shifts.denominator
    reduce_first = shifts.is_uniform and kept.is_full(length)
    total = 0
    if reduce_first:
        for rest in product(range(length), repeat=order - 1):
            m1, m2 = rot1[0], rot2[0]
            for k in rest:
                m1 &= rot1[k]
                m2 &= rot2[k]
            diff = _mask_numerator(m1, nums) - _mask_numerator(m2, nums)
            total += diff * diff
        return Fraction(length * total, den * den)
    full = (1 << length) - 1
    for tup in product(kept.kept, repeat=order):
        m1, m2 = full, full
        for k in tup:
            m1 &= rot1[k]
            m2 &= rot2[k]
        diff = _mask_numerator(m1, nums) - _mask_numerator(m2, nums)
        total += diff * diff
    return Fraction(total, den * den)


def min_order(
    x1: BooleanSignal,
    x2: BooleanSignal,
    kept: DeletionPattern,
    shifts: ShiftDistribution,
    max_order: int = DEFAULT_MAX_ORDER,
) -> int | NotFound:
    """Smallest order at which some offset tuple separates x1 from x2.

    Exact comparison throughout; returns NotFound(max_order) if all
    autocorrelations through max_order agree.
    """
    if x1 == x2:
        raise ValueError("signals must be distinct")
    _check_pair(x1, x2, kept, shifts)
    if max_order < 1:
        raise ValueError("max_order must be at least 1")
    length = x1.length
    rot1 = _rotation_words(x1)
    rot2 = _rotation_words(x2)
    nums = shifts.numerators
    reduce_first = shifts.is_uniform and kept.is_full(length)
    for order in range(1, max_order + 1):
        if reduce_first:
            for rest in product(range(length), repeat=order - 1):
                m1, m2 = rot1[0], rot2[0]
                for k in rest:
                    m1 &= rot1[k]
                    m2 &= rot2[k]
                if m1.bit_count() != m2.bit_count():
                    return order
        else:
            full = (1 << length) - 1
            for tup in product(kept.kept, repeat=order):
                m1, m2 = full, full
                for k in tup:
                    m1 &= rot1[k]
                    m2 &= rot2[k]
                if _mask_numerator(m1, nums) != _mask_numerator(m2, nums):
                    return order
    return NotFound(max_order)


# --- necklace catalogs ----------------------------------------------------


def necklace_count(length: int) -> int:
    """Number of cyclic equivalence classes of binary strings (Burnside)."""

    def totient(n: int) -> int:
        result, m, p = n, n, 2
        while p * p <= m:
            if m % p == 0:
                while m % p == 0:
                    m //= p
                result -= result // p
            p += 1
        if m > 1:
            result -= result // m
        return result

    return sum(totient(length // d) * (1 << d) for d in range(1, length + 1) if length % d == 0) // length


def canonical_rotation(x: BooleanSignal) -> BooleanSignal:
    """Lexicographically smallest rotation (the class representative)."""
    return min(cyclic_shift(x, s) for s in range(x.length))


@dataclass(frozen=True)
class OrbitCatalog:
    """One canonical representative per cyclic-shift class, in lexicographic order."""

    length: int
    representatives: tuple[BooleanSignal, ...]

    def __len__(self) -> int:
        return len(self.representatives)

    def __iter__(self):
        return iter(self.representatives)

    def __getitem__(self, i: int) -> BooleanSignal:
        return self.representatives[i]

    def to_lines(self) -> str:
        """Newline-separated bit-strings, one representative per line."""
        return "\n".join(str(r) for r in self.representatives) + "\n"


def orbit_representatives(length: int) -> OrbitCatalog:
    """Enumerate canonical representatives without scanning all 2^L words.

    Uses the classic prenecklace recursion, which emits exactly the
    lexicographically-smallest rotations in lexicographic order.
    """
    if not 1 <= length <= MAX_EXHAUSTIVE_LENGTH:
        raise ValueError(f"length must be in [1, {MAX_EXHAUSTIVE_LENGTH}] for exhaustive enumeration")
    reps: list[BooleanSignal] = []
    work = [0] * (length + 1)

    def gen(t: int, p: int) -> None:
        if t > length:
            if length % p == 0:
                reps.append(BooleanSignal.from_bits(work[1 : length + 1]))
            return
        work[t] = work[t - p]
        gen(t + 1, p)
        for b in range(work[t - p] + 1, 2):
            work[t] = b
            gen(t + 1, t)

    gen(1, 1)
    return OrbitCatalog(length, tuple(reps))


# --- class-level order ------------------------------------------------------


def _signature(x: BooleanSignal, order: int, kept: DeletionPattern,
               shifts: ShiftDistribution, reduce_first: bool):
    rot = _rotation_words(x)
    if reduce_first:
        counts = []
        for rest in product(range(x.length), repeat=order - 1):
            m = rot[0]
            for k in rest:
                m &= rot[k]
            counts.append(m.bit_count())
        return tuple(counts)
    full = (1 << x.length) - 1
    nums = shifts.numerators
    counts = []
    for tup in product(kept.kept, repeat=order):
        m = full
        for k in tup:
            m &= rot[k]
        counts.append(_mask_numerator(m, nums))
    return tuple(counts)


def class_min_order(
    catalog: OrbitCatalog,
    kept: DeletionPattern,
    shifts: ShiftDistribution,
    max_order: int = DEFAULT_MAX_ORDER,
) -> tuple[int | NotFound, tuple[BooleanSignal, BooleanSignal]]:
    """Hardest pairwise distinguishing order over the catalog, with a witness pair.

    Refines the catalog into groups with identical order-d signatures for
    increasing d; agreement at order d implies agreement at all lower orders,
    so a group split at depth d certifies a pair with min_order exactly d.
    Returns (NotFound(max_order), tied_pair) if some pair never separates.
    """
    reps = catalog.representatives
    if len(reps) < 2:
        raise ValueError("catalog must contain at least two representatives")
    if kept.kept[-1] >= catalog.length:
        raise ValueError("kept coordinates must be below the signal length")
    reduce_first = shifts.is_uniform and kept.is_full(catalog.length)
    groups = [list(range(len(reps)))]
    deepest = 0
    witness: tuple[int, int] | None = None
    for order in range(1, max_order + 1):
        survivors: list[list[int]] = []
        candidates: list[tuple[int, int]] = []
        for group in groups:
            sigs = {i: _signature(reps[i], order, kept, shifts, reduce_first) for i in group}
            parts: dict = {}
            for i in group:
                parts.setdefault(sigs[i], []).append(i)
            if len(parts) > 1:
                lead = group[0]
                mate = next(i for i in group if sigs[i] != sigs[lead])
                candidates.append((lead, mate))
            survivors.extend(part for part in parts.values() if len(part) >= 2)
        if candidates:
            deepest = order
            witness = min(candidates)
        groups = survivors
        if not groups:
            break
    if groups:
        tied = min(groups)
        return NotFound(max_order), (reps[tied[0]], reps[tied[1]])
    assert witness is not None
    return deepest, (reps[witness[0]], reps[witness[1]])


def pair_table(
    catalog: OrbitCatalog,
    kept: DeletionPattern,
    shifts: ShiftDistribution,
    max_order: int = DEFAULT_MAX_ORDER,
) -> list[tuple[BooleanSignal, BooleanSignal, int | NotFound, Fraction | None]]:
    """Per-pair rows (x1, x2, t, squared-gap sum at t) over distinct catalog pairs."""
    rows = []
    reps = catalog.representatives
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            t = min_order(reps[i], reps[j], kept, shifts, max_order)
            gap = None
            if not isinstance(t, NotFound):
                gap = autocorr_sq_diff(reps[i], reps[j], t, kept, shifts)
            rows.append((reps[i], reps[j], t, gap))
    return rows


# --- bulk helpers for exhaustive sweeps (uniform shifts, no deletions) ------


def reduced_counts(x: BooleanSignal, order: int) -> np.ndarray:
    """Shift-hit counts for all reduced order-d offset tuples (first offset 0).

    Entry for (0, k_2, ..., k_d) counts the shifts s with
    x[s] = x[k_2+s] = ... = x[k_d+s] = 1.  Valid for uniform shifts with no
    deletions, where autocorrelations are these counts divided by L.
    """
    rot = np.array(_rotation_words(x), dtype=np.uint32)
    level = np.array([x.word], dtype=np.uint32)
    for _ in range(order - 1):
        level = (level[:, None] & rot[None, :]).ravel()
    return np.bitwise_count(level).astype(np.int64)


def reduced_count_matrix(signals: Sequence[BooleanSignal], order: int) -> np.ndarray:
    """Stack of reduced_counts rows, one per signal."""
    return np.stack([reduced_counts(x, order) for x in signals])
