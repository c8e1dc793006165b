"""Exhaustive per-length verification over the full necklace catalog.

For each signal length this module computes the hardest pairwise
distinguishing order over all necklace representatives, the minimum order-3
squared autocorrelation gap among pairs that first differ at order 3, and a
regime classification with assertable invariants: prime lengths >= 7 pin the
gap to exactly 12/L, even lengths >= 12 pin it to 0 with order at least 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np

from ._threads import thread_map
from .autocorr import (
    NotFound,
    OrbitCatalog,
    autocorr_sq_diff,
    class_min_order,
    min_order,
    necklace_count,
    orbit_representatives,
    reduced_count_matrix,
    reduced_counts,
)
from .observation import (
    chi2_from_expansions,
    epsilon_expansion,
    first_difference_order,
    hamming_profile,
)
from .signals import BooleanSignal, DeletionPattern, ShiftDistribution

VERIFY_MIN_LENGTH = 3
VERIFY_MAX_LENGTH = 14

BRANCH_SMALL = "small-L"
BRANCH_PRIME = "prime-case"
BRANCH_EVEN = "even-case"
BRANCH_OPEN = "open"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def classify_branch(length: int) -> str:
    if length <= 5:
        return BRANCH_SMALL
    if _is_prime(length):
        return BRANCH_PRIME
    if length % 2 == 0 and length >= 12:
        return BRANCH_EVEN
    return BRANCH_OPEN


@dataclass(frozen=True)
class AtlasRow:
    """Computed facts for one length (uniform shifts, no deletions)."""

    length: int
    orbit_count: int
    count_note: str
    t_class: int | NotFound
    b3: Fraction | None
    branch: str
    witness: tuple[BooleanSignal, BooleanSignal] | None

    def to_record(self) -> dict:
        return {
            "L": self.length,
            "orbit_count": self.orbit_count,
            "count_note": self.count_note,
            "t_class": str(self.t_class) if isinstance(self.t_class, NotFound) else self.t_class,
            "B3_num": "" if self.b3 is None else self.b3.numerator,
            "B3_den": "" if self.b3 is None else self.b3.denominator,
            "branch": self.branch,
            "witness": "" if self.witness is None else f"{self.witness[0]}|{self.witness[1]}",
        }


def verify_length(length: int, max_order: int = 6) -> AtlasRow:
    """Exhaustive sweep of one length: class order, order-3 gap minimum, branch.

    The order-3 gap minimum is taken over pairs whose distinguishing order is
    exactly 3 (the pairs that set the SNR^3 coefficient); it is 0 when some
    pair survives order 3 entirely, and absent when every pair separates
    earlier.
    """
    if not VERIFY_MIN_LENGTH <= length <= VERIFY_MAX_LENGTH:
        raise ValueError(
            f"length must be in [{VERIFY_MIN_LENGTH}, {VERIFY_MAX_LENGTH}] for the exhaustive sweep"
        )
    catalog = orbit_representatives(length)
    reps = catalog.representatives
    count = len(reps)
    assert count == necklace_count(length)

    t_class, t_witness = class_min_order(catalog, DeletionPattern.full(length),
                                         ShiftDistribution.uniform(length), max_order)

    # Order-3 analysis via integer count vectors: the squared gap between two
    # signals' order-3 count vectors, divided by L, is their order-3 b-sum.
    counts3 = reduced_count_matrix(reps, 3)
    gram = counts3 @ counts3.T
    diag = np.diag(gram)
    dist2 = diag[:, None] + diag[None, :] - 2 * gram
    sig2 = [reduced_counts(x, 2).tobytes() for x in reps]
    buckets: dict[bytes, list[int]] = {}
    for i, key in enumerate(sig2):
        buckets.setdefault(key, []).append(i)
    order3_min: int | None = None
    order3_pair: tuple[int, int] | None = None
    deep_pair_exists = False
    for group in buckets.values():
        for a in range(len(group)):
            for b in range(a + 1, len(group)):
                i, j = group[a], group[b]
                d2 = int(dist2[i, j])
                if d2 == 0:
                    deep_pair_exists = True
                elif order3_min is None or d2 < order3_min or (
                    d2 == order3_min and (i, j) < order3_pair
                ):
                    order3_min = d2
                    order3_pair = (i, j)
    if deep_pair_exists:
        b3: Fraction | None = Fraction(0)
    elif order3_min is not None:
        b3 = Fraction(order3_min, length)
    else:
        b3 = None

    if isinstance(t_class, int) and t_class == 3 and order3_pair is not None:
        witness = (reps[order3_pair[0]], reps[order3_pair[1]])
    else:
        witness = t_witness

    branch = classify_branch(length)
    if _is_prime(length):
        note = (
            f"catalog counts necklace classes ({count}); the 2^L-2 = {2**length - 2} "
            "non-constant signals split into full orbits at prime length"
        )
    else:
        note = ""
    return AtlasRow(length, count, note, t_class, b3, branch, witness)


def check_row(row: AtlasRow) -> list[str]:
    """Branch invariant violations; empty when the row is consistent."""
    problems = []
    t = row.t_class
    if row.branch == BRANCH_PRIME:
        if t != 3:
            problems.append(f"L={row.length}: prime-case requires t_class 3, got {t}")
        if row.b3 != Fraction(12, row.length):
            problems.append(
                f"L={row.length}: prime-case requires B3 exactly 12/{row.length}, got {row.b3}"
            )
    if row.branch == BRANCH_EVEN:
        if row.b3 != 0:
            problems.append(f"L={row.length}: even-case requires B3 = 0, got {row.b3}")
        if isinstance(t, int) and t < 4:
            problems.append(f"L={row.length}: even-case requires t_class >= 4, got {t}")
    if row.length >= 6 and row.b3 is not None:
        if 0 < row.b3 < Fraction(12, row.length):
            problems.append(
                f"L={row.length}: order-3 gap minimum {row.b3} lies strictly between 0 and 12/L"
            )
    return problems


def construct_witnesses(
    length: int, kind: str
) -> tuple[BooleanSignal, BooleanSignal]:
    """Explicit hard pairs.

    prime-style (any length >= 6): 1101 and 1011 followed by zeros; these
    first differ at order 3 with squared gap exactly 12/L.
    even-style (even length >= 12): a half-ones/half-zeros pattern and its
    reversal; these agree on all autocorrelations through order 3.
    """
    if kind == "prime-style":
        if length < 6:
            raise ValueError("prime-style needs length >= 6")
        first = BooleanSignal.from_bits([1, 1, 0, 1] + [0] * (length - 4))
        second = BooleanSignal.from_bits([1, 0, 1, 1] + [0] * (length - 4))
        return first, second
    if kind == "even-style":
        if length < 12 or length % 2:
            raise ValueError("even-style needs even length >= 12")
        half = length // 2 - 3
        bits = [1, 1, 0] + [1] * half + [0, 0, 1] + [0] * half
        first = BooleanSignal.from_bits(bits)
        second = BooleanSignal.from_bits(bits[::-1])
        return first, second
    raise ValueError(f"unknown witness kind {kind!r}")


def check_witness_construction(length: int, max_order: int = 6) -> list[str]:
    """Cross-check the explicit pairs against the exhaustive sweep quantities."""
    problems = []
    if length >= 6:
        x1, x2 = construct_witnesses(length, "prime-style")
        kept = DeletionPattern.full(length)
        uniform = ShiftDistribution.uniform(length)
        t = min_order(x1, x2, kept, uniform, max_order)
        if t != 3:
            problems.append(f"L={length}: prime-style pair has order {t}, expected 3")
        gap = autocorr_sq_diff(x1, x2, 3, kept, uniform)
        if gap != Fraction(12, length):
            problems.append(f"L={length}: prime-style pair gap {gap}, expected 12/{length}")
    if length >= 12 and length % 2 == 0:
        x1, x2 = construct_witnesses(length, "even-style")
        kept = DeletionPattern.full(length)
        uniform = ShiftDistribution.uniform(length)
        t = min_order(x1, x2, kept, uniform, max_order=3)
        if not isinstance(t, NotFound):
            problems.append(
                f"L={length}: even-style pair separates at order {t}, expected agreement through 3"
            )
    return problems


@dataclass(frozen=True)
class PairCheck:
    """One pair's dual-route comparison row."""

    length: int
    kept_desc: str
    x1: BooleanSignal
    x2: BooleanSignal
    t: int | NotFound
    s: int | NotFound
    lhs: Fraction | None  # derivative contrast at order s
    rhs: Fraction | None  # 2^(4s) s! times the order-s squared autocorrelation gap
    ok: bool

    def to_record(self) -> dict:
        return {
            "L": self.length,
            "V": self.kept_desc,
            "x1": str(self.x1),
            "x2": str(self.x2),
            "t": str(self.t) if isinstance(self.t, NotFound) else self.t,
            "s": str(self.s) if isinstance(self.s, NotFound) else self.s,
            "lhs": "" if self.lhs is None else f"{self.lhs.numerator}/{self.lhs.denominator}",
            "rhs": "" if self.rhs is None else f"{self.rhs.numerator}/{self.rhs.denominator}",
            "ok": self.ok,
        }


def _sweep_one(length: int, kept: DeletionPattern) -> list[PairCheck]:
    catalog = orbit_representatives(length)
    uniform = ShiftDistribution.uniform(length)
    num_kept = len(kept)
    desc = "full" if kept.is_full(length) else "|".join(str(v) for v in kept.kept)
    expansions = [epsilon_expansion(hamming_profile(x, kept, uniform)) for x in catalog]
    reps = catalog.representatives
    pairs = [(i, j) for i in range(len(reps)) for j in range(i + 1, len(reps))]

    def check(pair: tuple[int, int]) -> PairCheck:
        i, j = pair
        x1, x2 = reps[i], reps[j]
        s = first_difference_order(expansions[i], expansions[j])
        t = min_order(x1, x2, kept, uniform, max_order=num_kept)
        ok = t == s
        lhs = rhs = None
        if ok and isinstance(s, int):
            lhs = chi2_from_expansions(expansions[i], expansions[j], s)
            rhs = 2 ** (4 * s) * factorial(s) * autocorr_sq_diff(x1, x2, s, kept, uniform)
            ok = lhs == rhs
        return PairCheck(length, desc, x1, x2, t, s, lhs, rhs, ok)

    return thread_map(check, pairs)


def identity_sweep(
    lengths: Sequence[int],
    deletion_cases: Sequence[tuple[int, tuple[int, ...]]] = (),
) -> tuple[list[PairCheck], list[PairCheck]]:
    """Dual-route check over every distinct representative pair.

    For each pair the distribution-derivative order must equal the
    autocorrelation order, and at that order the exact derivative contrast
    must equal 2^(4s) s! times the squared autocorrelation gap, both sides
    computed through independent code paths.  Returns (rows, violations).
    """
    rows: list[PairCheck] = []
    for length in lengths:
        rows.extend(_sweep_one(length, DeletionPattern.full(length)))
    for length, kept in deletion_cases:
        rows.extend(_sweep_one(length, DeletionPattern(tuple(kept))))
    violations = [row for row in rows if not row.ok]
    return rows, violations
