import numpy as np
import pytest
from fractions import Fraction
from itertools import product

from bmalign.autocorr import (
    NotFound,
    OrbitCatalog,
    autocorr_sq_diff,
    autocorrelation,
    canonical_rotation,
    class_min_order,
    min_order,
    necklace_count,
    orbit_representatives,
    pair_table,
    reduced_counts,
    signed_autocorrelation,
)
from bmalign.signals import (
    BooleanSignal,
    DeletionPattern,
    ShiftDistribution,
    cyclic_shift,
    signed,
)

from naive import naive_autocorr, naive_min_order, naive_sq_diff_sum

UNIFORM = {length: ShiftDistribution.uniform(length) for length in range(1, 15)}
FULL = {length: DeletionPattern.full(length) for length in range(1, 15)}

WITNESS_A = BooleanSignal.from_string("1101000")
WITNESS_B = BooleanSignal.from_string("1011000")


class TestAutocorrelation:
    def test_all_ones_is_one(self):
        x = BooleanSignal.ones(5)
        for k in [(0,), (1, 3), (0, 2, 4), (1, 1, 2, 2)]:
            assert autocorrelation(x, k, UNIFORM[5]) == 1
        skew = ShiftDistribution.from_weights(
            [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 16), Fraction(1, 16)]
        )
        assert autocorrelation(x, (0, 3), skew) == 1

    def test_single_one_order_one(self):
        assert autocorrelation(BooleanSignal.from_string("1000"), (0,), UNIFORM[4]) == Fraction(1, 4)

    def test_repeated_offset_is_idempotent(self):
        for word in range(1 << 5):
            x = BooleanSignal(5, word)
            assert autocorrelation(x, (0, 0), UNIFORM[5]) == autocorrelation(x, (0,), UNIFORM[5])

    def test_order_one_is_weight_over_length(self):
        for word in range(1 << 6):
            x = BooleanSignal(6, word)
            assert autocorrelation(x, (3,), UNIFORM[6]) == Fraction(x.weight, 6)

    def test_matches_naive_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(60):
            length = int(rng.integers(2, 11))
            x = BooleanSignal(length, int(rng.integers(0, 1 << length)))
            order = int(rng.integers(1, 5))
            offsets = tuple(int(v) for v in rng.integers(0, length, size=order))
            weights = [Fraction(1, length)] * length
            if rng.random() < 0.5:
                raw = [int(v) for v in rng.integers(0, 5, size=length)]
                raw[0] += 1
                total = sum(raw)
                weights = [Fraction(r, total) for r in raw]
            xi = ShiftDistribution.from_weights(weights)
            assert autocorrelation(x, offsets, xi) == naive_autocorr(x.bits(), offsets, weights)

    def test_integer_times_length_for_uniform(self):
        rng = np.random.default_rng(4)
        for _ in range(40):
            length = int(rng.integers(2, 12))
            x = BooleanSignal(length, int(rng.integers(0, 1 << length)))
            offsets = tuple(int(v) for v in rng.integers(0, length, size=3))
            value = autocorrelation(x, offsets, UNIFORM[length])
            assert (value * length).denominator == 1


class TestSignedAutocorrelation:
    def test_all_plus_one(self):
        u = signed(BooleanSignal.zeros(4))
        assert signed_autocorrelation(u, (0, 2), UNIFORM[4]) == 1

    def test_balanced_two(self):
        u = signed(BooleanSignal.from_string("10"))
        assert signed_autocorrelation(u, (0,), UNIFORM[2]) == 0

    def test_odd_orders_vanish_for_reversal_construction(self):
        # antisymmetric halves force every odd-order value to zero
        from bmalign.atlas import construct_witnesses

        x1, x2 = construct_witnesses(12, "even-style")
        for x in (x1, x2):
            u = signed(x)
            for k in [(0,), (3,)]:
                assert signed_autocorrelation(u, k, UNIFORM[12]) == 0
            for a, b in product(range(12), repeat=2):
                assert signed_autocorrelation(u, (0, a, b), UNIFORM[12]) == 0

    def test_repeated_offsets_not_idempotent(self):
        u = signed(BooleanSignal.from_string("110"))
        assert signed_autocorrelation(u, (0, 0), UNIFORM[3]) == 1


class TestSquaredGapSum:
    def test_witness_pair_value(self):
        assert autocorr_sq_diff(WITNESS_A, WITNESS_B, 3, FULL[7], UNIFORM[7]) == Fraction(12, 7)

    def test_below_order_vanishes(self):
        assert autocorr_sq_diff(WITNESS_A, WITNESS_B, 1, FULL[7], UNIFORM[7]) == 0
        assert autocorr_sq_diff(WITNESS_A, WITNESS_B, 2, FULL[7], UNIFORM[7]) == 0

    def test_equal_signals_vanish(self):
        x = BooleanSignal.from_string("10110")
        assert autocorr_sq_diff(x, x, 3, FULL[5], UNIFORM[5]) == 0

    def test_reduction_matches_full_enumeration(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            length = int(rng.integers(2, 9))
            w1 = int(rng.integers(0, 1 << length))
            w2 = int(rng.integers(0, 1 << length))
            order = int(rng.integers(1, 4))
            x1, x2 = BooleanSignal(length, w1), BooleanSignal(length, w2)
            got = autocorr_sq_diff(x1, x2, order, FULL[length], UNIFORM[length])
            weights = [Fraction(1, length)] * length
            want = naive_sq_diff_sum(x1.bits(), x2.bits(), order, range(length), weights)
            assert got == want

    def test_general_pattern_matches_naive(self):
        rng = np.random.default_rng(6)
        for _ in range(15):
            length = int(rng.integers(3, 8))
            kept = tuple(
                sorted(rng.choice(length, size=int(rng.integers(1, length)), replace=False))
            )
            raw = [int(v) + 1 for v in rng.integers(0, 3, size=length)]
            weights = [Fraction(r, sum(raw)) for r in raw]
            xi = ShiftDistribution.from_weights(weights)
            x1 = BooleanSignal(length, int(rng.integers(0, 1 << length)))
            x2 = BooleanSignal(length, int(rng.integers(0, 1 << length)))
            got = autocorr_sq_diff(x1, x2, 2, DeletionPattern(kept), xi)
            assert got == naive_sq_diff_sum(x1.bits(), x2.bits(), 2, kept, weights)


class TestMinOrder:
    def test_weight_difference_gives_one(self):
        assert min_order(BooleanSignal.from_string("1100"), BooleanSignal.from_string("1000"),
                         FULL[4], UNIFORM[4]) == 1

    def test_witness_pairs(self):
        from bmalign.atlas import construct_witnesses

        for length in (6, 7, 8, 11):
            x1, x2 = construct_witnesses(length, "prime-style")
            assert min_order(x1, x2, FULL[length], UNIFORM[length]) == 3

    def test_reversal_pair_stays_tied_through_three(self):
        from bmalign.atlas import construct_witnesses

        x1, x2 = construct_witnesses(12, "even-style")
        assert min_order(x1, x2, FULL[12], UNIFORM[12], max_order=3) == NotFound(3)

    def test_shift_equivalent_pair_never_separates(self):
        x = BooleanSignal.from_string("110100")
        y = cyclic_shift(x, 2)
        assert min_order(x, y, FULL[6], UNIFORM[6]) == NotFound(6)

    def test_equal_signals_rejected(self):
        x = BooleanSignal.from_string("101")
        with pytest.raises(ValueError):
            min_order(x, x, FULL[3], UNIFORM[3])

    def test_symmetric_in_arguments(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            length = int(rng.integers(2, 9))
            w1, w2 = rng.integers(0, 1 << length, size=2)
            if w1 == w2:
                continue
            x1, x2 = BooleanSignal(length, int(w1)), BooleanSignal(length, int(w2))
            assert min_order(x1, x2, FULL[length], UNIFORM[length]) == min_order(
                x2, x1, FULL[length], UNIFORM[length]
            )

    def test_matches_naive_oracle_with_deletions(self):
        rng = np.random.default_rng(8)
        kept = (0, 1, 2)
        weights = [Fraction(1, 5)] * 5
        for _ in range(25):
            w1, w2 = rng.integers(0, 32, size=2)
            if w1 == w2:
                continue
            x1, x2 = BooleanSignal(5, int(w1)), BooleanSignal(5, int(w2))
            got = min_order(x1, x2, DeletionPattern(kept), UNIFORM[5], max_order=3)
            want = naive_min_order(x1.bits(), x2.bits(), kept, weights, 3)
            assert got == (want if want is not None else NotFound(3))


class TestOrbitCatalog:
    def test_small_catalogs(self):
        assert [str(r) for r in orbit_representatives(3)] == ["000", "001", "011", "111"]
        assert [str(r) for r in orbit_representatives(2)] == ["00", "01", "11"]

    def test_counts_match_class_counting(self):
        for length in range(1, 13):
            assert len(orbit_representatives(length)) == necklace_count(length)

    def test_partition_property(self):
        # every signal is a shift of exactly one representative
        for length in (3, 5, 8):
            reps = orbit_representatives(length).representatives
            for word in range(1 << length):
                x = BooleanSignal(length, word)
                owners = [r for r in reps if canonical_rotation(x) == r]
                assert len(owners) == 1

    def test_representatives_are_canonical_and_sorted(self):
        catalog = orbit_representatives(9)
        reps = catalog.representatives
        assert all(canonical_rotation(r) == r for r in reps)
        assert list(reps) == sorted(reps)

    def test_to_lines(self):
        assert orbit_representatives(2).to_lines() == "00\n01\n11\n"

    def test_length_cap(self):
        with pytest.raises(ValueError):
            orbit_representatives(25)


class TestInvariances:
    def test_shift_invariance_uniform_full(self):
        for length in (4, 6):
            reps = orbit_representatives(length).representatives
            for x in reps:
                for s in range(length):
                    shifted = cyclic_shift(x, s)
                    for k in range(length):
                        assert autocorrelation(x, (k,), UNIFORM[length]) == autocorrelation(
                            shifted, (k,), UNIFORM[length]
                        )
                    for a, b in product(range(length), repeat=2):
                        assert autocorrelation(x, (a, b), UNIFORM[length]) == autocorrelation(
                            shifted, (a, b), UNIFORM[length]
                        )

    def test_index_permutation_and_translation(self):
        rng = np.random.default_rng(9)
        for _ in range(40):
            length = int(rng.integers(3, 9))
            x = BooleanSignal(length, int(rng.integers(0, 1 << length)))
            k = tuple(int(v) for v in rng.integers(0, length, size=3))
            base = autocorrelation(x, k, UNIFORM[length])
            perm = tuple(rng.permutation(k))
            assert autocorrelation(x, perm, UNIFORM[length]) == base
            s = int(rng.integers(0, length))
            translated = tuple((v + s) % length for v in k)
            assert autocorrelation(x, translated, UNIFORM[length]) == base

    def test_six_over_length_multiple_for_order_three_pairs(self):
        for length in (6, 7):
            reps = orbit_representatives(length).representatives
            found = 0
            for i in range(len(reps)):
                for j in range(i + 1, len(reps)):
                    if min_order(reps[i], reps[j], FULL[length], UNIFORM[length]) != 3:
                        continue
                    found += 1
                    scaled = length * autocorr_sq_diff(
                        reps[i], reps[j], 3, FULL[length], UNIFORM[length]
                    )
                    assert scaled.denominator == 1
                    assert scaled.numerator % 6 == 0
            assert found > 0


class TestClassMinOrder:
    def test_smallest_interesting_catalog(self):
        # brute-force value: weights already separate all four classes
        catalog = orbit_representatives(3)
        weights = [Fraction(1, 3)] * 3
        reps = catalog.representatives
        expected = max(
            naive_min_order(a.bits(), b.bits(), range(3), weights, 6)
            for i, a in enumerate(reps)
            for b in reps[i + 1 :]
        )
        order, _ = class_min_order(catalog, FULL[3], UNIFORM[3])
        assert order == expected == 1

    def test_length_seven(self):
        order, witness = class_min_order(orbit_representatives(7), FULL[7], UNIFORM[7])
        assert order == 3
        assert min_order(witness[0], witness[1], FULL[7], UNIFORM[7]) == 3

    def test_length_twelve_reaches_four(self):
        order, witness = class_min_order(orbit_representatives(12), FULL[12], UNIFORM[12])
        assert order == 4
        assert {canonical_rotation(w) for w in witness} == {
            canonical_rotation(x)
            for x in __import__("bmalign.atlas", fromlist=["construct_witnesses"]).construct_witnesses(12, "even-style")
        }

    def test_not_found_propagates(self):
        order, witness = class_min_order(orbit_representatives(7), FULL[7], UNIFORM[7], max_order=2)
        assert order == NotFound(2)
        assert witness[0] != witness[1]

    def test_needs_two_members(self):
        with pytest.raises(ValueError):
            class_min_order(OrbitCatalog(1, (BooleanSignal.from_string("0"),)), FULL[1], UNIFORM[1])


class TestPairTable:
    def test_structure_and_values(self):
        rows = pair_table(orbit_representatives(4), FULL[4], UNIFORM[4])
        assert len(rows) == 15
        for x1, x2, order, gap in rows:
            assert x1 < x2
            if isinstance(order, NotFound):
                assert gap is None
            else:
                assert gap is not None and gap > 0
                assert autocorr_sq_diff(x1, x2, order, FULL[4], UNIFORM[4]) == gap


class TestReducedCounts:
    def test_matches_autocorrelation_values(self):
        x = BooleanSignal.from_string("110100")
        counts = reduced_counts(x, 2)
        for j in range(6):
            assert Fraction(int(counts[j]), 6) == autocorrelation(x, (0, j), UNIFORM[6])
