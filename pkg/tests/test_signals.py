import numpy as np
import pytest
from fractions import Fraction

from bmalign.signals import (
    BooleanSignal,
    DeletionPattern,
    ObservationModel,
    ShiftDistribution,
    SignedSignal,
    cyclic_shift,
    draw_shift,
    make_rng,
    restrict,
    sample_observation,
    signed,
    signed_weight,
    snr,
)


class TestBooleanSignal:
    def test_string_round_trip(self):
        x = BooleanSignal.from_string("1101000")
        assert str(x) == "1101000"
        assert x.bits() == (1, 1, 0, 1, 0, 0, 0)
        assert x.weight == 3
        assert len(x) == 7

    def test_from_bits_matches_from_string(self):
        assert BooleanSignal.from_bits([1, 0, 1]) == BooleanSignal.from_string("101")

    def test_indexing_is_cyclic(self):
        x = BooleanSignal.from_string("100")
        assert x[0] == 1
        assert x[3] == 1
        assert x[-1] == 0

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            BooleanSignal.from_string("10a")
        with pytest.raises(ValueError):
            BooleanSignal.from_string("")
        with pytest.raises(ValueError):
            BooleanSignal(3, 8)
        with pytest.raises(ValueError):
            BooleanSignal(0, 0)
        with pytest.raises(ValueError):
            BooleanSignal(64, 0)

    def test_lexicographic_order_matches_strings(self):
        signals = [BooleanSignal.from_string(s) for s in ("011", "100", "001", "110")]
        assert [str(s) for s in sorted(signals)] == ["001", "011", "100", "110"]

    def test_xor(self):
        a = BooleanSignal.from_string("1100")
        b = BooleanSignal.from_string("1010")
        assert str(a ^ b) == "0110"


class TestCyclicShift:
    def test_one_step_right(self):
        assert cyclic_shift(BooleanSignal.from_string("100"), 1) == BooleanSignal.from_string("010")

    def test_zero_and_full_cycle_are_identity(self):
        x = BooleanSignal.from_string("10110")
        assert cyclic_shift(x, 0) == x
        assert cyclic_shift(x, 5) == x
        assert cyclic_shift(x, -5) == x

    def test_group_action(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            length = int(rng.integers(1, 20))
            x = BooleanSignal(length, int(rng.integers(0, 1 << length)))
            a, b = int(rng.integers(-30, 30)), int(rng.integers(-30, 30))
            assert cyclic_shift(cyclic_shift(x, a), b) == cyclic_shift(x, a + b)

    def test_weight_is_shift_invariant(self):
        for word in range(16):
            x = BooleanSignal(4, word)
            for s in range(4):
                assert cyclic_shift(x, s).weight == x.weight


class TestRestrict:
    def test_direct_read_off(self):
        x = BooleanSignal.from_string("1101")
        assert restrict(x, 0, DeletionPattern((0, 2))) == BooleanSignal.from_string("10")

    def test_shifted_read(self):
        x = BooleanSignal.from_string("1101")
        assert restrict(x, 1, DeletionPattern((0, 2))) == BooleanSignal.from_string("11")

    def test_full_pattern_identity(self):
        x = BooleanSignal.from_string("10110")
        assert restrict(x, 0, DeletionPattern.full(5)) == x

    def test_matches_entrywise_definition(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            length = int(rng.integers(2, 16))
            x = BooleanSignal(length, int(rng.integers(0, 1 << length)))
            kept = tuple(sorted(rng.choice(length, size=int(rng.integers(1, length + 1)), replace=False)))
            s = int(rng.integers(0, 3 * length))
            got = restrict(x, s, DeletionPattern(kept))
            assert got.bits() == tuple(x[(s + v) % length] for v in kept)


class TestSnr:
    def test_values(self):
        assert snr(0.5) == 0.0
        assert snr(0) == 0.25
        assert snr(0.2) == pytest.approx(0.09)
        assert snr(Fraction(1, 4)) == Fraction(1, 16)


class TestSigned:
    def test_examples(self):
        assert signed(BooleanSignal.from_string("000")).entries == (1, 1, 1)
        assert signed_weight(signed(BooleanSignal.from_string("000"))) == 3
        assert signed_weight(signed(BooleanSignal.from_string("111"))) == -3
        assert signed_weight(signed(BooleanSignal.from_string("1010"))) == 0

    def test_entry_rule(self):
        x = BooleanSignal.from_string("0110")
        u = signed(x)
        assert all(u[j] == 1 - 2 * x[j] for j in range(4))

    def test_weight_relation(self):
        for word in range(32):
            x = BooleanSignal(5, word)
            assert signed_weight(signed(x)) == 5 - 2 * x.weight

    def test_product_weight_is_inner_product(self):
        # exhaustive through length 6
        for length in range(1, 7):
            for wu in range(1 << length):
                u = SignedSignal(tuple(1 - 2 * ((wu >> j) & 1) for j in range(length)))
                for wv in range(1 << length):
                    v = SignedSignal(tuple(1 - 2 * ((wv >> j) & 1) for j in range(length)))
                    inner = sum(a * b for a, b in zip(u.entries, v.entries))
                    assert signed_weight(u * v) == inner

    def test_rejects_bad_entries(self):
        with pytest.raises(ValueError):
            SignedSignal((1, 0, -1))


class TestShiftDistribution:
    def test_uniform(self):
        xi = ShiftDistribution.uniform(4)
        assert xi.weight(0) == Fraction(1, 4)
        assert xi.is_uniform
        assert len(xi) == 4

    def test_from_weights_fractions(self):
        xi = ShiftDistribution.from_weights([Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)])
        assert xi.numerators == (3, 2, 1)
        assert xi.denominator == 6
        assert not xi.is_uniform

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            ShiftDistribution.from_weights([0.5, 0.5])

    def test_rejects_bad_weights(self):
        with pytest.raises(ValueError):
            ShiftDistribution.from_weights([Fraction(2, 3), Fraction(2, 3)])
        with pytest.raises(ValueError):
            ShiftDistribution.from_weights([Fraction(3, 2), Fraction(-1, 2)])
        with pytest.raises(ValueError):
            ShiftDistribution((1, 1), 3)

    def test_empirical_frequencies_match(self):
        xi = ShiftDistribution.from_weights([Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)])
        rng = make_rng(123)
        draws = draw_shift(xi, rng, size=1_000_000)
        counts = np.bincount(draws, minlength=3)
        for s in range(3):
            p = float(xi.weight(s))
            sigma = (p * (1 - p) * 1_000_000) ** 0.5
            assert abs(counts[s] - p * 1_000_000) < 4 * sigma


class TestDeletionPattern:
    def test_full(self):
        v = DeletionPattern.full(4)
        assert v.kept == (0, 1, 2, 3)
        assert v.is_full(4)
        assert len(v) == 4

    def test_rejects_unsorted_or_duplicate(self):
        with pytest.raises(ValueError):
            DeletionPattern((2, 1))
        with pytest.raises(ValueError):
            DeletionPattern((1, 1))
        with pytest.raises(ValueError):
            DeletionPattern(())


class TestObservationModel:
    def test_config_round_trip(self):
        model = ObservationModel(
            5,
            DeletionPattern((0, 1, 3)),
            ShiftDistribution.from_weights([Fraction(1, 5)] * 5),
            0.2,
        )
        config = model.to_config()
        assert config == {
            "L": 5,
            "V": [0, 1, 3],
            "xi": {"num": [1, 1, 1, 1, 1], "den": 5},
            "p": 0.2,
        }
        assert ObservationModel.from_config(config) == model

    def test_validation(self):
        with pytest.raises(ValueError):
            ObservationModel(3, DeletionPattern((0, 3)), ShiftDistribution.uniform(3), 0.1)
        with pytest.raises(ValueError):
            ObservationModel(3, DeletionPattern.full(3), ShiftDistribution.uniform(4), 0.1)
        with pytest.raises(ValueError):
            ObservationModel.full_uniform(3, 1.5)

    def test_snr_property(self):
        assert ObservationModel.full_uniform(3, 0.2).snr == pytest.approx(0.09)


class TestSampleObservation:
    def test_noiseless_emits_a_cyclic_shift(self):
        model = ObservationModel.full_uniform(2, 0.0)
        x = BooleanSignal.from_string("10")
        rng = make_rng(5)
        seen = {str(sample_observation(x, model, rng)) for _ in range(200)}
        assert seen == {"10", "01"}

    def test_pure_noise_is_uniform_for_any_signal(self):
        model = ObservationModel.full_uniform(3, 0.5)
        trials = 40_000
        for text in ("000", "101"):
            x = BooleanSignal.from_string(text)
            rng = make_rng(11)
            counts = np.zeros(8, dtype=int)
            for _ in range(trials):
                counts[sample_observation(x, model, rng).word] += 1
            sigma = (trials * (1 / 8) * (7 / 8)) ** 0.5
            assert np.all(np.abs(counts - trials / 8) < 4.5 * sigma)

    def test_deterministic_given_stream(self):
        model = ObservationModel.full_uniform(6, 0.3)
        x = BooleanSignal.from_string("110100")
        first = [sample_observation(x, model, make_rng(42, 0, i)) for i in range(20)]
        second = [sample_observation(x, model, make_rng(42, 0, i)) for i in range(20)]
        assert first == second

    def test_deletion_output_length(self):
        model = ObservationModel(
            5, DeletionPattern((0, 2)), ShiftDistribution.uniform(5), 0.25
        )
        y = sample_observation(BooleanSignal.from_string("10110"), model, make_rng(1))
        assert y.length == 2


class TestRng:
    def test_streams_are_independent(self):
        a = make_rng(7, 1).random(8)
        b = make_rng(7, 2).random(8)
        assert not np.allclose(a, b)

    def test_reproducible(self):
        assert np.array_equal(make_rng(7, 3, 4).random(8), make_rng(7, 3, 4).random(8))
