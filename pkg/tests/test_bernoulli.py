import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bernseg.bernoulli import (
    algorithm1,
    encode_recurrence,
    penalized_loss,
    segment_rates,
)
from bernseg.errors import AllZeros, InvalidChangePoints


binary_seqs = st.lists(st.sampled_from([0, 1]), min_size=1, max_size=60).map(np.array)


class TestEncodeRecurrence:
    def test_interior_gap(self):
        rec = encode_recurrence([1, 0, 0, 1])
        assert rec.times.tolist() == [0, 2, 0]
        assert rec.one_positions.tolist() == [1, 4]

    def test_boundary_gaps(self):
        rec = encode_recurrence([0, 1, 1, 0])
        assert rec.times.tolist() == [1, 0, 1]
        assert rec.one_positions.tolist() == [2, 3]

    def test_all_ones(self):
        rec = encode_recurrence([1] * 5)
        assert rec.times.tolist() == [0] * 6
        assert rec.one_positions.tolist() == [1, 2, 3, 4, 5]

    def test_all_zeros_raises(self):
        with pytest.raises(AllZeros):
            encode_recurrence([0, 0, 0])

    @given(binary_seqs)
    def test_recurrence_identity_and_invertibility(self, seq):
        if seq.sum() == 0:
            return
        rec = encode_recurrence(seq)
        m = rec.one_positions.size
        assert rec.times.sum() + m == seq.size
        rebuilt = np.zeros(seq.size, dtype=np.int8)
        rebuilt[rec.one_positions - 1] = 1
        assert np.array_equal(rebuilt, np.asarray(seq, dtype=np.int8))


class TestPenalizedLoss:
    def test_pure_sequence_costs_only_penalty(self):
        assert penalized_loss([1, 1, 1, 1], [], 2.0) == pytest.approx(2.0)

    def test_pure_segments_cost_only_penalty(self):
        assert penalized_loss([1, 1, 0, 0], [2], 2.0) == pytest.approx(6.0)

    def test_hand_evaluated_split(self):
        # direct arithmetic: (1,0,1,0,0,0,0,0), cut at 4 vs no cut
        seq = [1, 0, 1, 0, 0, 0, 0, 0]
        with_cut = -2.0 * (2 * math.log(0.5) + 2 * math.log(0.5)) + 2.0 * 3
        without = -2.0 * (2 * math.log(0.25) + 6 * math.log(0.75)) + 2.0 * 1
        assert penalized_loss(seq, [4], 2.0) == pytest.approx(with_cut, rel=1e-12)
        assert penalized_loss(seq, [], 2.0) == pytest.approx(without, rel=1e-12)

    def test_rejects_unsorted(self):
        with pytest.raises(InvalidChangePoints):
            penalized_loss([1, 0, 1, 0], [3, 2], 2.0)

    def test_rejects_out_of_range(self):
        with pytest.raises(InvalidChangePoints):
            penalized_loss([1, 0, 1, 0], [4], 2.0)
        with pytest.raises(InvalidChangePoints):
            penalized_loss([1, 0, 1, 0], [0], 2.0)


class TestSegmentRates:
    def test_pure_blocks(self):
        assert segment_rates([1, 1, 0, 0], [2]).tolist() == [1.0, 0.0]

    def test_no_cut(self):
        assert segment_rates([1, 0, 1, 0], []).tolist() == [0.5]

    def test_mixed(self):
        rates = segment_rates([1, 0, 0, 1, 1, 1], [3])
        assert rates == pytest.approx([1 / 3, 1.0])


def _oracle_one_position_cuts(seq, phi, max_cuts=2):
    """Brute force over partitions cutting at 1-positions only."""
    ones = np.flatnonzero(np.asarray(seq) == 1) + 1
    cands = [int(c) for c in ones if 0 < c < len(seq)]
    best = penalized_loss(seq, [], phi)
    for r in range(1, max_cuts + 1):
        for cuts in itertools.combinations(cands, r):
            best = min(best, penalized_loss(seq, list(cuts), phi))
    return best


class TestAlgorithm1:
    def test_all_zeros_returns_empty(self):
        seg = algorithm1(np.zeros(10, dtype=int), 2.0)
        assert seg.change_points.size == 0
        assert seg.rates.tolist() == [0.0]
        assert seg.loss == pytest.approx(2.0)

    def test_all_ones_returns_empty(self):
        seg = algorithm1(np.ones(10, dtype=int), 2.0)
        assert seg.change_points.size == 0
        assert seg.rates.tolist() == [1.0]

    def test_length_one_returns_empty(self):
        assert algorithm1([1], 2.0).change_points.size == 0

    def test_two_pure_blocks(self):
        seg = algorithm1([1, 1, 1, 1, 0, 0, 0, 0, 0, 0], 2.0)
        assert seg.change_points.tolist() == [4]
        assert seg.rates.tolist() == [1.0, 0.0]

    def test_deterministic(self):
        rng = np.random.default_rng(3)
        seq = (rng.random(200) < 0.15).astype(int)
        a = algorithm1(seq, 2.0)
        b = algorithm1(seq, 2.0)
        assert np.array_equal(a.change_points, b.change_points)
        assert a.loss == b.loss

    def test_loss_consistent_with_penalized_loss(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            seq = (rng.random(80) < 0.2).astype(int)
            seg = algorithm1(seq, 2.0)
            assert seg.loss == pytest.approx(
                penalized_loss(seq, seg.change_points, 2.0), rel=1e-9
            )

    @given(binary_seqs)
    @settings(max_examples=200, deadline=None)
    def test_never_worse_than_empty_model(self, seq):
        seg = algorithm1(seq, 2.0)
        assert seg.loss <= penalized_loss(seq, [], 2.0) + 1e-9

    def test_cuts_adjacent_to_ones(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            seq = (rng.random(120) < 0.12).astype(int)
            seg = algorithm1(seq, 2.0)
            ones = set((np.flatnonzero(seq == 1) + 1).tolist())
            for tau in seg.change_points:
                assert tau in ones or tau + 1 in ones

    @given(st.data())
    @settings(max_examples=150, deadline=None)
    def test_refinement_monotonicity(self, data):
        seq = data.draw(binary_seqs)
        n = seq.size
        if n < 3:
            return
        cands = sorted(data.draw(
            st.sets(st.integers(1, n - 1), min_size=1, max_size=min(6, n - 1))
        ))
        subset = sorted(data.draw(st.sets(st.sampled_from(cands), max_size=len(cands))))
        coarse = penalized_loss(seq, subset, 0.0)
        fine = penalized_loss(seq, cands, 0.0)
        assert fine <= coarse + 1e-9

    def test_small_instance_oracle(self):
        # brute force over <=2 cuts at 1-positions; N<=20, <=6 ones
        rng = np.random.default_rng(99)
        hits = trials = 0
        for _ in range(300):
            n = int(rng.integers(6, 21))
            m = int(rng.integers(1, min(6, n - 1) + 1))
            seq = np.zeros(n, dtype=np.int8)
            seq[rng.choice(n, size=m, replace=False)] = 1
            seg = algorithm1(seq, 2.0)
            trials += 1
            hits += seg.loss <= _oracle_one_position_cuts(seq, 2.0) + 1e-9
        assert hits / trials >= 0.95

    def test_two_rate_monte_carlo(self):
        # 50 draws at p=0.05 then 50 at p=0.6; detected cut lands near the flip,
        # and the exhaustive single-cut minimizer agrees
        hits = oracle_hits = 0
        seeds = 200
        for seed in range(seeds):
            rng = np.random.default_rng(10_000 + seed)
            seq = np.concatenate([
                (rng.random(50) < 0.05), (rng.random(50) < 0.6),
            ]).astype(np.int8)
            seg = algorithm1(seq, 2.0)
            if seg.change_points.size and np.min(np.abs(seg.change_points - 50)) <= 5:
                hits += 1
            single = min(range(1, 100), key=lambda t: penalized_loss(seq, [t], 2.0))
            if abs(single - 50) <= 5:
                oracle_hits += 1
        assert hits / seeds >= 0.90
        assert oracle_hits / seeds >= 0.90
