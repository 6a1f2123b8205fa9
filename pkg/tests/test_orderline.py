import math

import numpy as np
import pytest

from oracles import (
    oracle_bound,
    oracle_entropy,
    oracle_gain,
    oracle_max_gain,
    oracle_thresholds,
)
from randshapelets import (
    Dataset,
    OrderLine,
    TimeSeries,
    best_split,
    entropy,
    optimistic_gain_bound,
    split_dataset,
)


def make_line(entries):
    line = OrderLine()
    for d, label, w in entries:
        line.add(d, label, w)
    return line


class TestEntropy:
    def test_uniform_two_class(self):
        assert entropy({1: 0.5, 2: 0.5}) == 1.0

    def test_single_class(self):
        assert entropy({1: 1.0}) == 0.0

    def test_three_quarters(self):
        assert abs(entropy({1: 0.75, 2: 0.25}) - 0.811278) <= 1e-6

    def test_sequence_input(self):
        assert abs(entropy([0.75, 0.25]) - 0.811278) <= 1e-6

    def test_zero_weight_class_ignored(self):
        assert entropy({1: 1.0, 2: 0.0}) == 0.0

    def test_zero_total_rejected(self):
        with pytest.raises(ValueError):
            entropy({1: 0.0})

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            entropy({1: -0.1, 2: 1.1})

    def test_uniform_weights_match_counts(self):
        # with weight 1/k (exactly representable) the weighted entropy equals
        # the count-based one bit for bit
        rng = np.random.default_rng(31)
        for k in (4, 8, 16):
            labels = rng.integers(0, 3, size=k)
            counts = {}
            weighted = {}
            for l in labels:
                counts[int(l)] = counts.get(int(l), 0) + 1
                weighted[int(l)] = weighted.get(int(l), 0.0) + 1.0 / k
            assert entropy(weighted) == entropy(counts)


class TestBestSplit:
    def test_clean_two_class_split(self):
        line = make_line([(1, 1, 0.25), (2, 1, 0.25), (8, 2, 0.25), (9, 2, 0.25)])
        res = best_split(line)
        assert res.gain == 1.0
        assert res.split_distance == 5.0
        assert res.margin == 6.0

    def test_pure_line_gain_zero(self):
        line = make_line([(1, 1, 0.5), (2, 1, 0.5)])
        assert best_split(line).gain == 0.0

    def test_tied_distances_single_boundary(self):
        line = make_line([(1, 1, 1.0), (1, 1, 1.0), (2, 2, 1.0)])
        res = best_split(line)
        assert res.split_distance == 1.5
        assert abs(res.gain - oracle_entropy([2 / 3, 1 / 3])) <= 1e-12

    def test_empty_line_rejected(self):
        with pytest.raises(ValueError):
            best_split(OrderLine())

    def test_single_entry_degenerate(self):
        res = best_split(make_line([(3.0, 1, 1.0)]))
        assert res.gain == 0.0

    def test_gain_tie_prefers_larger_margin(self):
        # boundaries at 1.5 and 4.0 have exactly equal gain; margins 1 vs 2
        line = make_line([(1, 1, 0.25), (2, 2, 0.25), (3, 2, 0.25), (5, 1, 0.25)])
        assert best_split(line).split_distance == 4.0

    def test_gain_and_margin_tie_prefers_smaller_threshold(self):
        # symmetric line: boundaries 1.5 and 3.5 tie on gain and margin
        line = make_line([(1, 1, 0.25), (2, 2, 0.25), (3, 2, 0.25), (4, 1, 0.25)])
        assert best_split(line).split_distance == 1.5

    def test_pure_line_tie_breaking_on_margin(self):
        res = best_split(make_line([(1, 1, 1.0), (3, 1, 1.0), (4, 1, 1.0)]))
        assert res.gain == 0.0
        assert res.split_distance == 2.0  # margin 2 beats margin 1

    def test_matches_exhaustive_enumeration(self):
        rng = np.random.default_rng(77)
        for case in range(500):
            n = int(rng.integers(2, 13))
            n_classes = int(rng.integers(2, 5))
            uniform = bool(rng.integers(0, 2))
            entries = []
            for _ in range(n):
                dist = float(rng.integers(0, 8)) / 2.0  # force some ties
                label = int(rng.integers(0, n_classes))
                weight = 1.0 / n if uniform else float(rng.uniform(0.05, 1.0))
                entries.append((dist, label, weight))
            res = best_split(make_line(entries))
            want = oracle_max_gain(entries)
            assert abs(res.gain - want) <= 1e-9, (case, entries)
            if oracle_thresholds(entries):
                # the returned threshold is a valid midpoint achieving the max
                assert res.split_distance in oracle_thresholds(entries)
                at_threshold = oracle_gain(entries, res.split_distance)
                assert abs(at_threshold - want) <= 1e-9

    def test_gain_non_negative_always(self):
        rng = np.random.default_rng(78)
        for _ in range(200):
            n = int(rng.integers(2, 10))
            entries = [
                (float(rng.normal()), int(rng.integers(0, 3)), float(rng.uniform(0.1, 1)))
                for _ in range(n)
            ]
            assert best_split(make_line(entries)).gain >= 0.0


class TestOptimisticGainBound:
    def test_nothing_remaining_equals_best_split(self):
        entries = [(1.0, 1, 0.5), (2.0, 2, 0.25), (3.0, 1, 0.25)]
        line = make_line(entries)
        assert optimistic_gain_bound(line, {}) == best_split(line).gain

    def test_single_opposite_instance_reaches_one(self):
        line = make_line([(1.0, 1, 1.0)])
        assert abs(optimistic_gain_bound(line, {2: 1.0}) - 1.0) <= 1e-12

    def test_single_class_total_is_zero(self):
        line = make_line([(1.0, 1, 1.0), (2.0, 1, 1.0)])
        assert optimistic_gain_bound(line, {1: 2.0}) == 0.0

    def test_empty_line_gives_log2_classes(self):
        assert optimistic_gain_bound(OrderLine(), {1: 1.0, 2: 1.0}) == 1.0
        assert abs(
            optimistic_gain_bound(OrderLine(), {1: 1.0, 2: 1.0, 3: 1.0})
            - math.log2(3)
        ) <= 1e-12

    def test_both_empty_rejected(self):
        with pytest.raises(ValueError):
            optimistic_gain_bound(OrderLine(), {})

    def test_admissible_over_500_random_configurations(self):
        rng = np.random.default_rng(404)
        for case in range(500):
            n_classes = int(rng.integers(2, 5))
            total = int(rng.integers(2, 11))
            n_placed = int(rng.integers(1, total))
            uniform = bool(rng.integers(0, 2))

            def entry():
                return (
                    float(rng.integers(0, 10)) / 2.0,
                    int(rng.integers(0, n_classes)),
                    1.0 / total if uniform else float(rng.uniform(0.05, 1.0)),
                )

            placed = [entry() for _ in range(n_placed)]
            rem_instances = [entry()[1:] for _ in range(total - n_placed)]
            remaining = {}
            for label, w in rem_instances:
                remaining[label] = remaining.get(label, 0.0) + w

            bound = optimistic_gain_bound(make_line(placed), remaining)
            true_max = oracle_bound(placed, rem_instances, rng=rng)
            assert bound >= true_max - 1e-9, (case, placed, rem_instances)


class TestSplitDataset:
    def make(self, labels):
        return Dataset([TimeSeries(l, [float(i), 1.0]) for i, l in enumerate(labels)])

    def line_for(self, data, dists):
        line = OrderLine()
        for ts, d, w in zip(data.instances, dists, data.weights):
            line.add(d, ts.label, float(w))
        return line

    def test_threshold_contract(self):
        data = self.make([1, 2])
        left, right = split_dataset(data, self.line_for(data, [1.0, 9.0]), 5.0)
        assert [t.label for t in left.instances] == [1]
        assert [t.label for t in right.instances] == [2]

    def test_all_left_leaves_right_empty(self):
        data = self.make([1, 2, 1])
        left, right = split_dataset(data, self.line_for(data, [1.0, 2.0, 3.0]), 5.0)
        assert len(left) == 3
        assert len(right) == 0

    def test_matches_best_split_example(self):
        data = self.make([1, 1, 2, 2])
        line = self.line_for(data, [1.0, 2.0, 8.0, 9.0])
        res = best_split(line)
        left, right = split_dataset(data, line, res.split_distance)
        assert len(left) == 2 and len(right) == 2
        assert {t.label for t in left.instances} == {1}
        assert {t.label for t in right.instances} == {2}

    def test_boundary_equality_goes_left(self):
        data = self.make([1, 2])
        left, right = split_dataset(data, self.line_for(data, [5.0, 6.0]), 5.0)
        assert len(left) == 1 and len(right) == 1

    def test_weights_carried_not_renormalized(self):
        data = Dataset(
            [TimeSeries(1, [0.0, 1.0]), TimeSeries(2, [0.0, 2.0])],
            weights=[0.75, 0.25],
        )
        line = self.line_for(data, [1.0, 9.0])
        left, right = split_dataset(data, line, 5.0)
        assert left.weights.tolist() == [0.75]
        assert right.weights.tolist() == [0.25]

    def test_length_mismatch_rejected(self):
        data = self.make([1, 2])
        line = OrderLine()
        line.add(1.0, 1, 0.5)
        with pytest.raises(ValueError):
            split_dataset(data, line, 5.0)
