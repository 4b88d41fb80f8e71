"""Adaptive threshold, segment extraction and residual noise removal."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from evdisagg import (Segment, apply_threshold, compute_low_threshold,
                      extract_segments, remove_residual_noise)
from evdisagg.segmentation import local_noise_amplitude

finite_powers = st.lists(
    st.floats(min_value=0.0, max_value=12.0, allow_nan=False), min_size=1, max_size=200)


class TestLowThreshold:
    def test_mean_above_cut_halved(self):
        # samples above 2 kW: {7.0}; threshold = max(2.5, 7.0 / 2) = 3.5
        assert compute_low_threshold([7.0, 1.0, 2.0]) == 3.5

    def test_floor_when_nothing_above_cut(self):
        assert compute_low_threshold([0.5, 1.9, 2.0]) == 2.5

    def test_floor_dominates_small_mean(self):
        # above 2 kW: {3, 3, 4, 2.2}; sum 12.2 over 2*4 = 1.525 < 2.5
        assert compute_low_threshold([3.0, 3.0, 4.0, 2.2, 0.5, 1.0]) == 2.5

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            compute_low_threshold([])

    @given(finite_powers)
    def test_never_below_floor(self, values):
        assert compute_low_threshold(values) >= 2.5

    @given(finite_powers)
    def test_matches_bruteforce_definition(self, values):
        above = [v for v in values if v > 2.0]
        expected = max(2.5, sum(above) / (2 * len(above))) if above else 2.5
        assert compute_low_threshold(values) == pytest.approx(expected)


class TestApplyThreshold:
    def test_basic_cut(self):
        out = apply_threshold([1.0, 3.0, 2.4, 5.0], 2.5)
        assert list(out.values) == [0.0, 3.0, 0.0, 5.0]

    def test_threshold_above_max_zeroes_everything(self):
        out = apply_threshold([1.0, 2.0], 9.0)
        assert not out.values.any()

    def test_exact_equality_is_kept(self):
        out = apply_threshold([2.5, 2.4999], 2.5)
        assert list(out.values) == [2.5, 0.0]

    @given(finite_powers, st.floats(min_value=0.1, max_value=10.0, allow_nan=False))
    def test_idempotent(self, values, t_low):
        once = apply_threshold(values, t_low)
        twice = apply_threshold(once.values, t_low)
        assert np.array_equal(once.values, twice.values)


class TestExtractSegments:
    def test_two_runs(self):
        segments = extract_segments(np.array([0, 3, 3, 0, 5, 0], dtype=float))
        assert [(s.start_idx, s.end_idx) for s in segments] == [(1, 2), (4, 4)]

    def test_all_zero(self):
        assert extract_segments(np.zeros(5)) == []

    def test_boundary_run(self):
        segments = extract_segments(np.array([4.0, 4.0, 4.0]))
        assert [(s.start_idx, s.end_idx) for s in segments] == [(0, 2)]

    @given(finite_powers)
    def test_partition_property(self, values):
        arr = np.asarray(values)
        segments = extract_segments(arr)
        support = np.zeros(arr.size, dtype=bool)
        prev_end = -1
        for seg in segments:
            assert seg.start_idx > prev_end
            assert not support[seg.start_idx:seg.end_idx + 1].any()
            support[seg.start_idx:seg.end_idx + 1] = True
            assert np.array_equal(seg.samples, arr[seg.start_idx:seg.end_idx + 1])
            prev_end = seg.end_idx
        assert np.array_equal(support, arr > 0.0)


class TestResidualNoise:
    def test_average_of_two_side_minima(self):
        raw = np.array([0.4, 0.9, 0.9, 0.9, 0.9,
                        5.0, 5.0, 5.0,
                        0.8, 0.6, 0.9, 0.9, 0.9])
        seg = Segment(5, 7, raw[5:8])
        assert local_noise_amplitude(raw, seg, 5, 5) == pytest.approx(0.5)
        cleaned = remove_residual_noise(raw, [seg])
        assert len(cleaned) == 1
        assert np.allclose(cleaned[0].samples, [4.5, 4.5, 4.5])
        assert (cleaned[0].start_idx, cleaned[0].end_idx) == (5, 7)

    def test_segment_at_series_start_uses_after_side_only(self):
        raw = np.array([5.0, 5.0, 5.0, 0.6, 0.7, 0.8, 0.9, 1.0])
        seg = Segment(0, 2, raw[0:3])
        assert local_noise_amplitude(raw, seg, 5, 5) == pytest.approx(0.6)
        cleaned = remove_residual_noise(raw, [seg])
        assert np.allclose(cleaned[0].samples, [4.4, 4.4, 4.4])

    def test_series_wide_segment_gets_zero_noise(self):
        raw = np.array([5.0, 6.0, 5.0])
        seg = Segment(0, 2, raw)
        assert local_noise_amplitude(raw, seg, 5, 5) == 0.0
        cleaned = remove_residual_noise(raw, [seg])
        assert np.array_equal(cleaned[0].samples, raw)

    def test_zero_noise_keeps_segment(self):
        raw = np.zeros(20)
        raw[8:11] = 3.0
        seg = Segment(8, 10, raw[8:11])
        cleaned = remove_residual_noise(raw, [seg])
        assert np.array_equal(cleaned[0].samples, seg.samples)

    def test_fragmentation_resplits(self):
        raw = np.zeros(30)
        raw[5:10] = [0.4, 0.5, 0.5, 0.5, 0.3]
        raw[10:13] = [5.0, 0.2, 5.0]
        raw[13:18] = [0.3, 0.5, 0.5, 0.5, 0.5]
        seg = Segment(10, 12, raw[10:13])
        cleaned = remove_residual_noise(raw, [seg])
        assert [(s.start_idx, s.end_idx) for s in cleaned] == [(10, 10), (12, 12)]
        assert cleaned[0].samples[0] == pytest.approx(5.0 - 0.3)

    @given(st.data())
    def test_never_increases_or_lengthens(self, data):
        values = data.draw(st.lists(
            st.floats(min_value=0.0, max_value=8.0, allow_nan=False),
            min_size=5, max_size=80))
        arr = np.asarray(values)
        segments = extract_segments(np.where(arr >= 2.5, arr, 0.0))
        cleaned = remove_residual_noise(arr, segments)
        total_before = sum(s.duration for s in segments)
        total_after = sum(s.duration for s in cleaned)
        assert total_after <= total_before
        for sub in cleaned:
            parents = [s for s in segments
                       if s.start_idx <= sub.start_idx and sub.end_idx <= s.end_idx]
            assert len(parents) == 1
            offset = sub.start_idx - parents[0].start_idx
            original = parents[0].samples[offset:offset + sub.duration]
            assert np.all(sub.samples <= original + 1e-12)
