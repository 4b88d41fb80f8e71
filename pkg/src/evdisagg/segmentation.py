"""Adaptive thresholding, segment extraction and local noise removal.

This module hosts the first and third stage of the pipeline: a rough cut
of the trace at an adaptive low threshold, extraction of the surviving
runs as segments, and the per-segment subtraction of the residual noise
floor estimated from the raw samples around each segment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import PowerSeries, Segment


@dataclass(frozen=True)
class ThresholdedSeries:
    """A trace with every sample below ``t_low`` zeroed out."""

    values: np.ndarray
    t_low: float

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        nonzero = arr[arr > 0.0]
        if nonzero.size and nonzero.min() < self.t_low:
            raise ValueError("thresholded series contains sub-threshold samples")


def _values_of(x) -> np.ndarray:
    if isinstance(x, PowerSeries):
        return x.values
    if isinstance(x, ThresholdedSeries):
        return x.values
    return np.asarray(x, dtype=np.float64)


def compute_low_threshold(x, mass_cut: float = 2.0, floor: float = 2.5) -> float:
    """Adaptive low threshold: max(floor, half the mean of samples above 2 kW).

    When no sample exceeds ``mass_cut`` the sum is empty and the floor
    wins, so the threshold never drops below 2.5 kW.
    """
    values = _values_of(x)
    if values.size == 0:
        raise ValueError("cannot compute a threshold for an empty series")
    above = values[values > mass_cut]
    if above.size == 0:
        return floor
    return max(floor, float(above.sum()) / (2.0 * above.size))


def apply_threshold(x, t_low: float) -> ThresholdedSeries:
    """Zero every sample strictly below ``t_low`` (samples equal to it stay)."""
    if t_low <= 0.0:
        raise ValueError("t_low must be positive")
    values = _values_of(x)
    kept = np.where(values >= t_low, values, 0.0)
    return ThresholdedSeries(kept, t_low)


def extract_segments(xt) -> list[Segment]:
    """Return the maximal runs of consecutive nonzero samples, in time order."""
    values = _values_of(xt)
    nonzero = values > 0.0
    if not nonzero.any():
        return []
    # run boundaries: transitions of the nonzero mask
    padded = np.concatenate(([False], nonzero, [False]))
    edges = np.flatnonzero(padded[1:] != padded[:-1])
    starts, stops = edges[0::2], edges[1::2]
    return [Segment(int(a), int(b) - 1, values[a:b]) for a, b in zip(starts, stops)]


def local_noise_amplitude(raw_values: np.ndarray, segment: Segment,
                          n_before: int, n_after: int) -> float:
    """Estimate the residual-noise floor around one segment.

    Takes the minimum of the ``n_before`` raw samples immediately before
    the segment and the minimum of the ``n_after`` raw samples immediately
    after it, and averages the two.  If one side has no samples (segment
    touching the series edge) only the other side is used; if neither has
    samples the estimate is 0.
    """
    before = raw_values[max(0, segment.start_idx - n_before):segment.start_idx]
    after = raw_values[segment.end_idx + 1:segment.end_idx + 1 + n_after]
    mins = [float(side.min()) for side in (before, after) if side.size]
    if not mins:
        return 0.0
    return sum(mins) / len(mins)


def remove_residual_noise(raw_values, segments: list[Segment],
                          n_before: int = 5, n_after: int = 5) -> list[Segment]:
    """Subtract each segment's local noise floor from its samples.

    The minima are taken over the *raw* trace (the thresholded one is zero
    around segments by construction).  Samples that drop to zero or below
    are removed, re-splitting the segment into maximal positive runs.
    """
    if n_before < 1 or n_after < 1:
        raise ValueError("n_before and n_after must be >= 1")
    raw = _values_of(raw_values)
    cleaned: list[Segment] = []
    for seg in segments:
        noise = local_noise_amplitude(raw, seg, n_before, n_after)
        reduced = np.maximum(seg.samples - noise, 0.0)
        for sub in extract_segments(reduced):
            cleaned.append(Segment(seg.start_idx + sub.start_idx,
                                   seg.start_idx + sub.end_idx,
                                   sub.samples))
    return cleaned
