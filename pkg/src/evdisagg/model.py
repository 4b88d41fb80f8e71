"""Shared data types for the EV-charging disaggregation pipeline.

Conventions used throughout the package:

* power is in kW, energy in kWh (kW * minutes / 60),
* one sample = one minute (the traces are sampled at 1/60 Hz),
* time inside the pipeline is a plain sample index; calendar timestamps
  only exist at the ingestion boundary (see :mod:`evdisagg.trace_io`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from datetime import datetime
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

#: Fixed sampling period of every trace handled by this package (seconds).
PERIOD_SECONDS = 60


def _as_readonly_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d sample array, got shape {arr.shape}")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PowerSeries:
    """A uniformly sampled real-power trace.

    ``values[i]`` is the power (kW) averaged over the minute starting at
    ``start_time + i`` minutes.  Samples must be finite and non-negative;
    anything else is an ingestion error, not data to be cleaned up later.
    """

    start_time: datetime
    values: np.ndarray

    def __post_init__(self):
        if self.start_time.second != 0 or self.start_time.microsecond != 0:
            raise ValueError("start_time must have minute resolution")
        arr = _as_readonly_array(self.values)
        if arr.size and not np.all(np.isfinite(arr)):
            raise ValueError("power samples must be finite")
        if arr.size and arr.min() < 0.0:
            raise ValueError("power samples must be non-negative")
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size

    def slice(self, start: int, stop: int) -> "PowerSeries":
        """Return the sub-series covering sample indices ``[start, stop)``."""
        from datetime import timedelta

        if not (0 <= start <= stop <= len(self)):
            raise IndexError(f"slice [{start}, {stop}) out of range 0..{len(self)}")
        return PowerSeries(self.start_time + timedelta(minutes=start),
                           self.values[start:stop])


@dataclass(frozen=True)
class Segment:
    """A maximal run of consecutive positive samples in a processed trace.

    ``samples`` holds the kW values over ``[start_idx, end_idx]`` as they
    stand after thresholding / noise removal; the indices always refer to
    the original trace so segments from different stages stay comparable.
    """

    start_idx: int
    end_idx: int
    samples: np.ndarray

    def __post_init__(self):
        arr = _as_readonly_array(self.samples)
        if self.start_idx < 0 or self.end_idx < self.start_idx:
            raise ValueError(f"bad segment bounds [{self.start_idx}, {self.end_idx}]")
        if arr.size != self.end_idx - self.start_idx + 1:
            raise ValueError("sample count does not match segment bounds")
        if arr.size == 0 or arr.min() <= 0.0:
            raise ValueError("segment samples must all be positive")
        object.__setattr__(self, "samples", arr)

    @property
    def duration(self) -> int:
        """Segment length in minutes."""
        return self.end_idx - self.start_idx + 1


class SegmentType(Enum):
    """Outcome of the cumulative-profile classification of a segment."""

    TYPE0 = 0  # no prominent amplitude level (dryer/oven, or EV fully under one)
    TYPE1 = 1  # a single prominent level (bare EV, or EV with short clutter on top)
    TYPE2 = 2  # two stacked levels (EV overlapped by AC activity)


@dataclass(frozen=True)
class EvEvent:
    """One reconstructed EV charging session, rendered as a square wave.

    ``low_confidence`` marks the documented fallback where a fully
    overlapped session had to be reconstructed without any reference
    height; only those events may carry an amplitude below 3 kW.
    """

    start_idx: int
    duration: int
    amplitude: float
    low_confidence: bool = False

    #: Reconstruction cap on session length (minutes).
    MAX_DURATION = 250
    #: Minimum plausible charging amplitude (kW).
    MIN_AMPLITUDE = 3.0

    def __post_init__(self):
        if self.start_idx < 0:
            raise ValueError("event start index must be >= 0")
        if not (1 <= self.duration <= self.MAX_DURATION):
            raise ValueError(f"event duration {self.duration} outside [1, {self.MAX_DURATION}]")
        if not math.isfinite(self.amplitude) or self.amplitude <= 0.0:
            raise ValueError("event amplitude must be positive and finite")
        if not self.low_confidence and self.amplitude < self.MIN_AMPLITUDE:
            raise ValueError(
                f"event amplitude {self.amplitude:.3f} kW below {self.MIN_AMPLITUDE} kW "
                "(only low-confidence events may go lower)")

    @property
    def end_idx(self) -> int:
        """Last sample index covered by the event (inclusive)."""
        return self.start_idx + self.duration - 1

    @property
    def energy_kwh(self) -> float:
        return self.amplitude * self.duration / 60.0


@dataclass(frozen=True)
class PipelineParams:
    """Every tunable of the five-step pipeline, with its default value.

    The defaults are the reference operating point; they are grouped by
    the pipeline stage that consumes them.  All values must be positive.
    """

    # -- stage 1: adaptive low threshold ------------------------------------
    t_low_floor: float = 2.5        # kW, hard floor of the adaptive threshold
    t_low_mass_cut: float = 2.0     # kW, samples above this feed the threshold mean

    # -- stage 2: spike-train filter ----------------------------------------
    t_seed: float = 20.0            # min, segments strictly shorter are seeds
    eta: float = 1.2                # duration extension factor for propagation
    gap_factor: float = 3.0         # max gap between chained segments, x current duration
    t_spike: float = 90.0           # min, no removed segment may be longer
    gap_uses_seed_duration: bool = False  # gap test against the original seed instead
                                          # of the current chain segment

    # -- stage 3: local residual noise --------------------------------------
    n_before: int = 5               # raw samples inspected before a segment
    n_after: int = 5                # raw samples inspected after a segment

    # -- stage 4: segment classification ------------------------------------
    c_grid_step: float = 0.05       # kW, resolution of the cumulative profile
    peak_smooth_bins: int = 7       # boxcar width applied to the gradient before
                                    # peak/area analysis (stabilises sparse profiles)
    peak_min_distance: float = 2.0  # kW, minimum spacing of prominent peaks
    peak_min_height_frac: float = 0.2   # of max gradient, prominence cut
    area_frac: float = 0.35         # broad-profile area fraction for Type 0
    area_range_from_zero: bool = False  # compare area against [0, max] instead of
                                        # the occupied amplitude range

    # -- stage 5: reconstruction --------------------------------------------
    effective_height_width_frac: float = 0.80  # width fraction defining the height
    dryer_ev_cut: float = 5.5       # kW, Type 0 split between dryer and dryer+EV
    ev_min_amplitude: float = 3.0   # kW, minimum admissible EV amplitude
    max_ev_width: int = 250         # min, maximum admissible EV duration
    t_high_offset: float = 2.5      # kW, high threshold = t_low + offset
    min_subsegment_duration: int = 20   # min, sub-segments shorter are ignored
    spike_census_count: int = 3     # removed spikes per side to call "surrounded"
    spike_census_window: int = 60   # min, census window on each side

    # -- windowing -----------------------------------------------------------
    memory_across_months: bool = False  # share the EV height memory across months

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool):
                continue
            if value <= 0:
                raise ValueError(f"parameter {f.name} must be positive, got {value}")


@dataclass(frozen=True)
class SegmentDiagnostic:
    """Journey of one segment through classification and reconstruction."""

    start_idx: int
    end_idx: int
    segment_type: SegmentType | None
    decision: str
    events: tuple[EvEvent, ...] = ()


@dataclass(frozen=True)
class DisaggregationResult:
    """Pipeline output for one processing window."""

    events: tuple[EvEvent, ...]
    estimated: PowerSeries
    diagnostics: tuple[SegmentDiagnostic, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(self, "diagnostics", tuple(self.diagnostics))
        _check_disjoint(self.events)

    @property
    def total_energy_kwh(self) -> float:
        return float(self.estimated.values.sum()) / 60.0


def _check_disjoint(events: Sequence[EvEvent]) -> None:
    ordered = sorted(events, key=lambda e: e.start_idx)
    for prev, nxt in zip(ordered, ordered[1:]):
        if nxt.start_idx <= prev.end_idx:
            raise ValueError(
                f"events overlap: [{prev.start_idx}, {prev.end_idx}] and "
                f"[{nxt.start_idx}, {nxt.end_idx}]")


def render_events(events: Iterable[EvEvent], length: int) -> np.ndarray:
    """Render square-wave events onto a zeroed minute grid of ``length``.

    The output is the event amplitude wherever an event covers the index
    and 0 elsewhere.  Overlapping events or events that do not fit inside
    ``[0, length)`` are contract violations and raise ``ValueError``.
    """
    if length < 0:
        raise ValueError("length must be >= 0")
    events = list(events)
    _check_disjoint(events)
    out = np.zeros(length, dtype=np.float64)
    for ev in events:
        if ev.start_idx < 0 or ev.end_idx >= length:
            raise ValueError(
                f"event [{ev.start_idx}, {ev.end_idx}] out of range for length {length}")
        out[ev.start_idx:ev.end_idx + 1] = ev.amplitude
    return out
