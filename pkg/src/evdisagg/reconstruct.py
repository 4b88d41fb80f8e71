"""Square-wave reconstruction of EV sessions from classified segments.

The effective width of a segment is its bottom width; the effective
height is the amplitude at which the segment narrows to 80 % of that
width, which makes the measure immune to short clutter riding on top of
a charging session.  Each segment type gets its own decision routine;
all of them return the reconstructed events together with a short
decision token for the diagnostics trail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import EvEvent, PipelineParams, Segment
from .segmentation import extract_segments
from .spike_filter import filter_spike_train

#: Typical EV charging amplitude band (kW), used to break ties when no
#: reference height has been observed yet.
TYPICAL_EV_BAND = (3.0, 4.0)


@dataclass(frozen=True)
class EffectiveShape:
    """Bottom width (minutes) and effective height (kW) of a segment."""

    width: int
    height: float


@dataclass(frozen=True)
class SubSegment(Segment):
    """A run above the high threshold inside a classified segment.

    ``actual_height`` is the sub-segment's own effective height measured
    from the parent's effective height (clamped at zero).
    """

    parent: Segment = None  # type: ignore[assignment]
    actual_height: float = 0.0


class EvHeightMemory:
    """Running record of confidently observed EV charging amplitudes.

    EV amplitude is stable from day to day, so heights reconstructed from
    unambiguous (Type 1) segments serve as the reference when a session
    is fully hidden under another appliance.  Only amplitudes of at least
    3 kW may enter.
    """

    def __init__(self, heights=()):
        self._heights: list[float] = []
        for h in heights:
            self.add(h)

    def add(self, height: float) -> None:
        if height < 3.0:
            raise ValueError(f"EV height memory only stores amplitudes >= 3 kW, got {height}")
        self._heights.append(float(height))

    def representative(self) -> float | None:
        """Median of the stored heights, or None when nothing was seen yet."""
        if not self._heights:
            return None
        return float(np.median(self._heights))

    def __len__(self) -> int:
        return len(self._heights)

    @property
    def heights(self) -> tuple[float, ...]:
        return tuple(self._heights)


def effective_shape(seg: Segment | np.ndarray, width_frac: float = 0.80) -> EffectiveShape:
    """Measure a segment's bottom width and effective height.

    The height is the largest amplitude still covered by at least
    ``width_frac`` of the samples, i.e. the ``ceil(width_frac * width)``-th
    largest sample value.
    """
    samples = seg.samples if isinstance(seg, Segment) else np.asarray(seg, dtype=np.float64)
    if samples.size == 0:
        raise ValueError("cannot measure an empty segment")
    width = samples.size
    k = max(1, math.ceil(width_frac * width - 1e-9))
    height = float(np.sort(samples)[::-1][k - 1])
    return EffectiveShape(width, height)


def surrounded_by_spikes(seg: Segment, removed: list[Segment],
                         params: PipelineParams) -> bool:
    """True when removed spikes crowd the segment on both sides.

    A side counts as crowded when at least ``spike_census_count`` removed
    segments sit within ``spike_census_window`` minutes of it.
    """
    window = params.spike_census_window
    left = sum(1 for r in removed
               if r.end_idx < seg.start_idx and r.end_idx >= seg.start_idx - window)
    right = sum(1 for r in removed
                if r.start_idx > seg.end_idx and r.start_idx <= seg.end_idx + window)
    return left >= params.spike_census_count and right >= params.spike_census_count


def _event(start: int, duration: int, amplitude: float,
           low_confidence: bool = False) -> EvEvent:
    # amplitudes are quantised to 1e-6 kW so serialised results round-trip
    return EvEvent(start, duration, round(float(amplitude), 6), low_confidence)


def reconstruct_type0(seg: Segment, shape: EffectiveShape, memory: EvHeightMemory,
                      params: PipelineParams | None = None) -> tuple[EvEvent | None, str]:
    """Decide a Type 0 segment: bare dryer/oven, or EV fully underneath one.

    Below the 5.5 kW cut the segment is a dryer/oven wave and is dropped.
    Above it an EV is hiding under an appliance of equal duration; its
    amplitude cannot be measured here, so the memory's representative
    height is used.  With an empty memory the height is estimated as the
    segment height minus the dryer cut and flagged low-confidence.
    """
    params = params or PipelineParams()
    if shape.height < params.dryer_ev_cut:
        return None, "type0-dryer-discard"
    if shape.width > params.max_ev_width:
        return None, "type0-too-wide"
    rep = memory.representative()
    if rep is not None:
        return _event(seg.start_idx, shape.width, rep), "type0-memory-height"
    fallback = shape.height - params.dryer_ev_cut
    return (_event(seg.start_idx, shape.width, fallback, low_confidence=True),
            "type0-fallback-height")


def reconstruct_type1(seg: Segment, shape: EffectiveShape, removed: list[Segment],
                      memory: EvHeightMemory | None,
                      params: PipelineParams | None = None) -> tuple[EvEvent | None, str]:
    """Decide a Type 1 segment: a single-level candidate EV wave.

    Overlong or low candidates are AC lumps or other appliances, as are
    candidates surrounded by removed AC spikes.  Accepted amplitudes are
    recorded in the height memory (when one is supplied).
    """
    params = params or PipelineParams()
    if shape.width > params.max_ev_width:
        return None, "type1-too-wide"
    if shape.height < params.ev_min_amplitude:
        return None, "type1-low-height"
    if surrounded_by_spikes(seg, removed, params):
        return None, "type1-spike-surrounded"
    event = _event(seg.start_idx, shape.width, shape.height)
    if memory is not None:
        memory.add(event.amplitude)
    return event, "type1-ev"


def split_type2(seg: Segment, t_high: float,
                params: PipelineParams | None = None) -> tuple[list[SubSegment], EffectiveShape]:
    """Split a Type 2 segment into its top sub-segments and bottom shape.

    Sub-segments are the maximal runs of samples at or above ``t_high``
    inside the segment; the bottom shape is the effective shape of the
    whole segment.  Each sub-segment carries its actual height: its own
    effective height measured from the parent's.
    """
    params = params or PipelineParams()
    frac = params.effective_height_width_frac
    bottom_shape = effective_shape(seg, frac)
    masked = np.where(seg.samples >= t_high, seg.samples, 0.0)
    subs = []
    for run in extract_segments(masked):
        own = effective_shape(run.samples, frac)
        actual = max(0.0, own.height - bottom_shape.height)
        subs.append(SubSegment(seg.start_idx + run.start_idx,
                               seg.start_idx + run.end_idx,
                               run.samples, parent=seg, actual_height=actual))
    return subs, bottom_shape


def reconstruct_type2(seg: Segment, subs: list[SubSegment], bottom_shape: EffectiveShape,
                      memory: EvHeightMemory,
                      params: PipelineParams | None = None) -> tuple[list[EvEvent], str]:
    """Decide a Type 2 segment: an EV overlapped by AC activity.

    Three cases:

    a. The bottom is wider than an EV can be, so it is an AC lump and the
       EV lives in the top part: every sufficiently long sub-segment with
       a plausible actual height becomes an event.
    b. Otherwise the spike-train filter is run over the sub-segments; if
       it removes them all, the top was an AC spike train and the bottom
       is the EV wave.
    c. If some sub-segments survive, each one votes by comparing its
       actual height and the parent's effective height against the
       remembered EV height (or the typical 3-4 kW band when nothing is
       remembered).  A bottom vote wins over top votes because a bottom
       event spans the whole segment; at most one bottom event is emitted.
    """
    params = params or PipelineParams()
    if not subs:
        raise ValueError("reconstruct_type2 needs the sub-segments from split_type2")

    if bottom_shape.width > params.max_ev_width:
        events = []
        for sub in subs:
            if sub.duration <= params.min_subsegment_duration:
                continue
            if sub.duration > params.max_ev_width:
                continue
            if sub.actual_height >= params.ev_min_amplitude:
                events.append(_event(sub.start_idx, sub.duration, sub.actual_height))
        return events, "type2a-top-events" if events else "type2a-no-top-candidate"

    survivors = filter_spike_train(list(subs), params)
    if not survivors:
        if bottom_shape.height < params.ev_min_amplitude:
            return [], "type2b-bottom-below-min"
        return ([_event(seg.start_idx, bottom_shape.width, bottom_shape.height)],
                "type2b-bottom-ev")

    rep = memory.representative()
    lo, hi = TYPICAL_EV_BAND
    bottom_vote = False
    top_votes: list[SubSegment] = []
    for sub in survivors:
        top_amp, bottom_amp = sub.actual_height, bottom_shape.height
        if rep is not None:
            if abs(top_amp - rep) < abs(bottom_amp - rep):
                top_votes.append(sub)
            else:
                bottom_vote = True
        elif lo <= bottom_amp <= hi:
            bottom_vote = True
        elif lo <= top_amp <= hi:
            top_votes.append(sub)
    if bottom_vote:
        if bottom_shape.height < params.ev_min_amplitude:
            return [], "type2c-bottom-below-min"
        return ([_event(seg.start_idx, bottom_shape.width, bottom_shape.height)],
                "type2c-bottom-ev")
    events = [_event(s.start_idx, s.duration, s.actual_height)
              for s in top_votes if s.actual_height >= params.ev_min_amplitude]
    return events, "type2c-top-events" if events else "type2c-no-candidate"
