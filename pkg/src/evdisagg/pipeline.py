"""End-to-end composition of the five pipeline stages over time windows.

A window (one day by default) is processed as: adaptive threshold ->
segment extraction -> spike-train filter -> residual noise removal ->
classification -> reconstruction.  Reconstruction runs in two phases so
that unambiguous Type 1 sessions seed the EV height memory before the
memory-dependent Type 0 / Type 2 decisions are taken; the memory is then
carried across the windows of one calendar month.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta

import numpy as np

from .classify import classify_segment, cumulative_profile, find_prominent_peaks
from .model import (DisaggregationResult, EvEvent, PipelineParams, PowerSeries, Segment,
                    SegmentDiagnostic, SegmentType, render_events)
from .reconstruct import (EvHeightMemory, effective_shape, reconstruct_type0,
                          reconstruct_type1, reconstruct_type2, split_type2)
from .segmentation import apply_threshold, compute_low_threshold, extract_segments, \
    remove_residual_noise
from .spike_filter import label_spikes

MINUTES_PER_DAY = 24 * 60


@dataclass(frozen=True)
class WindowSpec:
    """How to cut a long trace into processing windows.

    ``kind`` is one of ``day``, ``month`` or ``custom`` (the latter takes
    explicit ``(start, stop)`` sample ranges).  Segments are processed
    with ``margin`` minutes of context on both sides, and a segment
    spanning a window edge belongs to the window holding its midpoint.
    """

    kind: str = "day"
    custom_ranges: tuple[tuple[int, int], ...] | None = None
    margin: int = 720
    boundary: str = "midpoint"

    def __post_init__(self):
        if self.kind not in ("day", "month", "custom"):
            raise ValueError(f"unknown window kind {self.kind!r}")
        if self.kind == "custom" and not self.custom_ranges:
            raise ValueError("custom windows need explicit ranges")
        if self.boundary != "midpoint":
            raise ValueError("only the midpoint boundary policy is implemented")


def _classify_all(segments: list[Segment], params: PipelineParams):
    out = []
    for seg in segments:
        profile = cumulative_profile(seg, params.c_grid_step)
        peaks = find_prominent_peaks(profile, params)
        out.append((seg, classify_segment(profile, peaks, params)))
    return out


def _reconstruct_window(classified, removed, t_low: float, params: PipelineParams,
                        memory: EvHeightMemory):
    """Two-phase reconstruction; returns (events, diagnostics)."""
    frac = params.effective_height_width_frac
    events: list[EvEvent] = []
    diags: list[SegmentDiagnostic] = []
    deferred = []

    for seg, seg_type in classified:
        if seg_type is SegmentType.TYPE1:
            shape = effective_shape(seg, frac)
            event, decision = reconstruct_type1(seg, shape, removed, memory, params)
            got = (event,) if event else ()
            events.extend(got)
            diags.append(SegmentDiagnostic(seg.start_idx, seg.end_idx, seg_type,
                                           decision, got))
        else:
            deferred.append((seg, seg_type))

    t_high = t_low + params.t_high_offset
    for seg, seg_type in deferred:
        if seg_type is SegmentType.TYPE0:
            shape = effective_shape(seg, frac)
            event, decision = reconstruct_type0(seg, shape, memory, params)
            got = (event,) if event else ()
        else:
            subs, bottom_shape = split_type2(seg, t_high, params)
            if subs:
                got_list, decision = reconstruct_type2(seg, subs, bottom_shape,
                                                       memory, params)
                got = tuple(got_list)
            else:
                # the high threshold cleared the whole segment: no two-level
                # structure to exploit, fall back to the single-level rules
                event, decision = reconstruct_type1(seg, bottom_shape, removed,
                                                    None, params)
                decision = f"type2-no-subsegments:{decision}"
                got = (event,) if event else ()
        events.extend(got)
        diags.append(SegmentDiagnostic(seg.start_idx, seg.end_idx, seg_type,
                                       decision, got))

    events.sort(key=lambda e: e.start_idx)
    diags.sort(key=lambda d: d.start_idx)
    return events, diags


def _run(values: np.ndarray, t_low: float, params: PipelineParams,
         memory: EvHeightMemory, keep_range: tuple[int, int] | None = None):
    """Steps 1-5 over ``values`` (already in global index space).

    ``keep_range`` restricts classification/reconstruction to segments
    whose midpoint falls inside the half-open range.
    """
    thresholded = apply_threshold(values, t_low)
    segments = extract_segments(thresholded)
    labeling = label_spikes(segments, params)
    kept = [segments[i] for i in labeling.kept_indices()]
    removed = [segments[i] for i in labeling.removed_indices()]
    cleaned = remove_residual_noise(values, kept, params.n_before, params.n_after)

    def in_window(seg: Segment) -> bool:
        if keep_range is None:
            return True
        lo, hi = keep_range
        return lo <= (seg.start_idx + seg.end_idx) / 2.0 < hi

    cleaned = [s for s in cleaned if in_window(s)]
    classified = _classify_all(cleaned, params)
    events, diags = _reconstruct_window(classified, removed, t_low, params, memory)
    diags.extend(SegmentDiagnostic(s.start_idx, s.end_idx, None, "spike-removed", ())
                 for s in removed if in_window(s))
    diags.sort(key=lambda d: d.start_idx)
    return events, diags


def disaggregate(x: PowerSeries, params: PipelineParams | None = None,
                 memory: EvHeightMemory | None = None) -> DisaggregationResult:
    """Run the full pipeline over one series treated as a single window."""
    params = params or PipelineParams()
    memory = memory if memory is not None else EvHeightMemory()
    n = len(x)
    if n == 0 or not (x.values > 0.0).any():
        return DisaggregationResult((), PowerSeries(x.start_time, np.zeros(n)))
    t_low = compute_low_threshold(x.values, params.t_low_mass_cut, params.t_low_floor)
    events, diags = _run(x.values, t_low, params, memory)
    estimated = PowerSeries(x.start_time, render_events(events, n))
    return DisaggregationResult(tuple(events), estimated, tuple(diags))


def _next_month_start(t: datetime) -> datetime:
    year, month = (t.year + 1, 1) if t.month == 12 else (t.year, t.month + 1)
    return datetime(year, month, 1)


def window_bounds(x: PowerSeries, spec: WindowSpec) -> list[tuple[int, int]]:
    """Half-open sample ranges of the processing windows covering ``x``."""
    n = len(x)
    if spec.kind == "custom":
        for lo, hi in spec.custom_ranges:
            if not (0 <= lo < hi <= n):
                raise ValueError(f"custom window [{lo}, {hi}) out of range 0..{n}")
        return list(spec.custom_ranges)
    if n == 0:
        return []
    cuts = [0]
    if spec.kind == "day":
        minute = x.start_time.hour * 60 + x.start_time.minute
        step = (MINUTES_PER_DAY - minute) % MINUTES_PER_DAY or MINUTES_PER_DAY
        cut = step
        while cut < n:
            cuts.append(cut)
            cut += MINUTES_PER_DAY
    else:  # month
        anchor = x.start_time
        while True:
            nxt = _next_month_start(anchor)
            idx = int((nxt - x.start_time).total_seconds()) // 60
            if idx >= n:
                break
            cuts.append(idx)
            anchor = nxt
    cuts.append(n)
    return [(a, b) for a, b in zip(cuts, cuts[1:]) if b > a]


def disaggregate_windows(x: PowerSeries, spec: WindowSpec | None = None,
                         params: PipelineParams | None = None) -> list[DisaggregationResult]:
    """Process a long trace window by window.

    The low threshold is computed per window from the window's own
    samples, but segmentation sees ``spec.margin`` minutes of context so
    segments straddling a window edge are measured in full.  The EV
    height memory is shared across all windows of one calendar month
    (or across everything with ``params.memory_across_months``).
    """
    spec = spec or WindowSpec()
    params = params or PipelineParams()
    values = x.values
    n = len(x)
    results: list[DisaggregationResult] = []
    memories: dict[tuple[int, int] | None, EvHeightMemory] = {}
    for w0, w1 in window_bounds(x, spec):
        w_start = x.start_time + timedelta(minutes=w0)
        if params.memory_across_months:
            key = None
        else:
            key = (w_start.year, w_start.month)
        memory = memories.setdefault(key, EvHeightMemory())
        window_values = values[w0:w1]
        if not (window_values > 0.0).any():
            results.append(DisaggregationResult(
                (), PowerSeries(w_start, np.zeros(w1 - w0))))
            continue
        t_low = compute_low_threshold(window_values, params.t_low_mass_cut,
                                      params.t_low_floor)
        ext0, ext1 = max(0, w0 - spec.margin), min(n, w1 + spec.margin)
        events, diags = _run(values[ext0:ext1], t_low, params, memory,
                             keep_range=(w0 - ext0, w1 - ext0))
        events = [EvEvent(e.start_idx + ext0, e.duration, e.amplitude, e.low_confidence)
                  for e in events]
        diags = [SegmentDiagnostic(d.start_idx + ext0, d.end_idx + ext0, d.segment_type,
                                   d.decision,
                                   tuple(EvEvent(e.start_idx + ext0, e.duration,
                                                 e.amplitude, e.low_confidence)
                                         for e in d.events))
                 for d in diags]
        rendered = np.zeros(w1 - w0)
        for e in events:
            lo, hi = max(e.start_idx, w0), min(e.end_idx + 1, w1)
            if lo < hi:
                rendered[lo - w0:hi - w0] = e.amplitude
        results.append(DisaggregationResult(tuple(events),
                                            PowerSeries(w_start, rendered),
                                            tuple(diags)))
    return results
