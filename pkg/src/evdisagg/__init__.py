"""Training-free disaggregation of EV charging from aggregate power traces.

The pipeline takes a whole-house real-power trace sampled once a minute
and recovers the EV charging sessions hidden in it as square waves:
adaptive thresholding, spike-train filtering, local noise removal,
segment classification via the cumulative counting profile, and
per-type square-wave reconstruction.
"""

from .classify import (CumulativeProfile, Peak, classify_segment, cumulative_profile,
                       find_prominent_peaks)
from .metrics import (EvalSummary, MonthlyEval, energy_kwh, err1, err2, evaluate_month,
                      mse, summarize)
from .model import (DisaggregationResult, EvEvent, PipelineParams, PowerSeries, Segment,
                    SegmentDiagnostic, SegmentType, render_events)
from .pipeline import WindowSpec, disaggregate, disaggregate_windows, window_bounds
from .reconstruct import (EffectiveShape, EvHeightMemory, SubSegment, effective_shape,
                          reconstruct_type0, reconstruct_type1, reconstruct_type2,
                          split_type2, surrounded_by_spikes)
from .segmentation import (ThresholdedSeries, apply_threshold, compute_low_threshold,
                           extract_segments, local_noise_amplitude, remove_residual_noise)
from .spike_filter import (SpikeLabeling, filter_spike_train, find_seeds, label_spikes,
                           propagate)
from .synth import PRESETS, ScenarioSpec, generate_day, generate_month, preset
from .trace_io import TraceParseError, read_trace_csv, write_trace_csv

__version__ = "0.1.0"

__all__ = [
    "CumulativeProfile", "DisaggregationResult", "EffectiveShape", "EvEvent",
    "EvHeightMemory", "EvalSummary", "MonthlyEval", "PRESETS", "Peak",
    "PipelineParams", "PowerSeries", "ScenarioSpec", "Segment", "SegmentDiagnostic",
    "SegmentType", "SpikeLabeling", "SubSegment", "ThresholdedSeries",
    "TraceParseError", "WindowSpec", "apply_threshold", "classify_segment",
    "compute_low_threshold", "cumulative_profile", "disaggregate",
    "disaggregate_windows", "effective_shape", "energy_kwh", "err1", "err2",
    "evaluate_month", "extract_segments", "filter_spike_train", "find_prominent_peaks",
    "find_seeds", "generate_day", "generate_month", "label_spikes",
    "local_noise_amplitude", "mse", "preset", "propagate", "read_trace_csv",
    "reconstruct_type0", "reconstruct_type1", "reconstruct_type2", "remove_residual_noise",
    "render_events", "split_type2", "summarize", "surrounded_by_spikes",
    "window_bounds", "write_trace_csv",
]
