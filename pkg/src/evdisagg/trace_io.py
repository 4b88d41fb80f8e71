"""CSV trace ingestion and JSON report serialisation.

Trace files carry a ``timestamp,power_kw`` header followed by one row
per minute, timestamps in ISO-8601 at minute resolution and strictly
increasing by one minute.  Powers are written with six decimals, which
is exact for the synthetic data (quantised to 1/64 kW) and for event
amplitudes (quantised to 1e-6 kW), so a write/read cycle is lossless.
Report energies are written with nine decimals so they stay within 1e-9
of the values computed from the rendered series.
"""

from __future__ import annotations

import json
import math
from datetime import datetime, timedelta
from pathlib import Path

import numpy as np

from .metrics import EvalSummary, MonthlyEval
from .model import DisaggregationResult, PowerSeries

TRACE_HEADER = "timestamp,power_kw"


class TraceParseError(ValueError):
    """Unparseable trace file; carries the offending line number."""

    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


def read_trace_csv(path, gap_fill: bool = False, max_gap: int = 5) -> PowerSeries:
    """Read a trace file into a PowerSeries.

    Duplicate or missing timestamps are rejected with the line number.
    With ``gap_fill`` enabled, gaps of at most ``max_gap`` missing minutes
    are filled by linear interpolation; longer gaps stay fatal.
    """
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines:
        raise TraceParseError(path, 1, "empty file")
    if lines[0].strip() != TRACE_HEADER:
        raise TraceParseError(path, 1, f"expected header {TRACE_HEADER!r}, got {lines[0]!r}")

    times: list[datetime] = []
    values: list[float] = []
    prev: datetime | None = None
    for line_no, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        parts = raw.split(",")
        if len(parts) != 2:
            raise TraceParseError(path, line_no, f"expected 2 fields, got {len(parts)}")
        try:
            stamp = datetime.fromisoformat(parts[0].strip())
        except ValueError:
            raise TraceParseError(path, line_no, f"bad timestamp {parts[0]!r}") from None
        if stamp.second or stamp.microsecond:
            raise TraceParseError(path, line_no, "timestamps must have minute resolution")
        try:
            power = float(parts[1])
        except ValueError:
            raise TraceParseError(path, line_no, f"bad power value {parts[1]!r}") from None
        if not math.isfinite(power) or power < 0.0:
            raise TraceParseError(path, line_no,
                                  f"power must be finite and >= 0, got {parts[1]}")
        if prev is not None:
            step = (stamp - prev).total_seconds() / 60.0
            if step <= 0:
                raise TraceParseError(path, line_no,
                                      f"timestamp {stamp} does not advance past {prev}")
            if step != int(step):
                raise TraceParseError(path, line_no, "timestamps must align to whole minutes")
            missing = int(step) - 1
            if missing:
                if not gap_fill or missing > max_gap:
                    raise TraceParseError(path, line_no,
                                          f"{missing} missing minute(s) before {stamp}"
                                          + ("" if gap_fill else " (gap filling disabled)"))
                last = values[-1]
                for k in range(1, missing + 1):
                    frac = k / (missing + 1)
                    times.append(prev + timedelta(minutes=k))
                    values.append(last + frac * (power - last))
        times.append(stamp)
        values.append(power)
        prev = stamp
    if not times:
        raise TraceParseError(path, 2, "no data rows")
    return PowerSeries(times[0], np.asarray(values))


def write_trace_csv(path, series: PowerSeries) -> None:
    """Write a PowerSeries as a trace file with six-decimal powers."""
    path = Path(path)
    rows = [TRACE_HEADER]
    stamp = series.start_time
    for value in series.values:
        rows.append(f"{stamp.isoformat(timespec='minutes')},{value:.6f}")
        stamp += timedelta(minutes=1)
    path.write_text("\n".join(rows) + "\n")


def _round6(x: float) -> float:
    return round(float(x), 6)


def _round9(x: float) -> float:
    return round(float(x), 9)


def disaggregation_report(results: list[DisaggregationResult], series_start: datetime,
                          window_kind: str = "day") -> dict:
    """Build the JSON-shaped report for a list of window results.

    ``series_start`` is the start of the original ingested trace; event
    indices are global offsets into that trace.
    """
    windows = []
    total_energy = 0.0
    n_events = 0
    for res in results:
        window_start = res.estimated.start_time
        events = []
        for ev in res.events:
            events.append({
                "start_time": (series_start + timedelta(minutes=ev.start_idx)
                               ).isoformat(timespec="minutes"),
                "start_idx": ev.start_idx,
                "duration_min": ev.duration,
                "amplitude_kw": _round6(ev.amplitude),
                "energy_kwh": _round9(ev.energy_kwh),
                "low_confidence": ev.low_confidence,
            })
        decisions: dict[str, int] = {}
        for diag in res.diagnostics:
            decisions[diag.decision] = decisions.get(diag.decision, 0) + 1
        energy = res.total_energy_kwh
        total_energy += energy
        n_events += len(res.events)
        windows.append({
            "start_time": window_start.isoformat(timespec="minutes"),
            "minutes": len(res.estimated),
            "energy_kwh": _round9(energy),
            "events": events,
            "decisions": decisions,
        })
    return {
        "window_kind": window_kind,
        "n_windows": len(windows),
        "n_events": n_events,
        "total_energy_kwh": _round9(total_energy),
        "windows": windows,
    }


def evaluation_report(months: list[MonthlyEval], summary: EvalSummary) -> dict:
    """Build the JSON-shaped report for an evaluate run."""
    return {
        "months": [{
            "month": m.month,
            "e_true_kwh": _round9(m.e_true),
            "e_est_kwh": _round9(m.e_est),
            "err1_pct": None if m.err1_term is None else _round6(100.0 * m.err1_term),
            "err2_kwh": _round9(m.err2_term),
            "mse": None if m.mse_term is None else _round6(m.mse_term),
        } for m in months],
        "summary": {
            "n_months": summary.n_months,
            "err1_pct_mean": _round6(summary.err1_mean),
            "err1_pct_std": _round6(summary.err1_std),
            "err2_kwh_mean": _round6(summary.err2_mean),
            "err2_kwh_std": _round6(summary.err2_std),
            "mse_mean": _round6(summary.mse_mean),
            "mse_std": _round6(summary.mse_std),
            "table_row": summary.table_row(),
        },
    }


def write_report(path, report: dict) -> None:
    """Serialise a report deterministically (sorted keys, two-space indent)."""
    Path(path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
