"""Segment classification via the cumulative counting profile.

For a segment S the profile ``f(c)`` counts samples with amplitude above
``c``.  Square-ish levels in S show up as sharp drops of ``f``, i.e. as
peaks of its (negated) gradient ``g``: one prominent peak means a single
level, two mean stacked levels, and a broad featureless gradient means a
drifting waveform such as a dryer ramp.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import PipelineParams, Segment, SegmentType


@dataclass(frozen=True)
class CumulativeProfile:
    """Amplitude profile of one segment on a fixed threshold grid.

    ``f[k]`` counts samples strictly above ``c_grid[k]``; ``g`` is the
    negated per-kW difference of ``f`` (so drops become positive peaks),
    aligned with the grid via ``g[0] = 0``; ``g_n`` is ``g`` scaled to a
    unit maximum.
    """

    c_grid: np.ndarray
    f: np.ndarray
    g: np.ndarray
    g_n: np.ndarray


@dataclass(frozen=True)
class Peak:
    """One prominent peak of the gradient profile."""

    c_position: float
    height: float


def cumulative_profile(seg: Segment | np.ndarray, c_grid_step: float = 0.05) -> CumulativeProfile:
    """Evaluate the counting function and its gradient on the threshold grid.

    The grid runs from 0 to the segment maximum in steps of
    ``c_grid_step``, with the maximum itself always included as the last
    point so ``f`` ends at exactly 0.
    """
    if c_grid_step <= 0.0:
        raise ValueError("c_grid_step must be positive")
    samples = seg.samples if isinstance(seg, Segment) else np.asarray(seg, dtype=np.float64)
    if samples.size == 0:
        raise ValueError("cannot profile an empty segment")
    top = float(samples.max())
    grid = np.arange(0.0, top, c_grid_step)
    # keep the last step at least half-width so the gradient stays bounded
    if grid.size > 1 and top - grid[-1] < 0.5 * c_grid_step:
        grid[-1] = top
    else:
        grid = np.append(grid, top)
    ordered = np.sort(samples)
    f = samples.size - np.searchsorted(ordered, grid, side="right")
    g = np.zeros_like(grid)
    g[1:] = -np.diff(f) / np.diff(grid)
    g_max = g.max()
    g_n = g / g_max if g_max > 0.0 else g.copy()
    return CumulativeProfile(grid, f.astype(np.float64), g, g_n)


def _smoothed(g: np.ndarray, bins: int) -> np.ndarray:
    if bins <= 1 or g.size <= 1:
        return g
    kernel = np.ones(min(bins, g.size)) / min(bins, g.size)
    return np.convolve(g, kernel, mode="same")


def _local_maxima(g: np.ndarray) -> list[int]:
    """Indices that top both neighbours, with plateau edges and boundaries allowed."""
    n = g.size
    out = []
    for i in range(n):
        if g[i] <= 0.0:
            continue
        left_ok = i == 0 or g[i] >= g[i - 1]
        right_ok = i == n - 1 or g[i] >= g[i + 1]
        strict = (i > 0 and g[i] > g[i - 1]) or (i < n - 1 and g[i] > g[i + 1])
        if left_ok and right_ok and (strict or n == 1):
            out.append(i)
    return out


def find_prominent_peaks(profile: CumulativeProfile,
                         params: PipelineParams | None = None) -> list[Peak]:
    """Greedy selection of prominent gradient peaks.

    The gradient is boxcar-smoothed first, then local maxima taller than
    ``peak_min_height_frac`` of the smoothed maximum are taken tallest
    first, discarding any candidate within ``peak_min_distance`` kW of an
    already selected one.
    """
    params = params or PipelineParams()
    g_s = _smoothed(profile.g, params.peak_smooth_bins)
    top = g_s.max()
    if top <= 0.0:
        return []
    cut = params.peak_min_height_frac * top
    candidates = [i for i in _local_maxima(g_s) if g_s[i] > cut]
    candidates.sort(key=lambda i: (-g_s[i], profile.c_grid[i]))
    chosen: list[int] = []
    for i in candidates:
        c = profile.c_grid[i]
        if all(abs(c - profile.c_grid[j]) > params.peak_min_distance for j in chosen):
            chosen.append(i)
    chosen.sort()
    return [Peak(float(profile.c_grid[i]), float(g_s[i])) for i in chosen]


def occupied_range(profile: CumulativeProfile) -> float:
    """Width of the amplitude band the segment actually occupies.

    ``f`` stays at its full count below the smallest sample, so the band
    is measured from the last grid point with the full count up to the
    segment maximum.
    """
    full = np.flatnonzero(profile.f == profile.f[0])
    lo = profile.c_grid[full[-1]] if full.size else profile.c_grid[0]
    return float(profile.c_grid[-1] - lo)


def classify_segment(profile: CumulativeProfile, peaks: list[Peak],
                     params: PipelineParams | None = None) -> SegmentType:
    """Map a profile and its prominent peaks to a segment type.

    A profile confined to less than the peak separation scale (2 kW) can
    only hold one level, so it is Type 1.  Over a wider band the area
    under the normalised smoothed gradient decides first: a broad profile
    filling more than ``area_frac`` of its enclosing rectangle has no
    sharp level at all and is a drifting waveform (Type 0) whatever the
    nominal peak count, since a diffuse profile makes peak counting
    unreliable.  Otherwise one prominent peak is a single level (Type 1),
    two or more are stacked levels (Type 2), and none is Type 0.
    """
    params = params or PipelineParams()
    g_s = _smoothed(profile.g, params.peak_smooth_bins)
    top = g_s.max()
    if top <= 0.0:
        return SegmentType.TYPE0
    occupied = occupied_range(profile)
    if occupied >= params.peak_min_distance:
        area = float(np.trapezoid(g_s / top, profile.c_grid))
        width = float(profile.c_grid[-1]) if params.area_range_from_zero else occupied
        if area > params.area_frac * width:
            return SegmentType.TYPE0
    elif peaks:
        return SegmentType.TYPE1
    if len(peaks) == 1:
        return SegmentType.TYPE1
    if len(peaks) == 0:
        return SegmentType.TYPE0
    return SegmentType.TYPE2
