"""Seed-and-propagate removal of air-conditioner spike trains.

AC compressors produce bursts whose duration drifts over the day, so no
fixed duration cutoff separates them from short EV sessions.  Instead,
every very short segment becomes a removal *seed*, and the removal label
spreads along the train as long as the next segment is not dramatically
longer than the current one, sits close enough in time, and stays below
a hard duration cap.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import PipelineParams, Segment


@dataclass(frozen=True)
class SpikeLabeling:
    """Per-segment removal verdict plus the seeds that started it all."""

    removed: tuple[bool, ...]
    seeds: tuple[int, ...]

    def kept_indices(self) -> list[int]:
        return [i for i, r in enumerate(self.removed) if not r]

    def removed_indices(self) -> list[int]:
        return [i for i, r in enumerate(self.removed) if r]


def gap_minutes(left: Segment, right: Segment) -> int:
    """Number of zeroed minutes strictly between two segments."""
    return right.start_idx - left.end_idx - 1


def find_seeds(segments: list[Segment], t_seed: float = 20.0) -> list[int]:
    """Indices of segments strictly shorter than ``t_seed`` minutes."""
    return [i for i, seg in enumerate(segments) if seg.duration < t_seed]


def propagate(segments: list[Segment], seeds: list[int],
              params: PipelineParams) -> SpikeLabeling:
    """Spread the removal label outward from every seed.

    Seeds are processed left to right; each runs its full forward chain,
    then its full backward chain.  A chain advances to the nearest
    not-yet-labeled segment and labels it if

    * its duration is under ``(1 + eta)`` times the current segment's,
    * the gap to it is at most ``gap_factor`` times the current duration,
    * its duration does not exceed ``t_spike``.

    Already-labeled segments are stepped over for free, with the chain
    adopting their duration.  Any failed condition ends the chain, so a
    long segment blocks propagation rather than being skipped.
    """
    n = len(segments)
    removed = [False] * n
    for s in seeds:
        if not (0 <= s < n):
            raise ValueError(f"seed index {s} out of range")
        removed[s] = True

    def run_chain(start: int, step: int) -> None:
        cur = start
        seed_duration = segments[start].duration
        j = start + step
        while 0 <= j < n:
            if removed[j]:
                cur = j
                j += step
                continue
            d_cur = segments[cur].duration
            d_gap = seed_duration if params.gap_uses_seed_duration else d_cur
            left, right = (cur, j) if step > 0 else (j, cur)
            candidate = segments[j]
            if (candidate.duration < (1.0 + params.eta) * d_cur
                    and gap_minutes(segments[left], segments[right]) <= params.gap_factor * d_gap
                    and candidate.duration <= params.t_spike):
                removed[j] = True
                cur = j
                j += step
            else:
                break

    for s in sorted(seeds):
        run_chain(s, +1)
        run_chain(s, -1)
    return SpikeLabeling(tuple(removed), tuple(sorted(seeds)))


def label_spikes(segments: list[Segment], params: PipelineParams) -> SpikeLabeling:
    """Find seeds and propagate removal labels in one go."""
    return propagate(segments, find_seeds(segments, params.t_seed), params)


def filter_spike_train(segments: list[Segment],
                       params: PipelineParams | None = None) -> list[Segment]:
    """Return the segments that survive the spike-train filter, order kept."""
    params = params or PipelineParams()
    labeling = label_spikes(segments, params)
    return [segments[i] for i in labeling.kept_indices()]
