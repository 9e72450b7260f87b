"""Swimming-direction and speed-magnitude distributions from tracks.

Per-frame center displacements are averaged as vectors over windows of
consecutive steps, then mirrored onto the vertical axis so that 0 degrees
is horizontal, +90 straight up and -90 straight down (image y grows
downward).  Averaging before mirroring keeps net vertical drift visible
for fish that oscillate sideways.  Trajectories shorter than ``min_len``
positions are discarded as noise.
"""

import math
from dataclasses import dataclass

import numpy as np

from .io import SequenceAnnotations


@dataclass(frozen=True)
class DirectionSample:
    angle: float
    magnitude: float
    track_id: int
    window_start_frame: int


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    weights: np.ndarray | None
    overflow: int = 0


def track_directions(
    history,
    min_len: int = 5,
    window: int = 5,
    stride: int | None = None,
    track_id: int = 0,
) -> list[DirectionSample]:
    """Direction samples for one track given as (frame, box) pairs.

    Displacements are center-to-center, divided by the frame gap so the
    magnitude stays in pixels/frame even across missed frames.  Windows
    cover ``window`` consecutive displacements; the default stride equals
    the window (non-overlapping), a trailing partial window is dropped.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    stride = window if stride is None else stride
    if stride < 1:
        raise ValueError("stride must be >= 1")
    n = len(history)
    if n < min_len:
        return []
    frames = [f for f, _ in history]
    if any(b <= a for a, b in zip(frames, frames[1:])):
        raise ValueError("track history frames must be strictly increasing")
    centers = np.array([box.center for _, box in history], dtype=np.float64)
    gaps = np.diff(np.array(frames, dtype=np.float64))
    steps = np.diff(centers, axis=0) / gaps[:, None]

    samples = []
    for start in range(0, len(steps) - window + 1, stride):
        mx, my = steps[start : start + window].mean(axis=0)
        angle = math.degrees(math.atan2(-my, abs(mx)))
        angle = min(max(angle, -90.0), 90.0)
        samples.append(
            DirectionSample(
                angle=angle,
                magnitude=math.hypot(mx, my),
                track_id=track_id,
                window_start_frame=frames[start],
            )
        )
    return samples


def collect_direction_samples(
    ann: SequenceAnnotations,
    min_len: int = 5,
    window: int = 5,
    stride: int | None = None,
) -> list[DirectionSample]:
    """Direction samples across every identity of a tracks file."""
    samples = []
    for identity in ann.identities():
        samples.extend(
            track_directions(
                ann.track_of(identity),
                min_len=min_len,
                window=window,
                stride=stride,
                track_id=identity,
            )
        )
    return samples


def _right_closed_histogram(values, bins, lo, hi):
    """Uniform bins over [lo, hi], each closed on the right; the first bin
    keeps its left edge so both interval ends are counted."""
    counts, neg_edges = np.histogram(-values, bins=bins, range=(-hi, -lo))
    return counts[::-1].copy(), -neg_edges[::-1]


def direction_histogram(samples, bins: int = 18) -> Histogram:
    """Uniform histogram of mirrored angles over [-90, +90] degrees."""
    if bins < 1:
        raise ValueError("bins must be >= 1")
    angles = np.array([s.angle for s in samples], dtype=np.float64)
    counts, edges = _right_closed_histogram(angles, bins, -90.0, 90.0)
    return Histogram(edges, counts, _normalize(counts))


def magnitude_histogram(samples, bins: int = 20, max_magnitude: float = 50.0) -> Histogram:
    """Uniform histogram of speeds over [0, max_magnitude] pixels/frame.

    Values beyond the range are clamped into the last bin and reported via
    ``overflow``.
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    if max_magnitude <= 0:
        raise ValueError("max_magnitude must be > 0")
    mags = np.array([s.magnitude for s in samples], dtype=np.float64)
    overflow = int(np.count_nonzero(mags > max_magnitude))
    counts, edges = _right_closed_histogram(
        np.minimum(mags, max_magnitude), bins, 0.0, max_magnitude
    )
    return Histogram(edges, counts, _normalize(counts), overflow=overflow)


def _normalize(counts) -> np.ndarray | None:
    total = counts.sum()
    if total == 0:
        return None
    return counts / total
