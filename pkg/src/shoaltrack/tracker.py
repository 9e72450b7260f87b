"""Two-stage tracking-by-detection association engine.

High-confidence detections are matched to predicted tracks first; the
low-confidence remainder gets a second chance against still-unmatched
active tracks instead of being discarded.  Both supported variants share
the same constant-velocity Kalman motion model; ``bytetrack`` fuses the
detection score into the stage-1 similarity while ``botsort`` runs here as
a lite variant (static camera, no appearance re-identification), which
leaves score fusion off.
"""

import enum
from dataclasses import dataclass, field

from . import kalman
from .geometry import BoundingBox, assign_max_weight, boxes_to_array, pairwise_iou
from .io import SequenceAnnotations

VARIANTS = ("bytetrack", "botsort")

# stage gates in IoU-distance space, as in the reference two-stage scheme
SECOND_STAGE_DISTANCE = 0.5
TENTATIVE_STAGE_DISTANCE = 0.7


class TrackStatus(enum.Enum):
    TENTATIVE = "tentative"
    ACTIVE = "active"
    LOST = "lost"
    REMOVED = "removed"


@dataclass(frozen=True)
class Detection:
    box: BoundingBox
    score: float
    frame: int

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score must be in [0, 1], got {self.score}")
        if self.frame < 0:
            raise ValueError(f"frame must be non-negative, got {self.frame}")


@dataclass(frozen=True)
class TrackerConfig:
    """Association thresholds; defaults follow the common toolchain values."""

    high_thresh: float = 0.25
    low_thresh: float = 0.1
    new_track_thresh: float = 0.25
    match_thresh: float = 0.8
    track_buffer: int = 30
    variant: str = "bytetrack"
    fuse_score: bool | None = None

    def __post_init__(self):
        if not 0.0 <= self.low_thresh <= self.high_thresh <= 1.0:
            raise ValueError("need 0 <= low_thresh <= high_thresh <= 1")
        if self.track_buffer < 1:
            raise ValueError("track_buffer must be >= 1")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")

    @property
    def fuse(self) -> bool:
        if self.fuse_score is None:
            return self.variant == "bytetrack"
        return self.fuse_score


@dataclass
class Track:
    """One identity: Kalman state plus lifecycle bookkeeping."""

    id: int
    state: kalman.KalmanState
    status: TrackStatus
    last_frame: int
    frames_since_update: int = 0
    score: float = 1.0
    history: list = field(default_factory=list)

    def predicted_box(self) -> BoundingBox:
        return self.state.box()


class Tracker:
    """Single-sequence stateful tracker; feed frames in ascending order."""

    def __init__(self, config: TrackerConfig | None = None):
        self.config = config or TrackerConfig()
        self.tracks: list[Track] = []
        self.removed_tracks: list[Track] = []
        self._next_id = 1
        self._frame = 0

    def step(self, detections, frame: int | None = None):
        """Process one frame of detections.

        Returns the boxes emitted for this frame as ``(track_id, box,
        score)`` tuples.  An empty detection list with an explicit frame
        index runs prediction only.
        """
        cfg = self.config
        if frame is None:
            if not detections:
                raise ValueError("empty detection list needs an explicit frame index")
            frame = detections[0].frame
        if any(d.frame != frame for d in detections):
            raise ValueError(f"mixed frame indices in one step (expected {frame})")
        if frame <= self._frame:
            raise ValueError(f"frame {frame} does not advance past {self._frame}")
        self._frame = frame

        for track in self.tracks:
            track.state = kalman.predict(track.state)

        high = [d for d in detections if d.score >= cfg.high_thresh]
        low = [d for d in detections if cfg.low_thresh <= d.score < cfg.high_thresh]
        updated: list[tuple[Track, Detection]] = []

        # stage 1: confirmed tracks (active + lost, for re-activation)
        # against high-confidence detections
        pool = [t for t in self.tracks if t.status in (TrackStatus.ACTIVE, TrackStatus.LOST)]
        unmatched_high = list(range(len(high)))
        unmatched_pool = list(range(len(pool)))
        pairs = self._match(pool, high, 1.0 - cfg.match_thresh, fuse=cfg.fuse)
        for ti, di in pairs:
            self._update_track(pool[ti], high[di], frame)
            updated.append((pool[ti], high[di]))
            unmatched_pool.remove(ti)
            unmatched_high.remove(di)

        # stage 2: remaining active tracks against low-confidence detections
        remaining = [pool[i] for i in unmatched_pool if pool[i].status == TrackStatus.ACTIVE]
        pairs = self._match(remaining, low, SECOND_STAGE_DISTANCE, fuse=False)
        for ti, di in pairs:
            self._update_track(remaining[ti], low[di], frame)
            updated.append((remaining[ti], low[di]))

        # unconfirmed tracks get the leftover high detections
        tentative = [t for t in self.tracks if t.status == TrackStatus.TENTATIVE]
        leftover = [high[i] for i in unmatched_high]
        pairs = self._match(tentative, leftover, 1.0 - TENTATIVE_STAGE_DISTANCE, fuse=cfg.fuse)
        spawned_from = set()
        for ti, di in pairs:
            self._update_track(tentative[ti], leftover[di], frame)
            updated.append((tentative[ti], leftover[di]))
            spawned_from.add(di)

        # unmatched high detections above the spawn threshold open new tracks
        for di, det in enumerate(leftover):
            if di in spawned_from or det.score < cfg.new_track_thresh:
                continue
            track = Track(
                id=self._next_id,
                state=kalman.init_state(det.box),
                status=TrackStatus.TENTATIVE,
                last_frame=frame,
                score=det.score,
                history=[(frame, det.box)],
            )
            self._next_id += 1
            self.tracks.append(track)
            updated.append((track, det))

        # lifecycle: unmatched tracks age, then drop out of the buffer
        updated_ids = {t.id for t, _ in updated}
        survivors = []
        for track in self.tracks:
            if track.id not in updated_ids:
                track.frames_since_update += 1
                if track.status == TrackStatus.ACTIVE:
                    track.status = TrackStatus.LOST
                if track.frames_since_update > cfg.track_buffer:
                    track.status = TrackStatus.REMOVED
                    self.removed_tracks.append(track)
                    continue
            survivors.append(track)
        self.tracks = survivors

        emitted = [
            (track.id, det.box, det.score)
            for track, det in sorted(updated, key=lambda pair: pair[0].id)
        ]
        return emitted

    def _match(self, tracks, detections, min_weight, fuse):
        if not tracks or not detections:
            return []
        weights = pairwise_iou(
            boxes_to_array([t.predicted_box() for t in tracks]),
            boxes_to_array([d.box for d in detections]),
        )
        if fuse:
            for di, det in enumerate(detections):
                weights[:, di] *= det.score
        return assign_max_weight(weights, min_weight).pairs

    def _update_track(self, track: Track, det: Detection, frame: int):
        track.state = kalman.update(track.state, det.box)
        if track.status in (TrackStatus.TENTATIVE, TrackStatus.LOST):
            track.status = TrackStatus.ACTIVE
        track.frames_since_update = 0
        track.last_frame = frame
        track.score = det.score
        track.history.append((frame, det.box))


def detections_from_annotations(ann: SequenceAnnotations) -> dict:
    """Per-frame Detection lists from a detections-kind annotation set."""
    out: dict[int, list[Detection]] = {}
    for frame in ann.frame_ids():
        out[frame] = [Detection(e.box, e.score, frame) for e in ann.frames[frame]]
    return out


def run_sequence(detections_by_frame, config: TrackerConfig | None = None) -> SequenceAnnotations:
    """Track a whole detection stream and return identity-labelled boxes.

    Accepts either a detections-kind ``SequenceAnnotations`` or a mapping
    of frame index to ``Detection`` lists.  Frames missing from the input
    range run prediction only, so the track buffer keeps counting in frame
    units.  Output is a pure function of input and configuration.
    """
    if isinstance(detections_by_frame, SequenceAnnotations):
        detections_by_frame = detections_from_annotations(detections_by_frame)
    tracker = Tracker(config)
    result = SequenceAnnotations()
    if not detections_by_frame:
        return result
    first, last = min(detections_by_frame), max(detections_by_frame)
    for frame in range(first, last + 1):
        emitted = tracker.step(detections_by_frame.get(frame, []), frame=frame)
        for track_id, box, score in emitted:
            result.add(frame, track_id, box, score)
    return result
