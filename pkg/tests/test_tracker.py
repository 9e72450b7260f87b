import pytest

from shoaltrack.geometry import BoundingBox
from shoaltrack.io import write_mot
from shoaltrack.metrics import compute_tracking_metrics
from shoaltrack.synth import CorruptionModel, ShoalScenario, corrupt, generate
from shoaltrack.tracker import (
    Detection,
    Tracker,
    TrackerConfig,
    TrackStatus,
    run_sequence,
)


def det(frame, left, top, w=10.0, h=10.0, score=1.0):
    return Detection(BoundingBox(left, top, w, h), score, frame)


def test_first_detection_spawns_tentative_track_with_id_one():
    tracker = Tracker()
    emitted = tracker.step([det(1, 0, 0, score=0.9)])
    assert [tid for tid, _, _ in emitted] == [1]
    assert tracker.tracks[0].status is TrackStatus.TENTATIVE


def test_scores_out_of_range_rejected():
    with pytest.raises(ValueError):
        det(1, 0, 0, score=1.5)


def test_mixed_frame_indices_rejected():
    tracker = Tracker()
    with pytest.raises(ValueError):
        tracker.step([det(1, 0, 0), det(2, 50, 50)])


def test_frames_must_advance():
    tracker = Tracker()
    tracker.step([det(3, 0, 0)])
    with pytest.raises(ValueError):
        tracker.step([det(3, 1, 0)])


def test_two_stage_association_hand_trace():
    # one established track drifting right at 2 px/frame
    tracker = Tracker(TrackerConfig(high_thresh=0.5, low_thresh=0.1, new_track_thresh=0.5))
    tracker.step([det(1, 0, 0, score=0.8)])
    tracker.step([det(2, 2, 0, score=0.8)])
    assert tracker.tracks[0].status is TrackStatus.ACTIVE
    # frame 3: D1 overlaps the prediction at IoU ~0.9 (high score), D2 is far
    # away with a low score: D1 matches stage 1, D2 overlaps no remaining
    # track so stage 2 drops it, and it is too weak to spawn
    emitted = tracker.step([det(3, 4.5, 0, score=0.8), det(3, 200, 200, score=0.15)])
    assert len(emitted) == 1
    assert emitted[0][0] == 1
    assert len(tracker.tracks) == 1  # low score never spawns a track


def test_low_score_detection_keeps_track_alive_via_stage_two():
    tracker = Tracker(TrackerConfig(high_thresh=0.5, low_thresh=0.1, new_track_thresh=0.5))
    tracker.step([det(1, 0, 0)])
    tracker.step([det(2, 2, 0)])
    emitted = tracker.step([det(3, 4, 0, score=0.2)])  # low-score continuation
    assert [tid for tid, _, _ in emitted] == [1]
    track = tracker.tracks[0]
    assert track.status is TrackStatus.ACTIVE
    assert track.frames_since_update == 0


def test_stage_two_never_uses_sub_low_scores():
    tracker = Tracker(TrackerConfig(high_thresh=0.5, low_thresh=0.1, new_track_thresh=0.5))
    tracker.step([det(1, 0, 0)])
    tracker.step([det(2, 2, 0)])
    tracker.step([det(3, 4, 0, score=0.05)])  # below low_thresh: invisible
    assert tracker.tracks[0].status is TrackStatus.LOST


def test_track_removed_after_buffer_and_never_reemitted():
    tracker = Tracker(TrackerConfig(track_buffer=3))
    tracker.step([det(1, 0, 0)])
    tracker.step([det(2, 2, 0)])
    for frame in range(3, 7):
        assert tracker.step([], frame=frame) == []
    assert tracker.tracks == []
    assert tracker.removed_tracks[0].status is TrackStatus.REMOVED
    # a detection at the old location now opens a fresh identity
    emitted = tracker.step([det(7, 8, 0)])
    assert emitted[0][0] == 2


def test_lost_track_reactivates_in_stage_one():
    tracker = Tracker(TrackerConfig(track_buffer=10))
    tracker.step([det(1, 0, 0)])
    tracker.step([det(2, 2, 0)])
    tracker.step([], frame=3)
    assert tracker.tracks[0].status is TrackStatus.LOST
    emitted = tracker.step([det(4, 8, 0)])
    assert emitted[0][0] == 1
    assert tracker.tracks[0].status is TrackStatus.ACTIVE


def test_ids_monotone_and_never_reused():
    tracker = Tracker(TrackerConfig(track_buffer=1))
    seen = set()
    for frame in range(1, 20):
        # two short-lived detections per frame at alternating spots
        offset = 100 * (frame % 3)
        emitted = tracker.step([det(frame, offset, 0), det(frame, offset, 300)])
        for tid, _, _ in emitted:
            seen.add(tid)
    ids = sorted(seen)
    assert ids == list(range(1, len(ids) + 1))


def test_single_fish_run_sequence_full_length():
    dets = {f: [det(f, 5.0 * f, 0.0)] for f in range(1, 11)}
    ann = run_sequence(dets)
    assert ann.identities() == [1]
    assert len(ann.track_of(1)) == 10


def test_empty_sequence():
    ann = run_sequence({})
    assert ann.frames == {}


def test_gap_frames_run_predict_only():
    dets = {1: [det(1, 0, 0)], 2: [det(2, 5, 0)], 5: [det(5, 20, 0)]}
    ann = run_sequence(dets, TrackerConfig(track_buffer=10))
    assert ann.identities() == [1]
    assert [f for f, _ in ann.track_of(1)] == [1, 2, 5]


def test_emitted_boxes_are_detection_boxes():
    dets = {f: [det(f, 3.0 * f, 7.0)] for f in range(1, 8)}
    ann = run_sequence(dets)
    for frame, entries in ann.frames.items():
        assert entries[0].box == dets[frame][0].box


def test_run_sequence_is_deterministic():
    gt = generate(ShoalScenario(seed=21, fish_count=12, frames=80))
    dets = corrupt(gt, CorruptionModel(miss_rate=0.1, jitter_sigma=1.0, fp_rate_per_frame=0.5,
                                       score_model=(0.9, 0.3, 0.05)), seed=21)
    a = write_mot(run_sequence(dets, TrackerConfig()), "tracks")
    b = write_mot(run_sequence(dets, TrackerConfig()), "tracks")
    assert a == b


def test_variants_agree_on_perfect_detections():
    gt = generate(ShoalScenario(seed=33, fish_count=15, frames=100))
    dets = corrupt(gt, CorruptionModel(), seed=33)  # scores all exactly 1.0
    byte = write_mot(run_sequence(dets, TrackerConfig(variant="bytetrack")), "tracks")
    bot = write_mot(run_sequence(dets, TrackerConfig(variant="botsort")), "tracks")
    assert byte == bot


def test_gt_detections_cover_every_identity():
    gt = generate(ShoalScenario(seed=42, fish_count=20, frames=200))
    dets = corrupt(gt, CorruptionModel(), seed=42)
    tracks = run_sequence(dets, TrackerConfig())
    result = compute_tracking_metrics(gt, tracks)
    assert result.mota >= 0.99
    assert result.fn == 0 and result.fp == 0


def test_occlusion_free_scene_gives_one_track_per_identity():
    import numpy as np

    from shoaltrack.geometry import boxes_to_array, pairwise_iou

    scenario = ShoalScenario(
        seed=8,
        fish_count=20,
        frames=200,
        tank=(4000.0, 3000.0),
        speed_range=(2.0, 5.0),
        heading_noise_sigma=2.0,
        turn_probability=0.01,
        box_size_range=(18.0, 26.0),
    )
    gt = generate(scenario)
    # verified precondition: no two fish boxes ever overlap in this scene
    for entries in gt.frames.values():
        arr = boxes_to_array([e.box for e in entries])
        cross = pairwise_iou(arr, arr)
        np.fill_diagonal(cross, 0.0)
        assert cross.max() == 0.0
    tracks = run_sequence(corrupt(gt, CorruptionModel(), seed=8), TrackerConfig())
    # emitted boxes equal the GT boxes, so exact coordinates identify the fish
    owner_of = {}
    for frame, entries in tracks.frames.items():
        gt_lookup = {
            (e.box.left, e.box.top, e.box.width, e.box.height): e.identity
            for e in gt.frames[frame]
        }
        for e in entries:
            key = (e.box.left, e.box.top, e.box.width, e.box.height)
            owner_of.setdefault(gt_lookup[key], set()).add(e.identity)
    assert len(owner_of) == 20
    assert all(len(track_ids) == 1 for track_ids in owner_of.values())


def test_config_validation():
    with pytest.raises(ValueError):
        TrackerConfig(high_thresh=0.1, low_thresh=0.5)
    with pytest.raises(ValueError):
        TrackerConfig(track_buffer=0)
    with pytest.raises(ValueError):
        TrackerConfig(variant="deepsort")
