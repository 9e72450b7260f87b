"""Deterministic synthetic shoal generator and detection corruptor.

Ground-truth tracks drive oracle tests for the tracker, the metrics and the
locomotion analytics without needing recorded video.  Randomness comes from
numpy's PCG64 generator; each fish gets its own stream via
``SeedSequence(seed, spawn_key=(fish_index,))`` so outputs are reproducible
bit-for-bit and independent of fish count changes elsewhere.
"""

import math
from dataclasses import dataclass

import numpy as np

from .geometry import BoundingBox
from .io import AnnotatedBox, SequenceAnnotations

_CORRUPT_STREAM_KEY = 0xC0FFEE


@dataclass(frozen=True)
class ShoalScenario:
    seed: int
    fish_count: int = 20
    frames: int = 200
    tank: tuple = (1600.0, 1200.0)
    speed_range: tuple = (2.0, 6.0)
    heading_noise_sigma: float = 3.0
    turn_probability: float = 0.02
    box_size_range: tuple = (18.0, 30.0)
    initial_heading_deg: float | None = None

    def __post_init__(self):
        if self.fish_count < 1 or self.frames < 1:
            raise ValueError("fish_count and frames must be positive")
        if self.tank[0] <= 0 or self.tank[1] <= 0:
            raise ValueError(f"tank must have positive area, got {self.tank}")
        if not 0.0 <= self.turn_probability <= 1.0:
            raise ValueError("turn_probability must be in [0, 1]")
        if self.heading_noise_sigma < 0:
            raise ValueError("heading_noise_sigma must be >= 0")
        if self.box_size_range[1] >= min(self.tank):
            raise ValueError("boxes must fit inside the tank")


@dataclass(frozen=True)
class CorruptionModel:
    miss_rate: float = 0.0
    fp_rate_per_frame: float = 0.0
    jitter_sigma: float = 0.0
    score_model: tuple = (1.0, 0.5, 0.0)  # (tp_mean, fp_mean, sigma)

    def __post_init__(self):
        if not 0.0 <= self.miss_rate <= 1.0:
            raise ValueError("miss_rate must be in [0, 1]")
        if self.fp_rate_per_frame < 0 or self.jitter_sigma < 0:
            raise ValueError("rates and sigmas must be >= 0")
        if self.score_model[2] < 0:
            raise ValueError("score sigma must be >= 0")


def generate(scenario: ShoalScenario) -> SequenceAnnotations:
    """Simulate the shoal and return its ground-truth annotations.

    Fish follow a per-frame heading with Gaussian heading noise and
    occasional uniform re-orientation, reflecting specularly off the tank
    walls; boxes always stay inside the tank.
    """
    tank_w, tank_h = float(scenario.tank[0]), float(scenario.tank[1])
    ann = SequenceAnnotations(name=f"synth-{scenario.seed}", image_size=(tank_w, tank_h))
    for fish in range(scenario.fish_count):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=scenario.seed, spawn_key=(fish,))
        )
        bw = rng.uniform(*scenario.box_size_range)
        bh = rng.uniform(*scenario.box_size_range)
        speed = rng.uniform(*scenario.speed_range)
        xmin, xmax = bw / 2.0, tank_w - bw / 2.0
        ymin, ymax = bh / 2.0, tank_h - bh / 2.0
        x = rng.uniform(xmin, xmax)
        y = rng.uniform(ymin, ymax)
        if scenario.initial_heading_deg is None:
            heading = rng.uniform(0.0, 360.0)
        else:
            heading = scenario.initial_heading_deg
        vx = speed * math.cos(math.radians(heading))
        vy = speed * math.sin(math.radians(heading))

        for frame in range(1, scenario.frames + 1):
            ann.add(frame, fish + 1, BoundingBox.from_center(x, y, bw, bh))
            turned = rng.uniform() < scenario.turn_probability
            if turned:
                heading = rng.uniform(0.0, 360.0)
            noise = rng.normal(0.0, scenario.heading_noise_sigma)
            if turned or noise != 0.0:
                if not turned:
                    # reflections update the velocity vector directly, so
                    # resync the heading before applying noise
                    heading = math.degrees(math.atan2(vy, vx))
                heading += noise
                vx = speed * math.cos(math.radians(heading))
                vy = speed * math.sin(math.radians(heading))
            x += vx
            y += vy
            for _ in range(8):
                if xmin <= x <= xmax and ymin <= y <= ymax:
                    break
                if x < xmin:
                    x = 2.0 * xmin - x
                    vx = -vx
                elif x > xmax:
                    x = 2.0 * xmax - x
                    vx = -vx
                if y < ymin:
                    y = 2.0 * ymin - y
                    vy = -vy
                elif y > ymax:
                    y = 2.0 * ymax - y
                    vy = -vy
            x = min(max(x, xmin), xmax)
            y = min(max(y, ymin), ymax)
    return ann


def corrupt(gt: SequenceAnnotations, model: CorruptionModel, seed: int) -> SequenceAnnotations:
    """Derive a scored detection stream from ground truth.

    Each box is dropped independently with ``miss_rate``, survivors get
    Gaussian jitter on all four box parameters, and Poisson-many false
    positives per frame are placed uniformly in the tank.  Detections carry
    no identity.
    """
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(_CORRUPT_STREAM_KEY,))
    )
    tp_mean, fp_mean, score_sigma = model.score_model

    if gt.image_size is not None:
        tank_w, tank_h = gt.image_size
    else:
        boxes = [e.box for entries in gt.frames.values() for e in entries]
        tank_w = max((b.right for b in boxes), default=100.0)
        tank_h = max((b.bottom for b in boxes), default=100.0)
    all_boxes = [e.box for entries in gt.frames.values() for e in entries]
    if all_boxes:
        fp_w = float(np.mean([b.width for b in all_boxes]))
        fp_h = float(np.mean([b.height for b in all_boxes]))
    else:
        fp_w = fp_h = 10.0

    dets = SequenceAnnotations(name=gt.name, image_size=gt.image_size)
    for frame in sorted(gt.frames):
        for entry in gt.frames[frame]:
            if rng.uniform() < model.miss_rate:
                continue
            jitter = rng.normal(0.0, model.jitter_sigma, size=4)
            b = entry.box
            box = BoundingBox(
                b.left + jitter[0],
                b.top + jitter[1],
                max(b.width + jitter[2], 0.0),
                max(b.height + jitter[3], 0.0),
            )
            score = float(np.clip(rng.normal(tp_mean, score_sigma), 0.0, 1.0))
            dets.frames.setdefault(frame, []).append(AnnotatedBox(None, box, score))
        for _ in range(rng.poisson(model.fp_rate_per_frame)):
            cx = rng.uniform(0.0, tank_w)
            cy = rng.uniform(0.0, tank_h)
            score = float(np.clip(rng.normal(fp_mean, score_sigma), 0.0, 1.0))
            box = BoundingBox.from_center(cx, cy, fp_w, fp_h)
            dets.frames.setdefault(frame, []).append(AnnotatedBox(None, box, score))
    return dets
