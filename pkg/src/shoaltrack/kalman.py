"""Constant-velocity Kalman filter over bounding-box state.

State layout is (cx, cy, w, h, v_cx, v_cy, v_w, v_h) with direct width and
height rather than an aspect-ratio state: fish boxes change aspect quickly,
and one parameterization serves both tracker variants.  Time step is one
frame.
"""

from dataclasses import dataclass

import numpy as np

from .geometry import BoundingBox

# SORT-family noise scales relative to box height, with a floor so that
# degenerate (zero-size) boxes still produce a positive-definite covariance.
STD_POSITION = 1.0 / 20
STD_VELOCITY = 1.0 / 160
STD_MEASUREMENT = 1.0 / 20
STD_FLOOR = 1e-2

_DIM = 8
_TRANSITION = np.eye(_DIM)
for _i in range(4):
    _TRANSITION[_i, _i + 4] = 1.0
_OBSERVATION = np.eye(4, _DIM)


@dataclass(frozen=True)
class KalmanState:
    mean: np.ndarray
    covariance: np.ndarray

    def box(self) -> BoundingBox:
        cx, cy, w, h = self.mean[:4]
        return BoundingBox.from_center(cx, cy, max(w, 0.0), max(h, 0.0))


def _box_measurement(box: BoundingBox) -> np.ndarray:
    cx, cy = box.center
    return np.array([cx, cy, box.width, box.height], dtype=np.float64)


def init_state(box: BoundingBox) -> KalmanState:
    """Start a track from a detection: zero velocity, height-scaled spread.

    The velocity prior is deliberately wide (std = one box height per
    frame) so that the first observed displacement pins the velocity;
    fish routinely move a body length between frames.
    """
    z = _box_measurement(box)
    mean = np.zeros(_DIM)
    mean[:4] = z
    h = z[3]
    std_pos = max(2 * STD_POSITION * h, STD_FLOOR)
    std_vel = max(h, STD_FLOOR)
    std = np.array([std_pos] * 4 + [std_vel] * 4)
    return KalmanState(mean, np.diag(std**2))


def predict(state: KalmanState) -> KalmanState:
    """Advance one frame under constant velocity, inflating uncertainty."""
    h = state.mean[3]
    std_pos = max(STD_POSITION * h, STD_FLOOR)
    std_vel = max(STD_VELOCITY * h, STD_FLOOR)
    process_noise = np.diag(np.array([std_pos] * 4 + [std_vel] * 4) ** 2)
    mean = _TRANSITION @ state.mean
    cov = _TRANSITION @ state.covariance @ _TRANSITION.T + process_noise
    cov = (cov + cov.T) / 2.0
    return KalmanState(mean, cov)


def update(state: KalmanState, measurement: BoundingBox) -> KalmanState:
    """Correct the state with a measured box (Joseph-form covariance update)."""
    z = _box_measurement(measurement)
    h = state.mean[3]
    std_meas = max(STD_MEASUREMENT * h, STD_FLOOR)
    meas_noise = np.eye(4) * std_meas**2

    projected = state.mean[:4]
    innovation_cov = state.covariance[:4, :4] + meas_noise
    gain = np.linalg.solve(innovation_cov, state.covariance[:4, :]).T
    mean = state.mean + gain @ (z - projected)
    identity_kh = np.eye(_DIM) - gain @ _OBSERVATION
    cov = identity_kh @ state.covariance @ identity_kh.T + gain @ meas_noise @ gain.T
    cov = (cov + cov.T) / 2.0
    return KalmanState(mean, cov)
