import numpy as np
import pytest

from shoaltrack import kalman
from shoaltrack.geometry import BoundingBox


def straight_line_stream(speed=(3.0, 4.0), size=(20.0, 12.0), start=(50.0, 40.0), frames=21):
    for t in range(frames):
        cx = start[0] + speed[0] * t
        cy = start[1] + speed[1] * t
        yield BoundingBox.from_center(cx, cy, size[0], size[1]), (cx, cy)


def test_init_centers_box_with_zero_velocity():
    state = kalman.init_state(BoundingBox(90, 95, 20, 10))
    assert np.array_equal(state.mean, [100, 100, 20, 10, 0, 0, 0, 0])


def test_init_is_deterministic():
    a = kalman.init_state(BoundingBox(1.5, 2.5, 7.0, 3.0))
    b = kalman.init_state(BoundingBox(1.5, 2.5, 7.0, 3.0))
    assert np.array_equal(a.mean, b.mean)
    assert np.array_equal(a.covariance, b.covariance)


def test_init_degenerate_box():
    state = kalman.init_state(BoundingBox(0, 0, 0, 0))
    assert np.array_equal(state.mean, np.zeros(8))
    assert np.all(np.isfinite(state.covariance))
    assert np.all(np.diag(state.covariance) > 0)


def test_predict_advances_by_velocity():
    state = kalman.init_state(BoundingBox.from_center(100, 100, 20, 10))
    mean = state.mean.copy()
    mean[4] = 5.0
    state = kalman.KalmanState(mean, state.covariance)
    predicted = kalman.predict(state)
    assert predicted.mean[0] == pytest.approx(105.0)
    assert predicted.mean[1] == pytest.approx(100.0)


def test_predict_keeps_position_at_zero_velocity():
    state = kalman.init_state(BoundingBox.from_center(33, 44, 10, 8))
    predicted = kalman.predict(state)
    assert np.array_equal(predicted.mean[:4], state.mean[:4])


def test_predict_inflates_covariance_trace():
    rng = np.random.default_rng(5)
    for _ in range(30):
        box = BoundingBox(*rng.uniform(0, 200, 2), *rng.uniform(1, 40, 2))
        state = kalman.init_state(box)
        for _ in range(3):
            nxt = kalman.predict(state)
            assert np.trace(nxt.covariance) > np.trace(state.covariance)
            state = nxt


def test_update_with_predicted_box_keeps_position():
    state = kalman.init_state(BoundingBox.from_center(10, 20, 8, 6))
    state = kalman.predict(state)
    posterior = kalman.update(state, state.box())
    assert np.allclose(posterior.mean[:2], state.mean[:2], atol=1e-9)


def test_one_step_ahead_error_on_noiseless_line():
    state = None
    errors = []
    for box, center in straight_line_stream():
        if state is None:
            state = kalman.init_state(box)
            continue
        state = kalman.predict(state)
        errors.append(float(np.hypot(state.mean[0] - center[0], state.mean[1] - center[1])))
        state = kalman.update(state, box)
    # frames 15..20 (1-based over the 20 predicted frames)
    assert max(errors[14:20]) < 0.01


def test_repeated_update_converges_and_is_monotone():
    target = BoundingBox(0, 0, 10, 10)
    state = kalman.predict(kalman.init_state(BoundingBox(40, 40, 30, 6)))
    params = np.array([5.0, 5.0, 10.0, 10.0])
    previous = np.inf
    for _ in range(300):
        state = kalman.update(state, target)
        distance = float(np.linalg.norm(state.mean[:4] - params))
        assert distance <= previous + 1e-12
        previous = distance
    # gain decays as evidence accumulates, so convergence is sub-geometric
    assert previous < 0.01


def test_symmetry_and_diagonal_preserved():
    rng = np.random.default_rng(17)
    for _ in range(20):
        state = kalman.init_state(BoundingBox(*rng.uniform(0, 100, 2), *rng.uniform(0, 30, 2)))
        for _ in range(10):
            state = kalman.predict(state)
            assert np.max(np.abs(state.covariance - state.covariance.T)) <= 1e-9
            meas = BoundingBox(*rng.uniform(0, 100, 2), *rng.uniform(0, 30, 2))
            state = kalman.update(state, meas)
            assert np.max(np.abs(state.covariance - state.covariance.T)) <= 1e-9
            assert np.min(np.diag(state.covariance)) >= 0
            assert np.all(np.isfinite(state.mean))
