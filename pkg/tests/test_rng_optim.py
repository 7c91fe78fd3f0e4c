import numpy as np
import pytest

from errors import ConfigError, UsageError
from tensor import OptimizerState, RngStream, optimizer_step, parameter, sample_standard_normal


def test_same_stream_same_draws():
    a = RngStream(42).spawn("seed", 3).generator().standard_normal(5)
    b = RngStream(42).spawn("seed", 3).generator().standard_normal(5)
    assert np.array_equal(a, b)


def test_paths_are_independent():
    root = RngStream(42)
    a = root.spawn("seed", 0).generator().standard_normal(5)
    assert not np.array_equal(a, root.spawn("seed", 1).generator().standard_normal(5))
    assert not np.array_equal(a, root.spawn("data", 0).generator().standard_normal(5))
    assert not np.array_equal(a, RngStream(43).spawn("seed", 0).generator().standard_normal(5))


def test_sibling_usage_does_not_shift_stream():
    root = RngStream(7)
    before = root.spawn("b", 0).generator().standard_normal(3)
    root.spawn("a", 0).generator().standard_normal(1000)
    assert np.array_equal(before, root.spawn("b", 0).generator().standard_normal(3))


def test_sample_standard_normal_shape():
    t = sample_standard_normal((2, 3), RngStream(1))
    assert t.shape == (2, 3)
    assert np.array_equal(t.data, sample_standard_normal((2, 3), RngStream(1)).data)


def test_stream_str():
    assert str(RngStream(5).spawn("seed", 2)) == "5:seed=2"
    assert str(RngStream(5)) == "5:-"


def test_sgd_step():
    p = parameter([1.0, 2.0])
    p.grad = np.array([0.5, -1.0])
    optimizer_step([p], OptimizerState("sgd", 0.1))
    assert np.allclose(p.data, [0.95, 2.1])


def test_sgd_weight_decay():
    p = parameter([2.0])
    p.grad = np.array([0.0])
    optimizer_step([p], OptimizerState("sgd", 0.5, weight_decay=0.1))
    assert np.allclose(p.data, [1.9])


def test_adam_first_step_is_signed_learning_rate():
    p = parameter([1.0, 1.0])
    p.grad = np.array([3.0, -0.01])
    state = OptimizerState("adam", 0.01)
    optimizer_step([p], state)
    # bias-corrected moments equal g and g², so the step is lr * g / (|g| + eps)
    expected = 1.0 - 0.01 * np.array([3.0, -0.01]) / (np.abs([3.0, -0.01]) + 1e-8)
    assert np.allclose(p.data, expected, atol=1e-12)
    assert state.step_count == 1


def test_adam_matches_reference_over_steps():
    rng = np.random.default_rng(0)
    p = parameter(rng.standard_normal(3))
    theta = p.data.copy()
    m = np.zeros(3)
    v = np.zeros(3)
    state = OptimizerState("adam", 0.05, weight_decay=0.01)
    for t in range(1, 6):
        g = rng.standard_normal(3)
        p.grad = g.copy()
        optimizer_step([p], state)
        g = g + 0.01 * theta
        m = 0.9 * m + 0.1 * g
        v = 0.999 * v + 0.001 * g * g
        theta = theta - 0.05 * (m / (1 - 0.9 ** t)) / (np.sqrt(v / (1 - 0.999 ** t)) + 1e-8)
    assert np.allclose(p.data, theta, atol=1e-12)


def test_missing_gradient():
    with pytest.raises(UsageError, match="no gradient"):
        optimizer_step([parameter([1.0])], OptimizerState("sgd", 0.1))


def test_invalid_optimizer_settings():
    with pytest.raises(ConfigError, match="training.optimizer"):
        OptimizerState("rmsprop", 0.1)
    with pytest.raises(ConfigError, match="training.learning_rate"):
        OptimizerState("sgd", -1.0)


def test_decay_mask_exempts_parameters():
    kept, decayed = parameter([2.0]), parameter([2.0])
    kept.grad = np.array([0.0])
    decayed.grad = np.array([0.0])
    optimizer_step([kept, decayed], OptimizerState("sgd", 0.5, weight_decay=0.1), [False, True])
    assert np.allclose(kept.data, [2.0])
    assert np.allclose(decayed.data, [1.9])


def test_adam_decay_mask_exempts_parameters():
    p = parameter([1.5, -0.5])
    p.grad = np.zeros(2)
    optimizer_step([p], OptimizerState("adam", 0.1, weight_decay=1.0), [False])
    assert np.allclose(p.data, [1.5, -0.5])


def test_decay_mask_length_checked():
    p = parameter([1.0])
    p.grad = np.array([0.0])
    with pytest.raises(UsageError, match="decay mask"):
        optimizer_step([p], OptimizerState("sgd", 0.1), [True, False])
