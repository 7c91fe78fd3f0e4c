import math

import numpy as np
import pytest
from scipy.special import log_softmax as scipy_log_softmax

from data import RegressionDataset
from errors import TrainingError, UsageError
from models import (
    EMPTY_INDEX,
    Architecture,
    EnsembleModel,
    MethodConfig,
    TrainingConfig,
    build_model,
    fit,
    predictive_moments,
    train,
    train_ensemble,
)
from models.architecture import dense
from models.network import DeterministicModel, init_deterministic
from models.training import data_loss
from tensor import OptimizerState, RngStream, Tensor


def test_mse_loss():
    out = Tensor([[1.0], [3.0]])
    assert data_loss(out, np.array([0.0, 1.0]), "mse").item() == pytest.approx(2.5)


def test_gaussian_nll_loss():
    out = Tensor([[0.5, math.log(2.0)]])
    expected = 0.5 * (math.log(2.0) + (1.5 - 0.5) ** 2 / 2.0)
    assert data_loss(out, np.array([1.5]), "gaussian_nll").item() == pytest.approx(expected)


def test_cross_entropy_loss():
    logits = np.array([[1.0, 2.0, 0.5], [0.1, -1.0, 3.0]])
    labels = np.array([1, 2])
    expected = -np.mean(scipy_log_softmax(logits, axis=1)[[0, 1], labels])
    assert data_loss(Tensor(logits), labels, "cross_entropy").item() == pytest.approx(expected)


def test_cross_entropy_needs_logit_matrix():
    with pytest.raises(UsageError):
        data_loss(Tensor([[0.3]]), np.array([0]), "cross_entropy")


def linear_data():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((50, 2))
    return RegressionDataset(X, X @ np.array([1.5, -2.0]) + 0.5)


def test_linear_regression_reaches_normal_equations():
    data = linear_data()
    arch = Architecture("linear", (2,), (dense(1),))
    model = build_model(arch, MethodConfig("deterministic"), np.random.default_rng(1))
    train(model, data, "mse", OptimizerState("sgd", 0.1), epochs=500, batch_size=50, rng=np.random.default_rng(2))

    A = np.hstack([data.inputs, np.ones((50, 1))])
    solution = np.linalg.lstsq(A, data.targets, rcond=None)[0]
    W, b = (t.data for t in model.parameters())
    assert np.allclose(W.ravel(), solution[:2], atol=1e-6)
    assert b[0] == pytest.approx(solution[2], abs=1e-6)


def test_zero_learning_rate_keeps_parameters():
    data = linear_data()
    model = build_model(Architecture("linear", (2,), (dense(1),)), MethodConfig("deterministic"), np.random.default_rng(1))
    before = [t.data.copy() for t in model.parameters()]
    trace = train(model, data, "mse", OptimizerState("adam", 0.0), epochs=3, batch_size=10, rng=np.random.default_rng(2))
    assert all(np.array_equal(a, t.data) for a, t in zip(before, model.parameters()))
    assert len(trace.epoch_losses) == 3
    assert trace.steps == 15


def test_xor_is_learned():
    X = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
    data = RegressionDataset(X, np.array([0.0, 1.0, 1.0, 0.0]))
    arch = Architecture("xor", (2,), (dense(16, "tanh"), dense(1)))
    model = build_model(arch, MethodConfig("deterministic"), np.random.default_rng(3))
    trace = train(model, data, "mse", OptimizerState("adam", 0.05), epochs=2000, batch_size=4, rng=np.random.default_rng(4))

    assert trace.final_loss < 0.01
    predictions = model.forward(X, model.draw_index(np.random.default_rng(5), 4)).data.ravel()
    assert np.array_equal(predictions > 0.5, [False, True, True, False])


def test_bbb_training_lowers_loss():
    data = linear_data()
    arch = Architecture("linear", (2,), (dense(8, "relu"), dense(1)))
    model, trace = fit(
        MethodConfig("bbb"),
        arch,
        data,
        TrainingConfig(optimizer="adam", learning_rate=0.01, epochs=60, batch_size=10),
        RngStream(0),
    )
    assert trace.epoch_losses[-1] < trace.epoch_losses[0]


def test_vnn_gaussian_nll_training_runs():
    data = linear_data()
    arch = Architecture("nll", (2,), (dense(8, "relu"), dense(2)))
    model, trace = fit(
        MethodConfig("vnn"),
        arch,
        data,
        TrainingConfig(loss="gaussian_nll", learning_rate=0.01, epochs=20, batch_size=10),
        RngStream(1),
    )
    assert all(math.isfinite(v) for v in trace.epoch_losses)
    assert trace.epoch_losses[-1] < trace.epoch_losses[0]


def test_fit_ensemble_trains_each_member():
    data = linear_data()
    arch = Architecture("linear", (2,), (dense(1),))
    model, trace = fit(
        MethodConfig("ensemble", ensemble_size=3),
        arch,
        data,
        TrainingConfig(epochs=2, batch_size=10),
        RngStream(2),
    )
    assert isinstance(model, EnsembleModel)
    assert trace is None
    assert len(model.members) == 3
    first = [m.parameters()[0].data for m in model.members]
    assert not np.array_equal(first[0], first[1])


def test_train_rejects_ensemble():
    model = build_model(Architecture("linear", (2,), (dense(1),)), MethodConfig("ensemble", ensemble_size=2), np.random.default_rng(0))
    with pytest.raises(UsageError, match="train_ensemble"):
        train(model, linear_data(), "mse", OptimizerState("sgd", 0.1), 1, 10, np.random.default_rng(0))


def test_divergence_raises_training_error():
    data = RegressionDataset(np.full((8, 1), 100.0), np.full(8, 1e6))
    model = build_model(Architecture("linear", (1,), (dense(1),)), MethodConfig("deterministic"), np.random.default_rng(0))
    with np.errstate(all="ignore"), pytest.raises(TrainingError) as info:
        train(model, data, "mse", OptimizerState("sgd", 1e6), epochs=200, batch_size=8, rng=np.random.default_rng(0))
    assert info.value.trace is not None


def test_fit_is_deterministic():
    data = linear_data()
    arch = Architecture("linear", (2,), (dense(4, "relu"), dense(1)))
    cfg = TrainingConfig(epochs=3, batch_size=10)
    a, _ = fit(MethodConfig("mcd"), arch, data, cfg, RngStream(9))
    b, _ = fit(MethodConfig("mcd"), arch, data, cfg, RngStream(9))
    assert all(np.array_equal(p.data, q.data) for p, q in zip(a.parameters(), b.parameters()))


def test_members_trained_from_one_seed_agree():
    data = linear_data()
    arch = Architecture("linear", (2,), (dense(4, "relu"), dense(1)))
    members = []
    for _ in range(3):
        rng = np.random.default_rng(7)
        member = DeterministicModel(arch, init_deterministic(arch, rng))
        train(member, data, "mse", OptimizerState("adam", 0.01), epochs=3, batch_size=10, rng=rng)
        members.append(member)
    summary = predictive_moments(EnsembleModel(members), data.inputs[:5])
    assert np.max(summary.variance) <= 1e-24


def test_train_ensemble_is_reproducible():
    data = linear_data()
    arch = Architecture("linear", (2,), (dense(4, "relu"), dense(1)))
    cfg = TrainingConfig(epochs=2, batch_size=10)
    method = MethodConfig("ensemble", ensemble_size=2)
    a = train_ensemble(method, arch, data, cfg, RngStream(3))
    b = train_ensemble(method, arch, data, cfg, RngStream(3))
    assert all(np.array_equal(p.data, q.data) for p, q in zip(a.parameters(), b.parameters()))


def test_single_member_ensemble_matches_its_member():
    data = linear_data()
    arch = Architecture("linear", (2,), (dense(4, "relu"), dense(1)))
    cfg = TrainingConfig(epochs=3, batch_size=10)
    stream = RngStream(4)
    model, _ = fit(MethodConfig("ensemble", ensemble_size=1), arch, data, cfg, stream)

    rng = stream.spawn("member", 0).generator()
    single = DeterministicModel(arch, init_deterministic(arch, rng))
    train(single, data, cfg.loss, cfg.make_optimizer(), cfg.epochs, cfg.batch_size, rng)

    summary = predictive_moments(model, data.inputs)
    assert summary.sample_count == 1
    assert np.array_equal(summary.mean, single.forward(data.inputs, EMPTY_INDEX).data)
    assert np.all(summary.variance == 0.0)
