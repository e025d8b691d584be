import math

import numpy as np
import pytest

from lexforge import nn
from lexforge.stats import transform

from oracles import mlp_forward_loops


def _random_params(rng, head):
    p = nn.MlpParams.init(head, int(rng.integers(1 << 30)))
    p.W1 = rng.normal(size=p.W1.shape)
    p.b1 = rng.normal(size=p.b1.shape)
    p.W2 = rng.normal(size=p.W2.shape)
    p.b2 = rng.normal(size=p.b2.shape)
    p.log_theta = rng.normal(scale=0.5, size=5)
    return p


def _random_raw(rng, n):
    counts = rng.integers(0, 30, size=(n, 5)).astype(float)
    sims = rng.uniform(-1, 1, size=(n, 2))
    return np.hstack([counts, sims])


def test_forward_binary_examples():
    p = nn.MlpParams.zeros("binary")
    assert nn.forward_binary(p, np.ones(7)) == 0.5
    p.b2[:] = 10
    assert nn.forward_binary(p, np.ones(7)) > 0.9999
    with pytest.raises(ValueError):
        nn.forward_binary(p, np.array([np.nan] + [0.0] * 6))
    with pytest.raises(ValueError):
        nn.forward_binary(p, np.ones(6))


def test_forward_ternary_examples():
    p = nn.MlpParams.zeros("ternary")
    assert np.allclose(nn.forward_ternary(p, np.ones(7)), 1 / 3)
    p.b2[:] = [10, 0, 0]
    assert nn.forward_ternary(p, np.ones(7))[0] > 0.9999


@pytest.mark.parametrize("seed", range(5))
def test_forward_matches_loops(seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=7)
    pb, pt = _random_params(rng, "binary"), _random_params(rng, "ternary")
    (g,) = mlp_forward_loops(pb.W1.tolist(), pb.b1.tolist(), pb.W2.tolist(), pb.b2.tolist(), x.tolist())
    assert nn.forward_binary(pb, x) == pytest.approx(1 / (1 + math.exp(-g)), abs=1e-12)
    gs = mlp_forward_loops(pt.W1.tolist(), pt.b1.tolist(), pt.W2.tolist(), pt.b2.tolist(), x.tolist())
    z = sum(math.exp(v) for v in gs)
    assert np.allclose(nn.forward_ternary(pt, x), [math.exp(v) / z for v in gs], atol=1e-12)


def test_softmax_sums_to_one_extreme_logits():
    rng = np.random.default_rng(0)
    g = rng.uniform(-700, 700, size=(200, 3))
    assert np.allclose(nn.softmax(g).sum(axis=1), 1.0, atol=1e-12)


def test_loss_single_positive_half():
    p = nn.MlpParams.zeros("binary")
    loss, _ = nn.loss_and_gradients(p, np.zeros((1, 7)), [1])
    assert loss == pytest.approx(math.log(2), abs=1e-15)


def test_duplicated_batch_same_gradients():
    rng = np.random.default_rng(1)
    p = _random_params(rng, "ternary")
    raw = _random_raw(rng, 6)
    y = rng.integers(0, 3, 6)
    l1, g1 = nn.loss_and_gradients(p, raw, y)
    l2, g2 = nn.loss_and_gradients(p, np.vstack([raw, raw]), np.concatenate([y, y]))
    assert l1 == pytest.approx(l2, abs=1e-14)
    for k in g1:
        assert np.allclose(g1[k], g2[k], atol=1e-14)


def finite_difference(params, raw, y, h=1e-5):
    out = {}
    for name in nn.PARAM_NAMES:
        arr = getattr(params, name)
        grad = np.zeros_like(arr)
        for idx in np.ndindex(arr.shape):
            old = arr[idx]
            arr[idx] = old + h
            up, _ = nn.loss_and_gradients(params, raw, y)
            arr[idx] = old - h
            down, _ = nn.loss_and_gradients(params, raw, y)
            arr[idx] = old
            grad[idx] = (up - down) / (2 * h)
        out[name] = grad
    return out


def max_relative_error(analytic, numeric, floor=1e-6):
    worst = 0.0
    for name in analytic:
        a, n = analytic[name], numeric[name]
        denom = np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)
        worst = max(worst, float(np.max(np.abs(a - n) / denom)))
    return worst


@pytest.mark.parametrize("head", ["binary", "ternary"])
@pytest.mark.parametrize("seed", range(5))
def test_gradient_check(head, seed):
    rng = np.random.default_rng(100 + seed)
    p = _random_params(rng, head)
    raw = _random_raw(rng, 8)
    y = rng.integers(0, 2 if head == "binary" else 3, 8)
    _, analytic = nn.loss_and_gradients(p, raw, y)
    assert np.any(analytic["log_theta"] != 0)
    assert max_relative_error(analytic, finite_difference(p, raw, y)) < 1e-4


def test_objective_validation():
    p = nn.MlpParams.zeros("binary")
    with pytest.raises(ValueError):
        nn.loss_and_gradients(p, np.zeros((1, 7)), [2])
    with pytest.raises(ValueError):
        nn.loss_and_gradients(p, np.zeros((1, 7)), [1], "ternary-cross-entropy")
    with pytest.raises(ValueError):
        nn.loss_and_gradients(p, np.zeros((0, 7)), [])


def _separable(rng, n=200):
    raw = np.zeros((n, 7))
    raw[:, 5:] = rng.uniform(-1, 1, size=(n, 2))
    s = raw[:, 5] + raw[:, 6]
    keep = np.abs(s) > 0.2
    return raw[keep], (s[keep] > 0).astype(int)


def test_train_deterministic():
    raw, y = _separable(np.random.default_rng(0), 100)
    cfg = nn.TrainConfig(epochs=3, seed=42)
    a, b = nn.train(raw, y, cfg), nn.train(raw, y, cfg)
    for k in nn.PARAM_NAMES:
        assert np.array_equal(getattr(a, k), getattr(b, k))


def test_train_separable_toy_set():
    raw, y = _separable(np.random.default_rng(1), 500)
    cfg = nn.TrainConfig(epochs=200, seed=3)
    init = nn.MlpParams.init("binary", 3)
    loss0, _ = nn.loss_and_gradients(init, raw, y)
    after1 = nn.train(raw, y, nn.TrainConfig(epochs=1, seed=3), init=init)
    loss1, _ = nn.loss_and_gradients(after1, raw, y)
    assert loss1 <= loss0
    model = nn.train(raw, y, cfg, init=init)
    acc = np.mean((nn.predict(model, raw) > 0.5) == y)
    assert acc == 1.0


def test_train_full_batch_option():
    raw, y = _separable(np.random.default_rng(2), 50)
    model = nn.train(raw, y, nn.TrainConfig(epochs=2, batch_size=None))
    assert model.head == "binary"


def test_predict_applies_transform():
    rng = np.random.default_rng(5)
    p = _random_params(rng, "binary")
    raw = _random_raw(rng, 4)
    assert np.allclose(nn.predict(p, raw), nn.forward_binary(p, transform(raw, p.log_theta)))


def test_checkpoint_roundtrip(tmp_path):
    rng = np.random.default_rng(7)
    p = _random_params(rng, "ternary")
    path = tmp_path / "m.json"
    nn.save_params(path, p, {"note": 1})
    back, extra = nn.load_params(path)
    assert extra == {"note": 1}
    for k in nn.PARAM_NAMES:
        assert np.array_equal(getattr(back, k), getattr(p, k))
    assert '"format_version": 1' in path.read_text()
    with pytest.raises(ValueError):
        nn.params_from_json('{"format_version": 99}')


def test_config_validation():
    with pytest.raises(ValueError):
        nn.TrainConfig(learning_rate=0)
