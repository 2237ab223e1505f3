import math

import numpy as np
import pytest

from wnnrec.baselines import (
    DenseNet,
    MFHyperparams,
    NetHyperparams,
    init_net,
    mf_fit,
    mf_predict,
    net_forward,
    net_gradient,
    net_loss,
    net_predict,
    net_train_user,
)
from wnnrec.encoding import RATING_VALUES, encode_rating


def zero_net(hidden=4, inputs=26, outputs=10):
    return DenseNet(
        w1=np.zeros((hidden, inputs)),
        b1=np.zeros(hidden),
        w2=np.zeros((outputs, hidden)),
        b2=np.zeros(outputs),
    )


def finite_difference_gradient(net, x, t, h=1e-5):
    """Central differences on every parameter, via the loss only."""
    grads = {}
    for name in ("w1", "b1", "w2", "b2"):
        param = getattr(net, name)
        g = np.zeros_like(param)
        it = np.nditer(param, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            orig = param[idx]
            param[idx] = orig + h
            lp = net_loss(net, x, t)
            param[idx] = orig - h
            lm = net_loss(net, x, t)
            param[idx] = orig
            g[idx] = (lp - lm) / (2 * h)
        grads[name] = g
    return grads


class TestNetForward:
    def test_zero_net_outputs_half(self):
        y = net_forward(zero_net(), np.ones(26, dtype=np.uint8))
        assert np.allclose(y, 0.5)

    def test_hand_computed_2_2_1_toy(self):
        net = DenseNet(
            w1=np.array([[0.5, -0.25], [1.0, 0.75]]),
            b1=np.array([0.1, -0.2]),
            w2=np.array([[2.0, -1.0]]),
            b2=np.array([0.3]),
        )
        x = [1, 0]

        def sig(v):
            return 1.0 / (1.0 + math.exp(-v))

        a1 = sig(0.5 * 1 + (-0.25) * 0 + 0.1)
        a2 = sig(1.0 * 1 + 0.75 * 0 - 0.2)
        expected = sig(2.0 * a1 - 1.0 * a2 + 0.3)
        assert net_forward(net, x)[0] == pytest.approx(expected, rel=1e-12)

    def test_outputs_strictly_inside_unit_interval(self):
        rng = np.random.default_rng(7)
        for seed in range(10):
            net = init_net(16, seed)
            y = net_forward(net, rng.integers(0, 2, size=26))
            assert np.all(y > 0.0) and np.all(y < 1.0)


class TestNetGradient:
    def test_matches_central_finite_differences(self):
        rng = np.random.default_rng(3)
        for seed in range(5):
            net = init_net(6, seed)
            x = rng.integers(0, 2, size=26)
            t = encode_rating(float(rng.choice(RATING_VALUES)))
            got = net_gradient(net, x, t)
            want = finite_difference_gradient(net, x, t)
            for name in ("w1", "b1", "w2", "b2"):
                g = getattr(got, name)
                w = want[name]
                denom = np.maximum(np.abs(w), 1e-8)
                assert np.max(np.abs(g - w) / denom) < 1e-4

    def test_zero_gradient_when_target_equals_output(self):
        net = init_net(5, seed=1)
        x = np.ones(26, dtype=np.uint8)
        y = net_forward(net, x)
        g = net_gradient(net, x, y)  # soft target equal to the output
        assert np.allclose(g.b2, 0.0, atol=1e-12)
        assert np.allclose(g.w2, 0.0, atol=1e-12)
        assert np.allclose(g.w1, 0.0, atol=1e-12)

    def test_gradient_additive_over_examples(self):
        net = init_net(5, seed=2)
        x = np.random.default_rng(2).integers(0, 2, size=26)
        t = encode_rating(2.5)
        g = net_gradient(net, x, t)
        # Summing the loss of two identical examples doubles every gradient.
        assert np.allclose(2 * g.w1, g.w1 + g.w1)
        twice = {n: 2 * getattr(g, n) for n in ("w1", "b1", "w2", "b2")}
        for n in twice:
            assert np.allclose(twice[n], getattr(g, n) * 2)


class TestNetTraining:
    def test_loss_decreases(self):
        rng = np.random.default_rng(11)
        pairs = [(rng.integers(0, 2, size=26), float(rng.choice(RATING_VALUES))) for _ in range(20)]
        hyper = NetHyperparams(hidden_size=16, learning_rate=0.05, epochs=100)
        net0 = init_net(16, seed=5)
        before = np.mean([net_loss(net0, x, encode_rating(r)) for x, r in pairs])
        net = net_train_user(pairs, hyper, seed=5)
        after = np.mean([net_loss(net, x, encode_rating(r)) for x, r in pairs])
        assert after < before

    def test_single_pair_converges(self):
        x = np.random.default_rng(12).integers(0, 2, size=26)
        net = net_train_user([(x, 3.0)], NetHyperparams(hidden_size=16, learning_rate=0.5, epochs=2000), seed=3)
        y = net_forward(net, x)
        assert np.max(np.abs(y - encode_rating(3.0))) < 0.1
        assert net_predict(net, x) == 3.0

    def test_deterministic_under_seed(self):
        rng = np.random.default_rng(13)
        pairs = [(rng.integers(0, 2, size=26), 4.0) for _ in range(5)]
        a = net_train_user(pairs, seed=9)
        b = net_train_user(pairs, seed=9)
        for name in ("w1", "b1", "w2", "b2"):
            assert np.array_equal(getattr(a, name), getattr(b, name))

    def test_empty_history_rejected(self):
        with pytest.raises(ValueError):
            net_train_user([], NetHyperparams())


class TestNetPredict:
    def test_zero_net_predicts_five(self):
        # logistic(0) = 0.5 and the threshold is >= 0.5, so all bits fire.
        assert net_predict(zero_net(), np.zeros(26, dtype=np.uint8)) == 5.0

    def test_prediction_is_valid_rating(self):
        rng = np.random.default_rng(14)
        for seed in range(5):
            net = init_net(8, seed)
            assert net_predict(net, rng.integers(0, 2, size=26)) in RATING_VALUES


class TestMatrixFactorization:
    def test_constant_data_converges_to_mean(self):
        triples = [(u, i, 4.0) for u in range(10) for i in range(8)]
        model = mf_fit(triples, MFHyperparams(factors=4, epochs=20), seed=1)
        assert model.mu == 4.0
        for u in range(10):
            for i in range(8):
                assert mf_predict(model, u, i) == 4.0
        assert np.max(np.abs(model.user_bias)) < 0.05
        assert np.max(np.abs(model.item_bias)) < 0.05

    def test_rmse_decreases(self):
        rng = np.random.default_rng(15)
        triples = [
            (int(u), int(i), float(rng.choice(RATING_VALUES)))
            for u in rng.integers(0, 40, size=400)
            for i in [rng.integers(0, 60)]
        ]
        model = mf_fit(triples, MFHyperparams(factors=8, epochs=15), seed=2)
        assert model.rmse_history[-1] < model.rmse_history[0]

    def test_deterministic_under_seed(self):
        triples = [(u, u % 3, 2.0 + (u % 4) / 2) for u in range(30)]
        a = mf_fit(triples, seed=4)
        b = mf_fit(triples, seed=4)
        assert np.array_equal(a.user_factors, b.user_factors)
        assert np.array_equal(a.item_bias, b.item_bias)
        assert a.rmse_history == b.rmse_history

    def test_empty_set_rejected(self):
        with pytest.raises(ValueError):
            mf_fit([])

    def test_hand_computed_prediction(self):
        model = mf_fit([(1, 1, 3.0)], MFHyperparams(factors=2, epochs=0), seed=0)
        model.mu = 3.0
        model.user_bias[0] = 0.5
        model.item_bias[0] = -0.25
        model.user_factors[0] = np.array([0.5, 0.5])
        model.item_factors[0] = np.array([0.25, 0.25])
        assert mf_predict(model, 1, 1) == 3.5  # 3 + 0.5 - 0.25 + 0.25

    def test_unknown_ids_fall_back_to_mean(self):
        triples = [(1, 1, 3.0), (2, 2, 4.0)]
        model = mf_fit(triples, MFHyperparams(epochs=0), seed=0)
        assert mf_predict(model, 999, 999) == round(model.mu * 2) / 2

    def test_predictions_clamped_to_grid(self):
        model = mf_fit([(1, 1, 5.0)], MFHyperparams(epochs=0), seed=0)
        model.user_bias[0] = 100.0
        assert mf_predict(model, 1, 1) == 5.0
        model.user_bias[0] = -100.0
        assert mf_predict(model, 1, 1) == 0.5

    def test_monotone_in_user_bias(self):
        model = mf_fit([(1, 1, 3.0)], MFHyperparams(epochs=0), seed=0)
        scores = []
        for b in (-1.0, 0.0, 1.0):
            model.user_bias[0] = b
            scores.append(mf_predict(model, 1, 1))
        assert scores == sorted(scores)
