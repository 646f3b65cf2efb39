import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rutnet.errors import (
    BadDims,
    DimensionMismatch,
    EmptyDataset,
    EmptyInput,
    LengthMismatch,
    ShapeMismatch,
    StaleCache,
)
from rutnet.nn import (
    Network,
    RmsPropState,
    TrainConfig,
    backward,
    finite_diff_gradients,
    fit,
    forward,
    forward_batch,
    init_network,
    mse_loss,
    relu,
    rmsprop_step,
)

GRAD_TEMPLATES = [[13, 8, 4, 1], [13, 8, 1], [8, 4, 1], [4, 1], [13, 4, 1]]


def linear_net(w, b):
    return Network(
        layer_dims=[1, 1],
        weights=[np.array([[float(w)]])],
        biases=[np.array([float(b)])],
        activations=["linear"],
    )


class TestRelu:
    def test_negative(self):
        assert relu(-3) == 0

    def test_positive(self):
        assert relu(5) == 5

    def test_boundary(self):
        assert relu(0) == 0

    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_matches_max(self, x):
        assert relu(x) == max(0.0, x)


class TestInit:
    def test_shapes(self):
        net = init_network([13, 64, 64, 1], seed=0)
        assert [w.shape for w in net.weights] == [(64, 13), (64, 64), (1, 64)]
        assert [b.shape for b in net.biases] == [(64,), (64,), (1,)]
        assert net.activations == ["relu", "relu", "linear"]

    def test_deterministic(self):
        a = init_network([13, 8, 1], seed=42)
        b = init_network([13, 8, 1], seed=42)
        assert all(np.array_equal(x, y) for x, y in zip(a.weights, b.weights))

    def test_seeds_differ(self):
        a = init_network([13, 8, 1], seed=1)
        b = init_network([13, 8, 1], seed=2)
        assert not np.array_equal(a.weights[0], b.weights[0])

    def test_biases_zero(self):
        net = init_network([13, 8, 4, 1], seed=7)
        assert all(not b.any() for b in net.biases)

    def test_fan_in_bound(self):
        net = init_network([16, 32, 1], seed=3)
        assert np.abs(net.weights[0]).max() <= math.sqrt(6.0 / 16)
        assert np.abs(net.weights[1]).max() <= math.sqrt(6.0 / 32)

    @pytest.mark.parametrize("dims", [[13], [], [13, 0, 1], [13, -2, 1]])
    def test_bad_dims(self, dims):
        with pytest.raises(BadDims):
            init_network(dims, seed=0)

    def test_network_shape_checked(self):
        with pytest.raises(BadDims):
            Network([2, 1], [np.zeros((1, 3))], [np.zeros(1)], ["linear"])

    def test_output_must_be_linear(self):
        with pytest.raises(BadDims):
            Network([1, 1], [np.ones((1, 1))], [np.zeros(1)], ["relu"])


class TestForward:
    def test_affine(self):
        y, _ = forward(linear_net(2, 3), [5.0])
        assert y == 13.0

    def test_zero_net(self):
        net = init_network([13, 8, 1], seed=0)
        for w in net.weights:
            w[:] = 0.0
        y, _ = forward(net, np.ones(13))
        assert y == 0.0

    def test_negative_preactivation_blocked(self):
        net = Network(
            layer_dims=[1, 1, 1],
            weights=[np.array([[-1.0]]), np.array([[1.0]])],
            biases=[np.zeros(1), np.zeros(1)],
            activations=["relu", "linear"],
        )
        y, cache = forward(net, [2.0])
        assert cache.preacts[0][0, 0] == -2.0
        assert y == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            forward(linear_net(1, 0), [1.0, 2.0])

    def test_batch_matches_single(self):
        # batched BLAS paths may differ from one-row products in the last ulp
        net = init_network([13, 8, 4, 1], seed=5)
        X = np.random.default_rng(0).normal(size=(6, 13))
        batch_preds, _ = forward_batch(net, X)
        singles = [forward(net, x)[0] for x in X]
        assert np.allclose(batch_preds, singles, rtol=1e-12)


class TestMseLoss:
    def test_zero(self):
        assert mse_loss([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_hand_value(self):
        assert mse_loss([0.0, 0.0], [3.0, 4.0]) == 12.5

    @given(
        c=st.floats(min_value=-8, max_value=8, allow_nan=False),
        resid=st.lists(st.floats(min_value=-100, max_value=100), min_size=1, max_size=10),
    )
    def test_homogeneity(self, c, resid):
        resid = np.array(resid)
        base = mse_loss(resid, np.zeros_like(resid))
        scaled = mse_loss(c * resid, np.zeros_like(resid))
        assert scaled == pytest.approx(c * c * base, rel=1e-12, abs=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            mse_loss([1.0], [1.0, 2.0])

    def test_empty(self):
        with pytest.raises(EmptyInput):
            mse_loss([], [])


class TestBackward:
    def test_zero_residual_zero_gradient(self):
        net = linear_net(2, 0)
        y, cache = forward(net, [1.0])
        assert y == 2.0
        grads = backward(net, cache, 2.0)
        assert not grads.weights[0].any() and not grads.biases[0].any()

    def test_hand_derivatives(self):
        # y = w*x + b, x=2, w=1, b=0, target 0, loss (y-t)^2
        net = linear_net(1, 0)
        _, cache = forward(net, [2.0])
        grads = backward(net, cache, 0.0)
        assert grads.weights[0][0, 0] == 8.0  # 2*y*x
        assert grads.biases[0][0] == 4.0  # 2*y

    def test_matches_finite_differences(self):
        worst = 0.0
        for i in range(10):
            dims = GRAD_TEMPLATES[i % len(GRAD_TEMPLATES)]
            net = init_network(dims, seed=100 + i)
            gen = np.random.default_rng(200 + i)
            X = gen.normal(size=(4, dims[0]))
            targets = gen.normal(size=4) * 2
            _, cache = forward_batch(net, X)
            analytic = backward(net, cache, targets)
            numeric = finite_diff_gradients(net, (X, targets))
            for a, b in zip(
                analytic.weights + analytic.biases, numeric.weights + numeric.biases
            ):
                rel = np.abs(a - b) / np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-8)
                worst = max(worst, float(rel.max()))
        assert worst < 1e-4

    def test_stale_cache(self):
        wide = init_network([13, 8, 1], seed=0)
        narrow = init_network([13, 4, 1], seed=0)
        _, cache = forward_batch(wide, np.zeros((2, 13)))
        with pytest.raises(StaleCache):
            backward(narrow, cache, np.zeros(2))

    def test_target_count_checked(self):
        net = init_network([4, 1], seed=0)
        _, cache = forward_batch(net, np.zeros((3, 4)))
        with pytest.raises(StaleCache):
            backward(net, cache, np.zeros(2))


class TestFiniteDiff:
    def test_quadratic_in_one_weight(self):
        # loss(w) = (w*x - t)^2 is quadratic, so central differences are exact to O(h^2)
        net = linear_net(1.5, 0)
        grads = finite_diff_gradients(net, (np.array([[2.0]]), np.array([1.0])))
        analytic = 2 * (1.5 * 2 - 1) * 2
        assert grads.weights[0][0, 0] == pytest.approx(analytic, abs=1e-6)

    def test_zero_residual_near_zero(self):
        net = linear_net(2, 0)
        grads = finite_diff_gradients(net, (np.array([[1.0]]), np.array([2.0])))
        assert abs(grads.weights[0][0, 0]) < 1e-8
        assert abs(grads.biases[0][0]) < 1e-8


class TestRmsProp:
    def test_zero_gradient_decays_accumulator(self):
        net = linear_net(1, 0)
        state = RmsPropState.for_network(net)
        state.sq_weights[0][:] = 0.4
        before = net.weights[0].copy()
        zero = backward(net, forward(net, [0.0])[1], 0.0)  # x=0 -> all-zero grads
        rmsprop_step(net, zero, state)
        assert np.array_equal(net.weights[0], before)
        assert state.sq_weights[0][0, 0] == pytest.approx(0.9 * 0.4, rel=1e-15)

    def test_first_step_hand_value(self):
        net = linear_net(0, 0)
        state = RmsPropState.for_network(net, learning_rate=0.001, rho=0.9, epsilon=1e-8)
        from rutnet.nn import Gradients

        ones = Gradients(weights=[np.ones((1, 1))], biases=[np.zeros(1)])
        rmsprop_step(net, ones, state)
        expected = -0.001 / (math.sqrt(0.1) + 1e-8)
        assert state.sq_weights[0][0, 0] == pytest.approx(0.1, abs=1e-15)
        assert net.weights[0][0, 0] == pytest.approx(expected, abs=1e-9)

    def test_descent_direction(self):
        net = init_network([4, 4, 1], seed=9)
        state = RmsPropState.for_network(net)
        gen = np.random.default_rng(17)
        from rutnet.nn import Gradients

        grads = Gradients(
            weights=[gen.normal(size=w.shape) for w in net.weights],
            biases=[gen.normal(size=b.shape) for b in net.biases],
        )
        before_w = [w.copy() for w in net.weights]
        rmsprop_step(net, grads, state)
        for w0, w1, g in zip(before_w, net.weights, grads.weights):
            moved = g != 0
            assert np.all(np.sign(w1 - w0)[moved] == -np.sign(g)[moved])

    def test_accumulator_nonnegative(self):
        net = init_network([4, 1], seed=2)
        state = RmsPropState.for_network(net)
        gen = np.random.default_rng(3)
        from rutnet.nn import Gradients

        for _ in range(50):
            grads = Gradients(
                weights=[gen.normal(size=w.shape) for w in net.weights],
                biases=[gen.normal(size=b.shape) for b in net.biases],
            )
            rmsprop_step(net, grads, state)
            assert all((s >= 0).all() for s in state.sq_weights + state.sq_biases)

    def test_shape_mismatch(self):
        net = linear_net(1, 0)
        state = RmsPropState.for_network(net)
        from rutnet.nn import Gradients

        bad = Gradients(weights=[np.ones((2, 2))], biases=[np.zeros(1)])
        with pytest.raises(ShapeMismatch):
            rmsprop_step(net, bad, state)

    def test_single_step_descends_quadratic(self):
        # 1-parameter model y = w*x on (x=1, t=0): loss w^2 strictly shrinks
        net = linear_net(0.5, 0)
        state = RmsPropState.for_network(net, learning_rate=0.001)
        X, t = np.array([[1.0]]), np.array([0.0])
        preds, cache = forward_batch(net, X)
        before = mse_loss(preds, t)
        rmsprop_step(net, backward(net, cache, t), state)
        after = mse_loss(forward_batch(net, X)[0], t)
        assert after < before


class TestTrainConfig:
    def test_zero_epochs_rejected(self):
        with pytest.raises(ValueError):
            TrainConfig(max_epochs=0)

    def test_defaults(self):
        cfg = TrainConfig()
        assert (cfg.batch_size, cfg.max_epochs, cfg.learning_rate, cfg.patience) == (
            10,
            1000,
            0.001,
            50,
        )

    def test_bad_lr(self):
        with pytest.raises(ValueError):
            TrainConfig(learning_rate=0)


def toy_problem(n=500, seed=42):
    gen = np.random.default_rng(seed)
    X = gen.normal(size=(n, 13))
    return X, 3.0 * X[:, 1]


class TestFit:
    def test_single_epoch(self):
        X, y = toy_problem(40)
        net = init_network([13, 4, 1], seed=0)
        _, hist = fit(net, (X, y), (X, y), TrainConfig(max_epochs=1))
        assert hist.stopped_epoch == 1
        assert len(hist.train_loss) == len(hist.val_loss) == 1

    def test_linear_task_converges(self):
        X, y = toy_problem(500)
        net = init_network([13, 8, 4, 1], seed=1)
        _, hist = fit(net, (X, y), (X[:50], y[:50]), TrainConfig(max_epochs=200, patience=200))
        assert hist.train_loss[-1] < 1e-3

    def test_plateau_stops_within_patience(self):
        # all-zero inputs and targets: gradients vanish, validation freezes at epoch 1
        X = np.zeros((30, 13))
        y = np.zeros(30)
        net = init_network([13, 4, 1], seed=3)
        _, hist = fit(net, (X, y), (X, y), TrainConfig(max_epochs=500, patience=12))
        assert hist.best_epoch == 1
        assert hist.stopped_epoch <= hist.best_epoch + 12
        assert hist.stopped_epoch == 13  # exact: 1 + patience

    def test_restore_best(self):
        gen = np.random.default_rng(5)
        X, y = toy_problem(60, seed=5)
        Xv = gen.normal(size=(30, 13))
        yv = 3.0 * Xv[:, 1] + gen.normal(size=30)  # noisy validation wobbles
        net = init_network([13, 8, 1], seed=5)
        net, hist = fit(net, (X, y), (Xv, yv), TrainConfig(max_epochs=40, patience=40))
        preds, _ = forward_batch(net, Xv)
        assert mse_loss(preds, yv) == pytest.approx(min(hist.val_loss), abs=1e-12)
        assert hist.val_loss[hist.best_epoch - 1] == min(hist.val_loss)

    def test_deterministic_parameters(self):
        X, y = toy_problem(80)
        cfg = TrainConfig(max_epochs=12)
        out = []
        for _ in range(2):
            net = init_network([13, 8, 1], seed=4)
            net, _ = fit(net, (X, y), (X[:10], y[:10]), cfg)
            out.append(net)
        for a, b in zip(out[0].weights + out[0].biases, out[1].weights + out[1].biases):
            assert np.array_equal(a, b)

    def test_empty_rejected(self):
        net = init_network([13, 4, 1], seed=0)
        with pytest.raises(EmptyDataset):
            fit(net, (np.empty((0, 13)), np.empty(0)), (np.zeros((1, 13)), np.zeros(1)), TrainConfig())

    def test_short_final_batch_used(self):
        X, y = toy_problem(25)  # batch 10 -> batches of 10, 10, 5
        net = init_network([13, 4, 1], seed=0)
        _, hist = fit(net, (X, y), (X, y), TrainConfig(max_epochs=2))
        assert len(hist.train_loss) == 2

    def test_nan_data_raises_instead_of_corrupting(self):
        from rutnet.errors import TrainingDiverged

        X, y = toy_problem(20)
        y = y.copy()
        y[3] = np.nan
        net = init_network([13, 4, 1], seed=0)
        with pytest.raises(TrainingDiverged):
            fit(net, (X, y), (X, y), TrainConfig(max_epochs=5, patience=2))
