"""Dense feedforward regression network trained from scratch.

Layers are affine maps with ReLU on hidden layers and a linear output. The
loss is mean squared error over a minibatch, gradients come from analytic
backpropagation (verifiable against the central-difference oracle in this
module), and updates use RMSProp. Training is strictly single-threaded and
seeded, so identical data and config reproduce bit-identical parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng
from .errors import (
    BadDims,
    DimensionMismatch,
    EmptyDataset,
    EmptyInput,
    LengthMismatch,
    ShapeMismatch,
    StaleCache,
    TrainingDiverged,
)


def relu(x):
    """max(0, x); subgradient convention: derivative is 0 at x = 0."""
    return np.maximum(x, 0.0)


def _relu_mask(z: np.ndarray) -> np.ndarray:
    return (z > 0).astype(np.float64)


@dataclass
class Network:
    layer_dims: list[int]
    weights: list[np.ndarray]  # layer k: (dims[k+1], dims[k]), row-major
    biases: list[np.ndarray]  # layer k: (dims[k+1],)
    activations: list[str]  # "relu" on hidden layers, "linear" on the output

    def __post_init__(self):
        n_layers = len(self.layer_dims) - 1
        if n_layers < 1:
            raise BadDims(f"need at least one layer, got dims {self.layer_dims}")
        if len(self.weights) != n_layers or len(self.biases) != n_layers:
            raise BadDims("weights/biases do not match layer_dims")
        for k in range(n_layers):
            expect = (self.layer_dims[k + 1], self.layer_dims[k])
            if self.weights[k].shape != expect:
                raise BadDims(
                    f"layer {k} weights shape {self.weights[k].shape}, expected {expect}"
                )
            if self.biases[k].shape != (self.layer_dims[k + 1],):
                raise BadDims(f"layer {k} bias shape {self.biases[k].shape}")
        if self.activations[-1] != "linear":
            raise BadDims("output activation must be linear")

    def copy(self) -> "Network":
        return Network(
            layer_dims=list(self.layer_dims),
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
            activations=list(self.activations),
        )


def init_network(layer_dims: list[int], seed: int) -> Network:
    """Seeded init: W ~ U(-r, r) with r = sqrt(6 / fan_in), biases zero.

    Weights fill row-major, layer by layer, from one named stream, so the
    layout is part of the determinism contract.
    """
    if len(layer_dims) < 2 or any(d <= 0 for d in layer_dims):
        raise BadDims(f"layer_dims must be >= 2 positive entries, got {layer_dims}")
    gen = rng.stream(seed, "init")
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_dims[:-1], layer_dims[1:]):
        bound = np.sqrt(6.0 / fan_in)
        w = np.empty((fan_out, fan_in), dtype=np.float64)
        flat = w.reshape(-1)
        for i in range(flat.size):
            flat[i] = gen.uniform(-bound, bound)
        weights.append(w)
        biases.append(np.zeros(fan_out, dtype=np.float64))
    activations = ["relu"] * (len(layer_dims) - 2) + ["linear"]
    return Network(list(layer_dims), weights, biases, activations)


@dataclass
class ForwardCache:
    inputs: np.ndarray  # (batch, dims[0])
    preacts: list[np.ndarray]  # z_k per layer, (batch, dims[k+1])
    posts: list[np.ndarray]  # activation(z_k) per layer


def forward_batch(net: Network, X: np.ndarray) -> tuple[np.ndarray, ForwardCache]:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != net.layer_dims[0]:
        raise DimensionMismatch(
            f"input has {X.shape[1]} features, network expects {net.layer_dims[0]}"
        )
    a = X
    preacts, posts = [], []
    for w, b, act in zip(net.weights, net.biases, net.activations):
        z = a @ w.T + b
        a = relu(z) if act == "relu" else z
        preacts.append(z)
        posts.append(a)
    return a[:, 0], ForwardCache(inputs=X, preacts=preacts, posts=posts)


def forward(net: Network, x: np.ndarray) -> tuple[float, ForwardCache]:
    """Single-sample prediction plus the cache backward() needs."""
    y, cache = forward_batch(net, np.asarray(x, dtype=np.float64).reshape(1, -1))
    return float(y[0]), cache


def mse_loss(preds, targets) -> float:
    preds = np.asarray(preds, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if preds.shape != targets.shape:
        raise LengthMismatch(f"preds {preds.shape} vs targets {targets.shape}")
    if preds.size == 0:
        raise EmptyInput("mse_loss of zero samples")
    return float(np.mean((preds - targets) ** 2))


@dataclass
class Gradients:
    weights: list[np.ndarray]
    biases: list[np.ndarray]


def backward(net: Network, cache: ForwardCache, targets) -> Gradients:
    """Analytic gradient of the batch-mean squared error wrt every parameter."""
    targets = np.atleast_1d(np.asarray(targets, dtype=np.float64))
    if len(cache.preacts) != len(net.weights):
        raise StaleCache("cache layer count does not match network")
    for k, w in enumerate(net.weights):
        if cache.preacts[k].shape[1] != w.shape[0]:
            raise StaleCache(f"cache layer {k} width {cache.preacts[k].shape[1]}")
    batch = cache.inputs.shape[0]
    if targets.shape != (batch,):
        raise StaleCache(f"targets shape {targets.shape} vs batch {batch}")

    preds = cache.posts[-1][:, 0]
    # d(mean (y - t)^2)/dy
    delta = (2.0 * (preds - targets) / batch)[:, None]

    grad_w = [np.empty(0)] * len(net.weights)
    grad_b = [np.empty(0)] * len(net.weights)
    for k in range(len(net.weights) - 1, -1, -1):
        a_prev = cache.inputs if k == 0 else cache.posts[k - 1]
        grad_w[k] = delta.T @ a_prev
        grad_b[k] = delta.sum(axis=0)
        if k > 0:
            delta = delta @ net.weights[k]
            if net.activations[k - 1] == "relu":
                delta = delta * _relu_mask(cache.preacts[k - 1])
    return Gradients(weights=grad_w, biases=grad_b)


def finite_diff_gradients(net: Network, batch, h: float = 1e-5) -> Gradients:
    """Central-difference oracle over the batch loss; slow, for verification."""
    X, targets = batch
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    targets = np.atleast_1d(np.asarray(targets, dtype=np.float64))

    def loss() -> float:
        preds, _ = forward_batch(net, X)
        return mse_loss(preds, targets)

    grad_w, grad_b = [], []
    for params, grads in ((net.weights, grad_w), (net.biases, grad_b)):
        for arr in params:
            g = np.zeros_like(arr)
            flat, gflat = arr.reshape(-1), g.reshape(-1)
            for i in range(flat.size):
                keep = flat[i]
                flat[i] = keep + h
                up = loss()
                flat[i] = keep - h
                down = loss()
                flat[i] = keep
                gflat[i] = (up - down) / (2.0 * h)
            grads.append(g)
    return Gradients(weights=grad_w, biases=grad_b)


@dataclass
class RmsPropState:
    """Per-parameter running average of squared gradients."""

    sq_weights: list[np.ndarray]
    sq_biases: list[np.ndarray]
    learning_rate: float = 0.001
    rho: float = 0.9
    epsilon: float = 1e-8

    @classmethod
    def for_network(
        cls, net: Network, learning_rate: float = 0.001, rho: float = 0.9, epsilon: float = 1e-8
    ) -> "RmsPropState":
        if not 0.0 < rho < 1.0:
            raise ValueError(f"rho must be in (0, 1), got {rho}")
        if epsilon <= 0 or learning_rate <= 0:
            raise ValueError("learning_rate and epsilon must be positive")
        return cls(
            sq_weights=[np.zeros_like(w) for w in net.weights],
            sq_biases=[np.zeros_like(b) for b in net.biases],
            learning_rate=learning_rate,
            rho=rho,
            epsilon=epsilon,
        )


def rmsprop_step(
    net: Network, grads: Gradients, state: RmsPropState
) -> tuple[Network, RmsPropState]:
    """s <- rho*s + (1-rho)*g^2; theta <- theta - lr*g / (sqrt(s) + eps).

    Updates net and state in place and returns them.
    """
    for params, gs, sqs in (
        (net.weights, grads.weights, state.sq_weights),
        (net.biases, grads.biases, state.sq_biases),
    ):
        if len(params) != len(gs):
            raise ShapeMismatch("gradient layer count does not match network")
        for theta, g, s in zip(params, gs, sqs):
            if theta.shape != g.shape:
                raise ShapeMismatch(f"gradient shape {g.shape} vs parameter {theta.shape}")
            s *= state.rho
            s += (1.0 - state.rho) * g * g
            theta -= state.learning_rate * g / (np.sqrt(s) + state.epsilon)
    return net, state


@dataclass
class TrainConfig:
    batch_size: int = 10
    max_epochs: int = 1000
    learning_rate: float = 0.001
    patience: int = 50
    shuffle_seed: int = 0
    init_seed: int = 0
    rho: float = 0.9
    epsilon: float = 1e-8

    def __post_init__(self):
        for name in ("batch_size", "max_epochs", "patience"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")


@dataclass
class TrainHistory:
    train_loss: list[float] = field(default_factory=list)
    val_loss: list[float] = field(default_factory=list)
    best_epoch: int = 0  # 1-indexed
    stopped_epoch: int = 0

    @property
    def best_val_loss(self) -> float:
        return self.val_loss[self.best_epoch - 1]


def fit(
    net: Network,
    train: tuple[np.ndarray, np.ndarray],
    validation: tuple[np.ndarray, np.ndarray],
    cfg: TrainConfig,
) -> tuple[Network, TrainHistory]:
    """Early-stopped minibatch training; returns the best-epoch parameters.

    Per epoch: seeded shuffle, minibatches of cfg.batch_size (last one may be
    short), batch-mean gradient, RMSProp update. Validation loss is checked
    after each epoch; an epoch only counts as an improvement when strictly
    lower than the best seen, and training stops once `patience` epochs pass
    without one. The best epoch's weights are restored before returning.
    """
    X, y = np.asarray(train[0], dtype=np.float64), np.asarray(train[1], dtype=np.float64)
    Xv, yv = (
        np.asarray(validation[0], dtype=np.float64),
        np.asarray(validation[1], dtype=np.float64),
    )
    if X.shape[0] == 0 or Xv.shape[0] == 0:
        raise EmptyDataset("train and validation must both be nonempty")

    state = RmsPropState.for_network(
        net, learning_rate=cfg.learning_rate, rho=cfg.rho, epsilon=cfg.epsilon
    )
    history = TrainHistory()
    n = X.shape[0]
    best_val = np.inf
    best_snapshot = None

    for epoch in range(1, cfg.max_epochs + 1):
        order = list(range(n))
        rng.stream(cfg.shuffle_seed, f"epoch-{epoch}").shuffle(order)
        idx = np.array(order)

        loss_sum = 0.0
        for start in range(0, n, cfg.batch_size):
            take = idx[start : start + cfg.batch_size]
            preds, cache = forward_batch(net, X[take])
            loss_sum += float(np.sum((preds - y[take]) ** 2))
            grads = backward(net, cache, y[take])
            rmsprop_step(net, grads, state)

        val_preds, _ = forward_batch(net, Xv)
        val_loss = mse_loss(val_preds, yv)
        history.train_loss.append(loss_sum / n)
        history.val_loss.append(val_loss)
        history.stopped_epoch = epoch

        if val_loss < best_val:
            best_val = val_loss
            history.best_epoch = epoch
            best_snapshot = ([w.copy() for w in net.weights], [b.copy() for b in net.biases])
        elif epoch - history.best_epoch >= cfg.patience:
            break

    if best_snapshot is None:
        raise TrainingDiverged(
            "validation loss never reached a finite value; check the data for NaNs"
        )
    net.weights = [w.copy() for w in best_snapshot[0]]
    net.biases = [b.copy() for b in best_snapshot[1]]
    return net, history
