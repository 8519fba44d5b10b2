"""Small feedforward networks, the classic perceptron rule, and a
three-layer autoencoder.

Loss is always the summed squared error L = sum_j ||y_j - F(x_j)||^2.
Backpropagation (loss_gradient) supports sigmoid and identity layers and is
checked against central finite differences in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ValidationError

ACTIVATIONS = ("sigmoid", "identity", "heaviside")


def _activate(kind: str, z: np.ndarray, threshold: float = 0.0) -> np.ndarray:
    if kind == "sigmoid":
        return 1.0 / (1.0 + np.exp(-z))
    if kind == "identity":
        return z
    if kind == "heaviside":
        return (z >= threshold).astype(np.float64)
    raise ValidationError("unknown activation", activation=kind)


@dataclass(eq=False)
class FeedforwardNetwork:
    """Dense layers; weights[l] has shape (size[l+1], size[l])."""

    sizes: tuple[int, ...]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    activations: list[str]
    thresholds: list[float] = field(default_factory=list)

    def __post_init__(self):
        gaps = len(self.sizes) - 1
        if gaps < 1:
            raise ValidationError("network needs at least two layers")
        if len(self.weights) != gaps or len(self.biases) != gaps:
            raise ValidationError("weights/biases must cover every layer gap")
        if len(self.activations) != gaps:
            raise ValidationError("one activation per non-input layer")
        for a in self.activations:
            if a not in ACTIVATIONS:
                raise ValidationError("unknown activation", activation=a)
        if not self.thresholds:
            self.thresholds = [0.0] * gaps


def init_network(
    sizes: Sequence[int],
    activations: Sequence[str],
    seed: Optional[int] = None,
    scale: float = 0.5,
) -> FeedforwardNetwork:
    rng = np.random.default_rng(seed)
    weights = []
    biases = []
    for prev, nxt in zip(sizes[:-1], sizes[1:]):
        weights.append(rng.uniform(-scale, scale, size=(nxt, prev)))
        biases.append(rng.uniform(-scale, scale, size=nxt))
    return FeedforwardNetwork(
        sizes=tuple(int(s) for s in sizes),
        weights=weights,
        biases=biases,
        activations=list(activations),
    )


def forward(net: FeedforwardNetwork, x: np.ndarray) -> np.ndarray:
    a = np.asarray(x, dtype=np.float64)
    for w, b, kind, theta in zip(net.weights, net.biases, net.activations, net.thresholds):
        a = _activate(kind, a @ w.T + b, theta)
    return a


def loss(net: FeedforwardNetwork, inputs: np.ndarray, targets: np.ndarray) -> float:
    x = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
    y = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    if x.shape[0] != y.shape[0]:
        raise ValidationError("inputs and targets must pair up")
    residual = y - forward(net, x)
    return float(np.sum(residual * residual))


def loss_gradient(
    net: FeedforwardNetwork, inputs: np.ndarray, targets: np.ndarray
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Backpropagated gradient of the summed squared error.

    Only differentiable activations are allowed here (no heaviside).
    """
    if "heaviside" in net.activations:
        raise ValidationError("heaviside layers are not differentiable")
    x = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
    y = np.atleast_2d(np.asarray(targets, dtype=np.float64))
    layer_values = [x]
    a = x
    for w, b, kind in zip(net.weights, net.biases, net.activations):
        a = _activate(kind, a @ w.T + b)
        layer_values.append(a)

    grad_w = [np.zeros_like(w) for w in net.weights]
    grad_b = [np.zeros_like(b) for b in net.biases]
    delta = 2.0 * (layer_values[-1] - y)
    for l in range(len(net.weights) - 1, -1, -1):
        out = layer_values[l + 1]
        if net.activations[l] == "sigmoid":
            delta = delta * out * (1.0 - out)
        grad_w[l] = delta.T @ layer_values[l]
        grad_b[l] = delta.sum(axis=0)
        if l > 0:
            delta = delta @ net.weights[l]
    return grad_w, grad_b


def flatten_parameters(net: FeedforwardNetwork) -> np.ndarray:
    parts = [w.ravel() for w in net.weights] + [b.ravel() for b in net.biases]
    return np.concatenate(parts)


def set_parameters(net: FeedforwardNetwork, flat: np.ndarray) -> None:
    expected = sum(w.size for w in net.weights) + sum(b.size for b in net.biases)
    if flat.size != expected:
        raise ValidationError(
            "parameter vector has the wrong length", expected=expected, got=int(flat.size)
        )
    offset = 0
    for w in net.weights:
        w[...] = flat[offset : offset + w.size].reshape(w.shape)
        offset += w.size
    for b in net.biases:
        b[...] = flat[offset : offset + b.size].reshape(b.shape)
        offset += b.size


@dataclass(eq=False)
class PerceptronModel:
    weights: np.ndarray
    bias: float


@dataclass(eq=False)
class PerceptronTraining:
    model: PerceptronModel
    error: float
    iterations: int
    converged: bool


def classify_perceptron(model: PerceptronModel, x: np.ndarray) -> int:
    """Class 1 iff <w, x> + b >= 0 (the boundary belongs to class 1)."""
    return int(float(np.dot(model.weights, np.asarray(x, dtype=np.float64))) + model.bias >= 0)


def train_perceptron(
    samples: np.ndarray,
    labels: Sequence[int],
    learning_rate: float = 1.0,
    gamma: float = 1e-6,
    max_iterations: int = 1000,
    seed: Optional[int] = None,
) -> PerceptronTraining:
    """Classic perceptron rule with one update per iteration.

    `samples` rows must be prefixed with a constant 1 (the bias input).
    Each iteration computes the mean absolute error e = mean |c_k - y_k|
    over the whole set, stops once e < gamma, and otherwise updates on the
    next misclassified point in a seeded-shuffle cyclic order:

        w_i <- w_i + learning_rate * (c_j - y_j) * x_ij

    Non-separable data runs to the iteration cap and reports converged=False.
    """
    x = np.asarray(samples, dtype=np.float64)
    c = np.asarray(labels, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] < 1:
        raise ValidationError("samples must be a non-empty 2-D array")
    if not np.all(x[:, 0] == 1.0):
        raise ValidationError("sample rows must start with the constant 1")
    if c.shape != (x.shape[0],) or not np.all(np.isin(c, (0.0, 1.0))):
        raise ValidationError("labels must be 0/1, one per sample")
    if learning_rate <= 0:
        raise ValidationError("learning rate must be > 0")
    if max_iterations < 0:
        raise ValidationError("iteration cap must be >= 0")

    rng = np.random.default_rng(seed)
    w = rng.uniform(-0.05, 0.05, size=x.shape[1])
    order = rng.permutation(x.shape[0])
    cursor = 0
    iterations = 0
    while True:
        predictions = (x @ w >= 0).astype(np.float64)
        error = float(np.mean(np.abs(c - predictions)))
        if error < gamma:
            converged = True
            break
        if iterations >= max_iterations:
            converged = False
            break
        # Advance cyclically to the next misclassified sample.
        for _ in range(x.shape[0]):
            j = order[cursor % x.shape[0]]
            cursor += 1
            if predictions[j] != c[j]:
                break
        w = w + learning_rate * (c[j] - predictions[j]) * x[j]
        iterations += 1
    model = PerceptronModel(weights=w[1:].copy(), bias=float(w[0]))
    return PerceptronTraining(
        model=model, error=error, iterations=iterations, converged=converged
    )


@dataclass(eq=False)
class AutoencoderModel:
    network: FeedforwardNetwork
    code_dimension: int

    def encode(self, x: np.ndarray) -> np.ndarray:
        a = np.asarray(x, dtype=np.float64)
        w, b = self.network.weights[0], self.network.biases[0]
        return _activate(self.network.activations[0], a @ w.T + b)

    def reconstruct(self, x: np.ndarray) -> np.ndarray:
        return forward(self.network, x)


@dataclass(eq=False)
class AutoencoderTraining:
    model: AutoencoderModel
    loss_trace: list[float]


def train_autoencoder(
    data: np.ndarray,
    code_dimension: int,
    epochs: int = 500,
    learning_rate: float = 0.01,
    seed: Optional[int] = None,
) -> AutoencoderTraining:
    """Three-layer autoencoder (input, sigmoid code, identity output) trained
    by full-batch gradient descent on the reconstruction error. Unsupervised:
    targets are the inputs themselves. The trace holds the loss before
    training and after every epoch."""
    x = np.atleast_2d(np.asarray(data, dtype=np.float64))
    if x.shape[0] < 1:
        raise ValidationError("training data must be non-empty")
    if code_dimension < 1:
        raise ValidationError("code dimension must be >= 1")
    if epochs < 1:
        raise ValidationError("epochs must be >= 1")
    width = x.shape[1]
    net = init_network(
        (width, code_dimension, width), ("sigmoid", "identity"), seed=seed
    )
    trace = [loss(net, x, x)]
    for _ in range(epochs):
        grad_w, grad_b = loss_gradient(net, x, x)
        for w, gw in zip(net.weights, grad_w):
            w -= learning_rate * gw
        for b, gb in zip(net.biases, grad_b):
            b -= learning_rate * gb
        trace.append(loss(net, x, x))
    model = AutoencoderModel(network=net, code_dimension=code_dimension)
    return AutoencoderTraining(model=model, loss_trace=trace)
