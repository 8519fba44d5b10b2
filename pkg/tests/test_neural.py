import numpy as np
import pytest

from taxlab.errors import ValidationError
from taxlab.neural import (
    FeedforwardNetwork,
    PerceptronModel,
    classify_perceptron,
    flatten_parameters,
    forward,
    init_network,
    loss,
    loss_gradient,
    set_parameters,
    train_autoencoder,
    train_perceptron,
)

AND_SAMPLES = np.array(
    [[1, 0, 0], [1, 0, 1], [1, 1, 0], [1, 1, 1]], dtype=np.float64
)
AND_LABELS = [0, 0, 0, 1]
XOR_LABELS = [0, 1, 1, 0]


def _identity_net():
    return FeedforwardNetwork(
        sizes=(2, 1),
        weights=[np.array([[2.0, 3.0]])],
        biases=[np.array([1.0])],
        activations=["identity"],
    )


def test_forward_hand_values():
    net = _identity_net()
    assert forward(net, np.array([1.0, 1.0]))[0] == 6.0
    zero_net = FeedforwardNetwork(
        sizes=(2, 1),
        weights=[np.zeros((1, 2))],
        biases=[np.zeros(1)],
        activations=["sigmoid"],
    )
    assert forward(zero_net, np.array([3.0, -1.0]))[0] == 0.5


def test_loss_hand_value():
    net = _identity_net()
    # Outputs are 6 and 1; targets 4 and 0 -> (6-4)^2 + (1-0)^2 = 5.
    x = np.array([[1.0, 1.0], [0.0, 0.0]])
    y = np.array([[4.0], [0.0]])
    assert loss(net, x, y) == 5.0
    with pytest.raises(ValidationError):
        loss(net, x, y[:1])


def test_network_shape_validation():
    with pytest.raises(ValidationError):
        FeedforwardNetwork(sizes=(2,), weights=[], biases=[], activations=[])
    with pytest.raises(ValidationError):
        FeedforwardNetwork(
            sizes=(2, 1), weights=[], biases=[], activations=["identity"]
        )
    with pytest.raises(ValidationError):
        FeedforwardNetwork(
            sizes=(2, 1),
            weights=[np.zeros((1, 2))],
            biases=[np.zeros(1)],
            activations=["relu"],
        )


def test_backprop_matches_finite_differences():
    for seed in range(5):
        net = init_network((3, 4, 3), ("sigmoid", "identity"), seed=seed)
        rng = np.random.default_rng(100 + seed)
        x = rng.normal(size=(6, 3))
        y = rng.normal(size=(6, 3))
        grad_w, grad_b = loss_gradient(net, x, y)
        flat_grad = np.concatenate(
            [g.ravel() for g in grad_w] + [g.ravel() for g in grad_b]
        )
        theta = flatten_parameters(net)
        numeric = np.zeros_like(theta)
        h = 1e-6
        for i in range(theta.size):
            bump = theta.copy()
            bump[i] += h
            set_parameters(net, bump)
            upper = loss(net, x, y)
            bump[i] -= 2 * h
            set_parameters(net, bump)
            lower = loss(net, x, y)
            numeric[i] = (upper - lower) / (2 * h)
        set_parameters(net, theta)
        scale = max(1.0, float(np.linalg.norm(numeric)))
        assert np.linalg.norm(flat_grad - numeric) / scale <= 1e-6


def test_heaviside_has_no_gradient():
    net = init_network((2, 2), ("heaviside",), seed=0)
    with pytest.raises(ValidationError):
        loss_gradient(net, np.zeros((1, 2)), np.zeros((1, 2)))


def test_flatten_set_round_trip():
    net = init_network((3, 5, 2), ("sigmoid", "identity"), seed=3)
    theta = flatten_parameters(net)
    other = init_network((3, 5, 2), ("sigmoid", "identity"), seed=99)
    set_parameters(other, theta)
    assert np.array_equal(flatten_parameters(other), theta)
    with pytest.raises(ValidationError):
        set_parameters(net, theta[:-1])


def test_init_network_seeded():
    a = init_network((4, 3), ("identity",), seed=11)
    b = init_network((4, 3), ("identity",), seed=11)
    assert np.array_equal(a.weights[0], b.weights[0])
    assert np.array_equal(a.biases[0], b.biases[0])


def test_perceptron_learns_and():
    result = train_perceptron(AND_SAMPLES, AND_LABELS, seed=0)
    assert result.converged
    assert result.error < 1e-6
    for row, label in zip(AND_SAMPLES, AND_LABELS):
        assert classify_perceptron(result.model, row[1:]) == label


def test_perceptron_zero_iterations_when_initial_weights_fit():
    # Label exactly as the seeded initial weights classify: the first error
    # check already passes, so no update happens.
    rng = np.random.default_rng(42)
    w = rng.uniform(-0.05, 0.05, size=3)
    labels = (AND_SAMPLES @ w >= 0).astype(int).tolist()
    result = train_perceptron(AND_SAMPLES, labels, seed=42)
    assert result.converged
    assert result.iterations == 0


def test_perceptron_xor_hits_cap():
    result = train_perceptron(AND_SAMPLES, XOR_LABELS, seed=0, max_iterations=200)
    assert not result.converged
    assert result.iterations == 200
    assert result.error >= 0.25


def test_perceptron_deterministic():
    a = train_perceptron(AND_SAMPLES, AND_LABELS, seed=5)
    b = train_perceptron(AND_SAMPLES, AND_LABELS, seed=5)
    assert np.array_equal(a.model.weights, b.model.weights)
    assert a.model.bias == b.model.bias
    assert a.iterations == b.iterations


def test_perceptron_validation():
    no_bias_column = AND_SAMPLES.copy()
    no_bias_column[0, 0] = 0.0
    with pytest.raises(ValidationError):
        train_perceptron(no_bias_column, AND_LABELS)
    with pytest.raises(ValidationError):
        train_perceptron(AND_SAMPLES, [0, 1, 2, 0])
    with pytest.raises(ValidationError):
        train_perceptron(AND_SAMPLES, AND_LABELS, learning_rate=0.0)
    with pytest.raises(ValidationError):
        train_perceptron(AND_SAMPLES, [0, 1])


def test_classify_boundary_belongs_to_class_one():
    model = PerceptronModel(weights=np.array([1.0, -1.0]), bias=-0.5)
    assert classify_perceptron(model, np.array([1.0, 0.0])) == 1
    assert classify_perceptron(model, np.array([0.0, 1.0])) == 0
    assert classify_perceptron(model, np.array([0.5, 0.0])) == 1  # exactly 0


def test_autoencoder_fits_single_point():
    data = np.array([[0.2, 0.8, 0.5]])
    result = train_autoencoder(data, 1, epochs=1000, learning_rate=0.05, seed=0)
    assert result.loss_trace[-1] <= 1e-8
    assert np.allclose(result.model.reconstruct(data), data, atol=1e-4)
    code = result.model.encode(data)
    assert code.shape == (1, 1)
    assert result.model.code_dimension == 1


def test_autoencoder_trace_shape_and_descent():
    data = np.random.default_rng(4).uniform(0.0, 1.0, size=(10, 4))
    result = train_autoencoder(data, 2, epochs=50, learning_rate=0.01, seed=1)
    assert len(result.loss_trace) == 51
    assert result.loss_trace[-1] < result.loss_trace[0]
    net = result.model.network
    assert net.sizes == (4, 2, 4)
    assert net.activations == ["sigmoid", "identity"]


def test_autoencoder_validation():
    data = np.zeros((2, 3))
    with pytest.raises(ValidationError):
        train_autoencoder(data, 0)
    with pytest.raises(ValidationError):
        train_autoencoder(data, 1, epochs=0)
    with pytest.raises(ValidationError):
        train_autoencoder(np.zeros((0, 3)), 1)
