import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from taxlab.errors import ValidationError
from taxlab.optimize import (
    OptimizerConfig,
    finite_difference_gradient,
    minimize,
    with_kind,
)


def quadratic(x):
    return float(np.sum((x - np.array([1.0, -2.0])) ** 2))


@pytest.mark.parametrize(
    "config",
    [
        OptimizerConfig(kind="nelderMead", max_iterations=400, tolerance=1e-14),
        OptimizerConfig(kind="spsa", max_iterations=3000, seed=0),
        OptimizerConfig(kind="gradientDescent", max_iterations=400, tolerance=1e-14,
                        learning_rate=0.2),
    ],
)
def test_quadratic_minimum_found(config):
    result = minimize(quadratic, [4.0, 4.0], config)
    assert result.fun <= 1e-3
    assert np.allclose(result.x, [1.0, -2.0], atol=0.05)


@pytest.mark.parametrize("kind", ["nelderMead", "spsa", "gradientDescent"])
def test_trace_is_best_so_far(kind):
    config = OptimizerConfig(kind=kind, max_iterations=50, seed=3)
    result = minimize(quadratic, [4.0, 4.0], config)
    trace = result.trace
    assert trace[0] == quadratic(np.array([4.0, 4.0]))
    assert all(later <= earlier for earlier, later in zip(trace, trace[1:]))
    assert result.fun == trace[-1]
    assert result.fun <= trace[0]


def test_result_is_best_point_evaluated():
    calls = []

    def spiky(x):
        value = quadratic(x)
        calls.append((value, np.array(x)))
        return value

    result = minimize(spiky, [3.0, 3.0], OptimizerConfig(kind="spsa", seed=1,
                                                         max_iterations=40))
    best = min(v for v, _ in calls)
    assert result.fun == best


def test_spsa_seed_determinism():
    config = OptimizerConfig(kind="spsa", seed=7, max_iterations=60)
    a = minimize(quadratic, [0.0, 0.0], config)
    b = minimize(quadratic, [0.0, 0.0], config)
    assert np.array_equal(a.x, b.x)
    assert a.trace == b.trace
    c = minimize(quadratic, [0.0, 0.0], OptimizerConfig(kind="spsa", seed=8,
                                                        max_iterations=60))
    assert a.trace != c.trace


def test_nelder_mead_stops_on_flat_simplex():
    result = minimize(lambda x: 5.0, [0.0, 0.0],
                      OptimizerConfig(kind="nelderMead", max_iterations=500))
    assert result.iterations == 0
    assert result.fun == 5.0


def test_gradient_descent_step_size_matters():
    slow = minimize(quadratic, [4.0, 4.0],
                    OptimizerConfig(kind="gradientDescent", learning_rate=0.01,
                                    max_iterations=10, tolerance=0.0))
    fast = minimize(quadratic, [4.0, 4.0],
                    OptimizerConfig(kind="gradientDescent", learning_rate=0.3,
                                    max_iterations=10, tolerance=0.0))
    assert fast.fun < slow.fun


def test_finite_difference_gradient_accuracy():
    def f(x):
        return float(np.sin(x[0]) + x[1] ** 3)

    point = np.array([0.4, 1.2])
    gradient = finite_difference_gradient(f, point, step=1e-6)
    exact = np.array([math.cos(0.4), 3 * 1.2**2])
    assert np.allclose(gradient, exact, atol=1e-6)
    with pytest.raises(ValidationError):
        finite_difference_gradient(f, point, step=0.0)


def test_non_finite_objective_rejected():
    def exploding(x):
        return math.inf if x[0] > 1.0 else float(x[0])

    with pytest.raises(ValidationError) as info:
        minimize(exploding, [2.0], OptimizerConfig(kind="nelderMead"))
    assert "point" in info.value.context


def test_start_point_validation():
    with pytest.raises(ValidationError):
        minimize(quadratic, [], OptimizerConfig())
    with pytest.raises(ValidationError):
        minimize(quadratic, [math.nan, 0.0], OptimizerConfig())


def test_config_validation():
    with pytest.raises(ValidationError):
        OptimizerConfig(kind="adam")
    with pytest.raises(ValidationError):
        OptimizerConfig(max_iterations=0)
    with pytest.raises(ValidationError):
        OptimizerConfig(tolerance=-1.0)


def test_with_kind_swaps_only_kind():
    base = OptimizerConfig(kind="nelderMead", max_iterations=7, seed=9)
    swapped = with_kind(base, "spsa")
    assert swapped.kind == "spsa"
    assert swapped.max_iterations == 7 and swapped.seed == 9
    assert base.kind == "nelderMead"


@settings(deadline=None, max_examples=25)
@given(
    st.integers(min_value=0, max_value=1000),
    st.sampled_from(["nelderMead", "spsa", "gradientDescent"]),
)
def test_never_worse_than_start(seed, kind):
    rng = np.random.default_rng(seed)
    target = rng.normal(size=3)
    x0 = rng.normal(size=3)

    def f(x):
        return float(np.sum((x - target) ** 2))

    result = minimize(f, x0, OptimizerConfig(kind=kind, seed=seed, max_iterations=30))
    assert result.fun <= f(x0) + 1e-12
    assert all(later <= earlier for earlier, later in zip(result.trace, result.trace[1:]))
