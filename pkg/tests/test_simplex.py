import math

import numpy as np
import pytest

from mechopt import DomainError, OptimizerConfig, Termination, nelder_mead

# settings used wherever convergence to the exact optimum is checked;
# coefficients stay at their defaults
TIGHT = dict(f_tol=0.0, x_tol=1e-10, initial_simplex_scale=0.5, max_evals=2000)


def rosenbrock(x):
    return (1 - x[0]) ** 2 + 100 * (x[1] - x[0] ** 2) ** 2


def test_quadratic_minimum():
    res = nelder_mead(lambda x: (x[0] - 1) ** 2 + (x[1] - 2) ** 2, [0.0, 0.0], OptimizerConfig(**TIGHT))
    np.testing.assert_allclose(res.best_x, [1.0, 2.0], atol=1e-6)


def test_quadratic_with_defaults_stops_on_ftol():
    res = nelder_mead(lambda x: (x[0] - 1) ** 2 + (x[1] - 2) ** 2, [0.0, 0.0])
    assert res.termination is Termination.FTOL
    np.testing.assert_allclose(res.best_x, [1.0, 2.0], atol=1e-4)


def test_rosenbrock_with_defaults():
    res = nelder_mead(rosenbrock, [-1.2, 1.0])
    assert res.evals <= 5000
    np.testing.assert_allclose(res.best_x, [1.0, 1.0], atol=1e-4)


def test_constant_function_terminates_on_ftol():
    res = nelder_mead(lambda x: 3.25, [0.4, -0.2, 1.0], OptimizerConfig(restarts=0))
    assert res.termination is Termination.FTOL
    assert res.best_f == 3.25
    assert res.evals == 4


@pytest.mark.parametrize("n", [2, 4, 13])
def test_bowl_reduction(n):
    rng = np.random.default_rng(n)
    c = np.linspace(-0.5, 0.5, n)
    for _ in range(3):
        v = rng.normal(size=n)
        x0 = c + v / np.linalg.norm(v)
        res = nelder_mead(lambda x: float(np.sum((x - c) ** 2)), x0, OptimizerConfig(**TIGHT))
        assert res.evals <= 2000 + n
        assert res.best_f <= 1e-10
        assert np.linalg.norm(res.best_x - c) < 1e-6


def test_trace_is_non_increasing():
    res = nelder_mead(rosenbrock, [-1.2, 1.0])
    values = [f for _, f in res.trace]
    assert all(b <= a for a, b in zip(values, values[1:]))
    assert [i for i, _ in res.trace] == list(range(1, res.evals + 1))
    assert values[-1] == res.best_f


def test_rejected_vertices_never_best():
    # +inf outside the unit box; unconstrained optimum (2, 2) lies outside it
    def f(x):
        if np.any(np.abs(x) > 1):
            return math.inf
        return float(np.sum((x - 2) ** 2))

    res = nelder_mead(f, [0.0, 0.0], OptimizerConfig(initial_simplex_scale=0.3))
    assert math.isfinite(res.best_f)
    assert np.all(np.abs(res.best_x) <= 1)
    np.testing.assert_allclose(res.best_x, [1.0, 1.0], atol=1e-3)


def test_nan_and_exceptions_count_as_rejected():
    def f(x):
        if x[0] > 0.5:
            return math.nan
        if x[0] < -0.5:
            raise ValueError("outside model range")
        return (x[0] - 0.2) ** 2

    res = nelder_mead(f, [0.0], OptimizerConfig(initial_simplex_scale=0.3))
    assert res.best_x[0] == pytest.approx(0.2, abs=1e-4)


def test_non_finite_start_raises():
    with pytest.raises(DomainError):
        nelder_mead(lambda x: math.inf, [0.0, 0.0])


def test_budget_respected():
    cfg = OptimizerConfig(max_evals=50)
    res = nelder_mead(rosenbrock, [-1.2, 1.0], cfg)
    assert res.termination is Termination.MAX_EVALS
    assert res.evals <= 50 + 2


def test_deterministic_trace():
    a = nelder_mead(rosenbrock, [-1.2, 1.0])
    b = nelder_mead(rosenbrock, [-1.2, 1.0])
    assert a.trace == b.trace
    np.testing.assert_array_equal(a.best_x, b.best_x)


def test_restarts_counted():
    res = nelder_mead(rosenbrock, [-1.2, 1.0], OptimizerConfig(restarts=2))
    assert res.restarts_used <= 2
    res0 = nelder_mead(rosenbrock, [-1.2, 1.0], OptimizerConfig(restarts=0))
    assert res0.restarts_used == 0
    assert res.best_f <= res0.best_f


@pytest.mark.parametrize(
    "kwargs",
    [dict(reflection=0.0), dict(expansion=1.0), dict(contraction=1.0), dict(shrink=0.0),
     dict(max_evals=0), dict(restarts=-1), dict(initial_simplex_scale=0.0)],
)
def test_config_invariants(kwargs):
    with pytest.raises(DomainError):
        OptimizerConfig(**kwargs)
