import math

import numpy as np
import pytest

from mechopt import (
    ActuatorModel,
    DesignParameters,
    DomainError,
    ObjectiveConfig,
    OptimizerConfig,
    ParameterSpace,
    ReducedDesignParameters,
    WorkspaceSpec,
    build_objective,
    decode_vector,
    encode_design,
    evaluate_design,
    expand_reduced,
    optimize_design,
)
from mechopt.design import _initial_steps, objective_terms

SEED = np.array([0.06, 0.03, math.radians(30), 0.10])
SPEC = WorkspaceSpec(math.radians(20), 7, 0.1)
GENEROUS = ActuatorModel(0.01, 1.0, 0.001)
QUICK = OptimizerConfig(max_evals=600, restarts=1)


def test_decode_reduced_delegates():
    assert decode_vector(SEED, ParameterSpace.reduced4()) == expand_reduced(ReducedDesignParameters(*SEED))


def test_full13_layout_round_trip():
    d = DesignParameters((0.01, 0.02, 0.03), (0.04, 0.05, 0.06), (0.07, 0.08, 0.09),
                         (0.10, 0.11, 0.12), 0.13)
    space = ParameterSpace.full13()
    x = encode_design(d, space)
    np.testing.assert_array_equal(x, np.arange(1, 14) / 100)
    back = decode_vector(x, space)
    for name in ("a1", "a2", "b1", "b2"):
        np.testing.assert_array_equal(getattr(back, name), getattr(d, name))
    assert back.h == d.h
    np.testing.assert_array_equal(encode_design(back, space), x)


def test_decode_dimension_mismatch():
    with pytest.raises(DomainError):
        decode_vector(SEED, ParameterSpace.full13())
    with pytest.raises(DomainError):
        decode_vector(np.zeros(13), ParameterSpace.reduced4())


def test_parameter_space_dimensions_and_bounds():
    assert ParameterSpace.full13().dimension == 13
    assert ParameterSpace.reduced4().dimension == 4
    with pytest.raises(DomainError):
        ParameterSpace.reduced4(lower=[0, 0, 0, 1], upper=[1, 1, 1, 1])
    with pytest.raises(DomainError):
        ParameterSpace.reduced4(lower=[0, 0, 0], upper=[1, 1, 1])


def test_objective_without_penalties():
    f = build_objective(SPEC, GENEROUS, ObjectiveConfig(), ParameterSpace.reduced4())
    d = expand_reduced(SEED)
    ev = evaluate_design(d, SPEC, GENEROUS)
    assert ev.feasible
    assert f(SEED) == -ev.min_dexterity + 0.1 * d.max_radius()
    assert d.max_radius() == pytest.approx(0.06, rel=1e-15)


def test_objective_rejects_invalid_height():
    f = build_objective(SPEC, GENEROUS, ObjectiveConfig(), ParameterSpace.reduced4())
    assert f([0.06, 0.03, 0.5, -0.1]) == math.inf
    wide = ParameterSpace.reduced4(lower=[0.001, 0.001, 0.01, -1.0], upper=[1, 1, 1.5, 1])
    assert build_objective(SPEC, GENEROUS, ObjectiveConfig(), wide)([0.06, 0.03, 0.5, -0.1]) == math.inf


def test_objective_rejects_out_of_box_and_wrong_shape():
    f = build_objective(SPEC, GENEROUS, ObjectiveConfig(), ParameterSpace.reduced4())
    assert f([0.6, 0.03, 0.5, 0.1]) == math.inf
    assert f([0.06, 0.03, 0.5]) == math.inf
    assert f([math.nan, 0.03, 0.5, 0.1]) == math.inf


def test_stroke_penalty_is_additive():
    d = expand_reduced(SEED)
    ev = evaluate_design(d, SPEC, GENEROUS)
    span = ev.length_span
    v = 0.004
    obj = ObjectiveConfig()
    exact = ActuatorModel(0.01, span, 0.001)
    short = ActuatorModel(0.01, span - v, 0.001)
    space = ParameterSpace.reduced4()
    f_exact = build_objective(SPEC, exact, obj, space)(SEED)
    f_short = build_objective(SPEC, short, obj, space)(SEED)
    assert f_short - f_exact == pytest.approx(obj.w_stroke * v, rel=1e-9)


def test_coverage_penalty():
    d = expand_reduced(SEED)
    strict = WorkspaceSpec(math.radians(40), 9, 0.62)
    ev = evaluate_design(d, strict, GENEROUS)
    assert 0 < ev.coverage < 1
    terms = objective_terms(d, strict, GENEROUS, ObjectiveConfig())
    assert terms["coverage"] == pytest.approx(10.0 * (1 - ev.coverage), rel=1e-15)


def test_objective_weight_invariants():
    with pytest.raises(DomainError):
        ObjectiveConfig(w_stroke=-1.0)
    with pytest.raises(DomainError):
        ObjectiveConfig(w_size=math.inf)


def test_reduced_optimization_improves_seed():
    space = ParameterSpace.reduced4()
    res, design, ev = optimize_design(SEED, space, SPEC, GENEROUS, ObjectiveConfig(), QUICK)
    f = build_objective(SPEC, GENEROUS, ObjectiveConfig(), space)
    assert res.best_x.shape == (4,)
    assert res.best_f <= f(SEED)
    assert res.best_f == f(res.best_x)
    assert ev == evaluate_design(design, SPEC, GENEROUS)


def test_full13_optimization_uses_13_vectors():
    space = ParameterSpace.full13()
    x0 = expand_reduced(SEED).as_vector()
    res, design, _ = optimize_design(x0, space, SPEC, GENEROUS, ObjectiveConfig(),
                                     OptimizerConfig(max_evals=300, restarts=0))
    assert res.best_x.shape == (13,)
    np.testing.assert_array_equal(design.as_vector(), res.best_x)
    assert res.best_f <= build_objective(SPEC, GENEROUS, ObjectiveConfig(), space)(x0)


def test_optimize_rejects_infeasible_seed():
    with pytest.raises(DomainError):
        optimize_design([0.06, 0.03, 0.5, 0.9], ParameterSpace.reduced4(), SPEC, GENEROUS)
    with pytest.raises(DomainError):
        optimize_design(SEED[:3], ParameterSpace.reduced4(), SPEC, GENEROUS)


def test_initial_simplex_stays_inside_box():
    space = ParameterSpace.reduced4()
    x0 = space.upper.copy()
    x0[2] = math.radians(60)
    step = _initial_steps(x0, space, OptimizerConfig())
    for i in range(4):
        vertex = x0.copy()
        vertex[i] += step[i]
        assert space.contains(vertex)
    assert np.all(step[[0, 1, 3]] < 0) and step[2] > 0


def test_reduced_result_scores_identically_in_full13():
    obj = ObjectiveConfig()
    res, design, _ = optimize_design(SEED, ParameterSpace.reduced4(), SPEC, GENEROUS, obj, QUICK)
    full = ParameterSpace.full13()
    f13 = build_objective(SPEC, GENEROUS, obj, full)
    x13 = encode_design(ReducedDesignParameters(*res.best_x), full)
    np.testing.assert_array_equal(x13, design.as_vector())
    assert abs(f13(x13) - res.best_f) < 1e-12


def test_optimization_is_deterministic():
    a = optimize_design(SEED, ParameterSpace.reduced4(), SPEC, GENEROUS, ObjectiveConfig(), QUICK)[0]
    b = optimize_design(SEED, ParameterSpace.reduced4(), SPEC, GENEROUS, ObjectiveConfig(), QUICK)[0]
    assert a.trace == b.trace
