"""
Design synthesis: parameter-space encodings, the penalised objective and
the optimisation driver.

Two encodings are supported. ``full13`` places all four attachment points
freely plus the U-joint height::

    (a1.x, a1.y, a1.z, a2.x, a2.y, a2.z, b1.x, b1.y, b1.z, b2.x, b2.y, b2.z, h)

``reduced4`` is the mirror-symmetric family ``(r_a, r_b, gamma, h)`` that is
expanded through :func:`mechopt.mechanism.expand_reduced`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from mechopt.errors import DomainError
from mechopt.mechanism import DesignParameters, ReducedDesignParameters, expand_reduced
from mechopt.simplex import OptimizerConfig, nelder_mead
from mechopt.workspace import evaluate_design


class SpaceKind(str, enum.Enum):
    FULL13 = "full13"
    REDUCED4 = "reduced4"

    @property
    def dimension(self):
        return 13 if self is SpaceKind.FULL13 else 4


_DEFAULT_BOUNDS = {
    SpaceKind.FULL13: (
        np.array([-0.3] * 12 + [0.01]),
        np.array([0.3] * 12 + [0.5]),
    ),
    SpaceKind.REDUCED4: (
        np.array([0.005, 0.005, 1e-3, 0.01]),
        np.array([0.3, 0.3, 0.5 * math.pi - 1e-3, 0.5]),
    ),
}


@dataclass(frozen=True, eq=False)
class ParameterSpace:
    """Design-vector encoding plus box bounds."""

    kind: SpaceKind
    lower: np.ndarray = None
    upper: np.ndarray = None

    def __post_init__(self):
        kind = SpaceKind(self.kind)
        object.__setattr__(self, "kind", kind)
        lo_default, hi_default = _DEFAULT_BOUNDS[kind]
        lower = lo_default if self.lower is None else self.lower
        upper = hi_default if self.upper is None else self.upper
        lower = np.array(lower, dtype=float).reshape(-1)
        upper = np.array(upper, dtype=float).reshape(-1)
        n = kind.dimension
        if lower.shape != (n,) or upper.shape != (n,):
            raise DomainError(f"{kind.value} bounds must have {n} entries")
        if not np.all(lower < upper):
            raise DomainError("lower bounds must be strictly below upper bounds")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def full13(cls, lower=None, upper=None):
        return cls(SpaceKind.FULL13, lower, upper)

    @classmethod
    def reduced4(cls, lower=None, upper=None):
        return cls(SpaceKind.REDUCED4, lower, upper)

    @property
    def dimension(self):
        return self.kind.dimension

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


def decode_vector(x, space):
    """Design described by ``x`` in ``space``."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != space.dimension:
        raise DomainError(
            f"{space.kind.value} expects {space.dimension} values, got {x.size}"
        )
    if space.kind is SpaceKind.REDUCED4:
        return expand_reduced(ReducedDesignParameters(*x))
    return DesignParameters(a1=x[0:3], a2=x[3:6], b1=x[6:9], b2=x[9:12], h=x[12])


def encode_design(d, space):
    """Inverse of :func:`decode_vector`.

    ``d`` may be a :class:`DesignParameters` (``full13``) or a
    :class:`ReducedDesignParameters` (``reduced4``).
    """
    if space.kind is SpaceKind.FULL13:
        if isinstance(d, ReducedDesignParameters):
            d = expand_reduced(d)
        return d.as_vector()
    if not isinstance(d, ReducedDesignParameters):
        raise DomainError("reduced4 encoding needs ReducedDesignParameters")
    return d.as_vector()


@dataclass(frozen=True)
class ObjectiveConfig:
    w_stroke: float = 100.0
    w_coverage: float = 10.0
    w_size: float = 0.1

    def __post_init__(self):
        for name in ("w_stroke", "w_coverage", "w_size"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise DomainError(f"{name} must be finite and non-negative, got {v}")


def objective_terms(d, spec, act, obj, evaluation=None):
    """Individual objective contributions for design ``d``."""
    ev = evaluation if evaluation is not None else evaluate_design(d, spec, act)
    terms = {
        "dexterity": -ev.min_dexterity,
        "coverage": obj.w_coverage * (1.0 - ev.coverage),
        "stroke": obj.w_stroke * max(0.0, ev.length_span - act.stroke),
        "size": obj.w_size * d.max_radius(),
    }
    return terms


def design_objective(d, spec, act, obj, evaluation=None):
    """``-min_dexterity + coverage, stroke and size penalties``."""
    t = objective_terms(d, spec, act, obj, evaluation)
    return t["dexterity"] + t["coverage"] + t["stroke"] + t["size"]


def build_objective(spec, act, obj, space):
    """Scalar objective on design vectors.

    Vectors outside the box or decoding to an invalid design score +inf.
    """

    def f(x):
        x = np.asarray(x, dtype=float)
        if x.shape != (space.dimension,) or not np.all(np.isfinite(x)):
            return math.inf
        if not space.contains(x):
            return math.inf
        try:
            d = decode_vector(x, space)
        except DomainError:
            return math.inf
        return design_objective(d, spec, act, obj)

    return f


def _initial_steps(x0, space, cfg):
    """Axis offsets sized to the box span, flipped inward at an upper bound."""
    step = cfg.initial_simplex_scale * (space.upper - space.lower)
    flip = x0 + step > space.upper
    return np.where(flip, -step, step)


def optimize_design(x0, space, spec, act, obj=None, cfg=None):
    """Nelder-Mead design synthesis from ``x0``.

    Returns ``(result, design, evaluation)`` where ``evaluation`` is the
    workspace evaluation of the best design.
    """
    obj = obj or ObjectiveConfig()
    cfg = cfg or OptimizerConfig()
    x0 = np.array(x0, dtype=float).reshape(-1)
    if x0.size != space.dimension:
        raise DomainError(f"{space.kind.value} expects {space.dimension} values, got {x0.size}")
    f = build_objective(spec, act, obj, space)
    if not math.isfinite(f(x0)):
        raise DomainError(f"seed design is infeasible: {x0}")
    result = nelder_mead(f, x0, cfg, step=_initial_steps(x0, space, cfg))
    design = decode_vector(result.best_x, space)
    return result, design, evaluate_design(design, spec, act)
