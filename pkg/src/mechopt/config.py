"""
Run configuration: a JSON document describing one mechanism study.

Angles are given in degrees and converted to radians here; every other
quantity is SI. Unknown keys are rejected. Example::

    {
      "space": "reduced4",
      "mechanism": {"r_a": 0.06, "r_b": 0.03, "gamma_deg": 30.0, "h": 0.10},
      "workspace": {"theta_max_deg": 20.0, "resolution": 11, "dexterity_threshold": 0.1},
      "actuator": {"min_closed_length": 0.05, "stroke": 0.05, "search_step": 0.001},
      "objective": {"w_stroke": 100.0, "w_coverage": 10.0, "w_size": 0.1},
      "optimizer": {"max_evals": 20000, "restarts": 3},
      "bounds": {"lower": [0.005, 0.005, 0.1, 0.01], "upper": [0.3, 0.3, 89.9, 0.5]},
      "output_dir": "results"
    }

A ``full13`` mechanism is given as ``{"a1": [x, y, z], "a2": ..., "b1": ...,
"b2": ..., "h": ...}``. ``bounds`` follow the design-vector layout of the
space (``gamma`` bound in degrees). Only ``space``, ``mechanism`` and
``actuator`` are required.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from mechopt.design import ObjectiveConfig, ParameterSpace, SpaceKind, encode_design
from mechopt.mechanism import DesignParameters, ReducedDesignParameters, expand_reduced
from mechopt.simplex import OptimizerConfig
from mechopt.workspace import ActuatorModel, WorkspaceSpec


class ConfigError(Exception):
    """The document cannot be read or does not follow the schema."""


@dataclass
class RunConfig:
    space: ParameterSpace
    mechanism: object  # DesignParameters or ReducedDesignParameters
    workspace: WorkspaceSpec
    actuator: ActuatorModel
    objective: ObjectiveConfig = field(default_factory=ObjectiveConfig)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    output_dir: Path = Path("results")

    @property
    def design(self):
        if isinstance(self.mechanism, ReducedDesignParameters):
            return expand_reduced(self.mechanism)
        return self.mechanism

    @property
    def seed_vector(self):
        return encode_design(self.mechanism, self.space)


_TOP_KEYS = {"space", "mechanism", "workspace", "actuator", "objective",
             "optimizer", "bounds", "output_dir"}


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _integer(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}: expected an integer, got {value!r}")
    return value


def _vector(value, n, where):
    if not isinstance(value, list) or len(value) != n:
        raise ConfigError(f"{where}: expected a list of {n} numbers, got {value!r}")
    return [_number(v, f"{where}[{i}]") for i, v in enumerate(value)]


def _section(doc, key, allowed, required=(), optional=False):
    if key not in doc:
        if optional:
            return {}
        raise ConfigError(f"missing section {key!r}")
    sec = doc[key]
    if not isinstance(sec, dict):
        raise ConfigError(f"{key}: expected an object")
    unknown = set(sec) - set(allowed)
    if unknown:
        raise ConfigError(f"{key}: unknown field(s) {sorted(unknown)}")
    missing = [k for k in required if k not in sec]
    if missing:
        raise ConfigError(f"{key}: missing field(s) {missing}")
    return sec


def _mechanism(doc, kind):
    if kind is SpaceKind.REDUCED4:
        sec = _section(doc, "mechanism", ("r_a", "r_b", "gamma_deg", "h"),
                       ("r_a", "r_b", "gamma_deg", "h"))
        vals = {k: _number(sec[k], f"mechanism.{k}") for k in sec}
        return ReducedDesignParameters(
            vals["r_a"], vals["r_b"], math.radians(vals["gamma_deg"]), vals["h"]
        )
    keys = ("a1", "a2", "b1", "b2", "h")
    sec = _section(doc, "mechanism", keys, keys)
    pts = {k: _vector(sec[k], 3, f"mechanism.{k}") for k in keys[:4]}
    return DesignParameters(h=_number(sec["h"], "mechanism.h"), **pts)


def _bounds(doc, kind):
    sec = _section(doc, "bounds", ("lower", "upper"), ("lower", "upper"), optional=True)
    if not sec:
        return ParameterSpace(kind)
    lower = _vector(sec["lower"], kind.dimension, "bounds.lower")
    upper = _vector(sec["upper"], kind.dimension, "bounds.upper")
    if kind is SpaceKind.REDUCED4:
        lower[2], upper[2] = math.radians(lower[2]), math.radians(upper[2])
    return ParameterSpace(kind, np.array(lower), np.array(upper))


def parse_config(doc):
    """Build a :class:`RunConfig` from a decoded JSON document.

    Schema problems raise :class:`ConfigError`; values breaking a type
    invariant raise :class:`mechopt.errors.DomainError`.
    """
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown top-level field(s) {sorted(unknown)}")
    if "space" not in doc:
        raise ConfigError("missing field 'space'")
    try:
        kind = SpaceKind(doc["space"])
    except ValueError:
        raise ConfigError(f"space must be 'full13' or 'reduced4', got {doc['space']!r}") from None

    ws = _section(doc, "workspace", ("theta_max_deg", "resolution", "dexterity_threshold"),
                  optional=True)
    ws_kwargs = {}
    if "theta_max_deg" in ws:
        ws_kwargs["theta_max"] = math.radians(_number(ws["theta_max_deg"], "workspace.theta_max_deg"))
    if "resolution" in ws:
        ws_kwargs["resolution"] = _integer(ws["resolution"], "workspace.resolution")
    if "dexterity_threshold" in ws:
        ws_kwargs["dexterity_threshold"] = _number(
            ws["dexterity_threshold"], "workspace.dexterity_threshold")

    act = _section(doc, "actuator", ("min_closed_length", "stroke", "search_step"),
                   ("min_closed_length", "stroke"))
    obj = _section(doc, "objective", ("w_stroke", "w_coverage", "w_size"), optional=True)
    opt_fields = ("reflection", "expansion", "contraction", "shrink",
                  "initial_simplex_scale", "f_tol", "x_tol", "max_evals", "restarts")
    opt = _section(doc, "optimizer", opt_fields, optional=True)
    opt_kwargs = {}
    for k, v in opt.items():
        if k in ("max_evals", "restarts"):
            opt_kwargs[k] = _integer(v, f"optimizer.{k}")
        else:
            opt_kwargs[k] = _number(v, f"optimizer.{k}")

    output_dir = doc.get("output_dir", "results")
    if not isinstance(output_dir, str) or not output_dir:
        raise ConfigError("output_dir must be a non-empty string")

    return RunConfig(
        space=_bounds(doc, kind),
        mechanism=_mechanism(doc, kind),
        workspace=WorkspaceSpec(**ws_kwargs),
        actuator=ActuatorModel(**{k: _number(v, f"actuator.{k}") for k, v in act.items()}),
        objective=ObjectiveConfig(**{k: _number(v, f"objective.{k}") for k, v in obj.items()}),
        optimizer=OptimizerConfig(**opt_kwargs),
        output_dir=Path(output_dir),
    )


def load_config(path):
    """Read and parse a configuration file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    return parse_config(doc)
