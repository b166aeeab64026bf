"""Kinematics, workspace analysis and Nelder-Mead design synthesis for the
2-UPS + 1-U remote-centre-of-motion mechanism."""

from mechopt.design import (
    ObjectiveConfig,
    ParameterSpace,
    SpaceKind,
    build_objective,
    decode_vector,
    design_objective,
    encode_design,
    optimize_design,
)
from mechopt.errors import (
    ConvergenceError,
    DegenerateLegError,
    DomainError,
    SingularConfigurationError,
)
from mechopt.mechanism import (
    DesignParameters,
    LegLengths,
    ReducedDesignParameters,
    TiltOrientation,
    dexterity,
    expand_reduced,
    forward_kinematics,
    inverse_condition_number,
    inverse_kinematics,
    jacobian,
    rotation_from_tilt,
    scale_design,
)
from mechopt.simplex import OptimizationResult, OptimizerConfig, Termination, nelder_mead
from mechopt.workspace import (
    ActuatorModel,
    WorkspaceEvaluation,
    WorkspaceSpec,
    actuator_bracket_search,
    evaluate_design,
    generate_grid,
    scan_grid,
    singularity_map,
)

__version__ = "0.1.0"
