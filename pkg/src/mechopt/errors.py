"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input violates a documented invariant."""


class DegenerateLegError(DomainError):
    """A leg collapsed to zero length (spherical joint on its base joint)."""


class ConvergenceError(RuntimeError):
    """An iterative solver did not converge."""


class SingularConfigurationError(ConvergenceError):
    """Newton step hit a singular Jacobian."""
