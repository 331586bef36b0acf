"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class BracketError(ValueError):
    """A root-finding bracket does not enclose a sign change."""


class ConfigurationError(ValueError):
    """Invalid grid, configuration or mismatched inputs."""


class ConvergenceError(RuntimeError):
    """A numerical procedure failed to reach its tolerance."""


class ConsistencyError(RuntimeError):
    """A computed quantity violates a physical constraint beyond tolerance."""
