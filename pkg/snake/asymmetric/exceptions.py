"""Errors raised by snake.asymmetric."""


class AsymmetricError(ValueError):
    """Base class for input and semantic errors."""
    pass


class DimensionError(AsymmetricError):
    """Raised when points or descriptors disagree on dimension."""
    pass


class InvalidPointError(AsymmetricError):
    """Raised when coordinates are empty or not finite."""
    pass


class PointNotInTableError(AsymmetricError):
    """Raised when a point is not listed in a finite table."""
    pass


class PointNotInSetError(AsymmetricError):
    """Raised when a point is required to be a member of a subset."""
    pass


class EmptySampleError(AsymmetricError):
    """Raised when a sample, pair list or candidate list is empty."""
    pass


class DegenerateHullError(AsymmetricError):
    """Raised when all hull vertices coincide."""
    pass


class RayEscapesError(AsymmetricError):
    """Raised when no scaling of a set contains a point."""
    pass


class ScenarioError(AsymmetricError):
    """Raised when a scenario is well formed but cannot be run."""
    pass
