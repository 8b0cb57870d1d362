"""
Error types shared by the walk asymptotics pipeline.

Every error carries a machine-readable ``code`` (the class name) and the exit
code the command-line front end returns when the error reaches it.
"""

from typing import Optional


class WalkAsymptoticsError(Exception):
    """Base class for all pipeline errors."""

    exit_code = 1

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    @property
    def code(self) -> str:
        """Machine-readable error code."""
        return type(self).__name__


# Input and validation errors (exit code 1)


class ModelValidationError(WalkAsymptoticsError, ValueError):
    """A model description violates the walk model invariants."""


class InvalidModelFormat(ModelValidationError):
    """The model description is not a well-formed record."""


class ZeroStep(ModelValidationError):
    """The zero vector was listed as a step."""


class NonPositiveWeight(ModelValidationError):
    """A step weight is zero or negative."""


class EntryOutOfRange(ModelValidationError):
    """A step vector has an entry outside {-1, 0, 1}."""


class MissingForwardOrBackwardStep(ModelValidationError):
    """Some coordinate has no forward step or no backward step."""

    def __init__(self, axis: int, direction: Optional[str] = None):
        detail = f" ({direction} step missing)" if direction else ""
        super().__init__(f"Coordinate {axis} needs a step with entry +1 and a step with entry -1{detail}")
        self.axis = axis
        self.direction = direction


class UnsupportedClass(WalkAsymptoticsError, ValueError):
    """The operation is not defined for the model's symmetry class."""


class NonZeroDrift(WalkAsymptoticsError, ValueError):
    """The operation needs a zero-drift model."""


class UnknownExample(WalkAsymptoticsError, KeyError):
    """No corpus entry has the requested name."""

    def __str__(self) -> str:
        return self.message


class InvalidQuadratureSpec(WalkAsymptoticsError, ValueError):
    """Contour exponents or node counts are outside their admissible range."""


class ConfigurationError(WalkAsymptoticsError):
    """The configuration file is missing or malformed."""


# Fitting errors (exit code 1)


class InsufficientData(WalkAsymptoticsError):
    """The sequence is too short for the requested estimate."""


class NonPositiveTerms(WalkAsymptoticsError):
    """The estimate needs strictly positive terms."""


# Numerical errors (exit code 1)


class QuadratureUnderResolved(WalkAsymptoticsError):
    """The quadrature grid is coarser than the oscillation scale of the integrand."""


class SaddleConsistencyError(WalkAsymptoticsError):
    """Closed-form saddle data disagree with their finite-difference check."""


# Resource errors (exit code 3)


class ResourceLimit(WalkAsymptoticsError):
    """A computation would exceed its configured size cap."""

    exit_code = 3
