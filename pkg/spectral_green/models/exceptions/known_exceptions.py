class SpectralGreenException(Exception):
    """Base class for all spectral_green errors."""
    pass


class _WrappingException(SpectralGreenException):
    """Carries the lower-level failure that triggered the error."""

    def __init__(self, message="spectral_green operation failed", original_exception=None):
        message = f"{message}. Original exception: {str(original_exception)}" if original_exception else message
        super().__init__(message)
        self.original_exception = original_exception

##
### Operator and model construction exceptions
##

class ShapeMismatchException(SpectralGreenException):
    """Raised when operator or superoperator dimensions do not agree."""
    pass

class NotHermitianException(SpectralGreenException):
    """Raised when an operator flagged (or required to be) Hermitian is not."""
    pass

class InvalidDensityOperatorException(SpectralGreenException):
    """Raised when a density-like operator has the wrong trace or is not positive."""
    pass

class UnsupportedRepresentationException(SpectralGreenException):
    """Raised when a representation cannot describe the requested couplings or size."""
    pass

##
### Green function exceptions
##

class TracefulOperandException(SpectralGreenException):
    """Raised when a Green function is applied to an operand with nonzero trace."""
    pass

class SingularSystemException(_WrappingException):
    """Raised when the bordered system is numerically singular."""

    def __init__(self, message="bordered system is singular", condition_estimate=None, original_exception=None):
        if condition_estimate is not None:
            message = f"{message} (condition estimate {condition_estimate:.3e})"
        super().__init__(message, original_exception)
        self.condition_estimate = condition_estimate

class PoleShiftFailedException(SpectralGreenException):
    """Raised when every shift tried by the pole solver lands on a pole."""
    pass

class PoleProximityException(SpectralGreenException):
    """Raised when a rational expansion is evaluated too close to a pole."""
    pass

class MissingResiduesException(SpectralGreenException):
    """Raised when a rational expansion is requested from a pole set without residues."""
    pass

class GradingValidationException(SpectralGreenException):
    """Raised when a grading does not satisfy the projection inclusions."""

    def __init__(self, inclusion, deviation):
        super().__init__(f"Grading violates {inclusion} (deviation {deviation:.3e})")
        self.inclusion = inclusion
        self.deviation = deviation

##
### Oracle exceptions
##

class NonUniqueSteadyStateException(SpectralGreenException):
    """Raised when the generator kernel is not one-dimensional."""

    def __init__(self, singular_value_gap):
        super().__init__(f"Generator kernel is not one-dimensional (singular value gap {singular_value_gap:.3e})")
        self.singular_value_gap = singular_value_gap

class PropagationStepException(SpectralGreenException):
    """Raised when time propagation loses trace or positivity at a checkpoint."""
    pass

class VerificationFailedException(SpectralGreenException):
    """Raised when an oracle comparison fails its tolerance."""
    pass

##
### Parameter and configuration exceptions
##

class InvalidParameterException(SpectralGreenException):
    """Raised when a numerical parameter is out of its admissible range."""
    pass

class DegenerateParameterException(SpectralGreenException):
    """Raised when a closed form is evaluated at a degenerate parameter value."""
    pass

class InvalidGridException(SpectralGreenException):
    """Raised when a sweep grid is empty, malformed or not strictly monotone."""
    pass

class SizeGuardException(SpectralGreenException):
    """Raised when a dense route is requested beyond its size limit."""
    pass

class InvalidRunConfigException(_WrappingException):
    """Raised when a run configuration cannot be loaded or validated."""

    def __init__(self, message="run configuration is invalid", original_exception=None):
        super().__init__(message, original_exception)

class SolverFailedException(_WrappingException):
    """Raised when a banded or dense factorization fails."""

    def __init__(self, message="linear solver failed", original_exception=None):
        super().__init__(message, original_exception)
