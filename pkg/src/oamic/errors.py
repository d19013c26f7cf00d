"""Exception hierarchy shared by all oamic modules."""


class OamicError(Exception):
    """Base class for every error raised by this package."""


class InvalidDimensionError(OamicError):
    """Operator or state dimension below the supported minimum."""


class ShapeError(OamicError):
    """Dimension or support mismatch between operands."""


class DensityValidationError(OamicError):
    """A density-matrix invariant is violated.

    ``violation`` holds the measured magnitude of the violated invariant
    (max Hermiticity defect, trace defect, or most negative eigenvalue).
    """

    def __init__(self, message, violation):
        super().__init__(message)
        self.violation = float(violation)


class NotHermitianError(DensityValidationError):
    pass


class TraceNotOneError(DensityValidationError):
    pass


class NotPSDError(DensityValidationError):
    pass


class ChannelSpecError(OamicError):
    """Spillover probabilities are negative or not trace preserving."""


class DegenerateChannelError(OamicError):
    """Survival and crosstalk amplitudes both vanish; output undefined."""


class IllConditionedError(OamicError):
    """A ratio quantity is undefined (numerator and denominator vanish)
    or a matrix element needed for recovery sits below its floor."""


class IllPosedError(OamicError):
    """State retrieval cannot proceed (vanishing corner element)."""


class SingularSystemError(OamicError):
    """A retrieval linear system is rank deficient or lost equations."""


class NotNormalizedError(OamicError):
    """Logical amplitudes do not have unit norm."""


class UnknownSyndromeError(OamicError):
    """Syndrome label not produced by the given code."""


class InsufficientDataError(OamicError):
    """Too few data points for a least-squares fit."""


class ConfigError(OamicError):
    """Run configuration is malformed or carries unknown keys."""
