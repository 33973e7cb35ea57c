"""Exception hierarchy. The CLI maps each class to an exit code."""


class ObfDetectError(Exception):
    """Base class for all toolkit errors."""


class DataValidationError(ObfDetectError, ValueError):
    """Malformed corpus, bad labels, inconsistent shapes, invalid configs."""


class TrainingError(ObfDetectError, RuntimeError):
    """A model or pipeline could not be fitted on the data it was given."""


class SerializationError(ObfDetectError, ValueError):
    """Corrupt, truncated or unsupported saved artifact."""


class NotFittedError(ObfDetectError, AttributeError):
    """Estimator used before ``fit``."""
