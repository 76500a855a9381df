"""Exception types raised across the package."""


class NSITError(Exception):
    """Base class for all package errors."""


class DimensionError(NSITError, ValueError):
    """Dimension is invalid or two objects disagree on it."""


class InconsistentProbabilities(NSITError, ValueError):
    """A probability tuple does not sum to one (or is otherwise malformed)."""


class InvalidQuantumState(NSITError, ValueError):
    """Input lies outside the set of physical quantum states."""


class NotHermitian(NSITError, ValueError):
    pass


class EmptyConditional(NSITError, ValueError):
    """Conditioning removed every sample from an ensemble."""


class SamplerError(NSITError, RuntimeError):
    """A pseudorandom sampler failed to produce admissible draws."""


class SchemaError(NSITError, ValueError):
    """A file does not match the expected schema/version."""
