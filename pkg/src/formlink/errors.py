"""Exception hierarchy shared across the package."""


class FormlinkError(Exception):
    """Base class for all package errors."""


class ConfigError(FormlinkError):
    """Invalid generator, model, or run configuration."""


class ValidationError(FormlinkError):
    """A document or record violates a structural invariant."""


class ParseError(FormlinkError):
    """A persisted file could not be parsed."""


class SplitError(FormlinkError):
    """A train/test split request cannot be satisfied."""


class SchemaError(FormlinkError):
    """A document references an unknown or empty category schema."""


class InputError(FormlinkError):
    """Model input assembly failed a precondition."""


class TruncationError(InputError):
    """A context does not fit within the maximum sequence length."""


class CoverageError(FormlinkError):
    """A gold entity's question label is missing from the question set."""


class CheckpointError(FormlinkError):
    """A checkpoint file is malformed or incompatible."""


class EvaluationError(FormlinkError):
    """Evaluation inputs are inconsistent with the checkpoint."""


class BenchmarkError(FormlinkError):
    """The benchmark could not produce a trustworthy measurement."""


class NumericError(FormlinkError):
    """A non-finite value appeared where finiteness is required."""
