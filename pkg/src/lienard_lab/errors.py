"""Exception taxonomy shared across the package."""


class LienardError(Exception):
    """Base class for all package errors."""


class StructuralError(LienardError):
    """A model definition is malformed (gaps, overlaps, bad segment domains)."""


class DomainError(LienardError):
    """Evaluation requested outside the model's validity interval (-d, d)."""


class NumericalError(LienardError):
    """A numerical procedure failed to converge (step underflow, quadrature)."""


class AnalysisError(LienardError):
    """A higher-level analysis could not complete.

    Carries the partial trajectory (if any) on the ``trajectory`` attribute so
    callers can inspect how far the integration got.
    """

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class NoRootError(AnalysisError):
    """A bracketed root equation had no sign change in the bracket."""


class UnknownModelError(LienardError):
    """Requested builtin model name does not exist."""


class ConfigError(LienardError):
    """Missing or invalid model parameters / run configuration."""
