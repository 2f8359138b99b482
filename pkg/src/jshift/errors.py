"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class UnsupportedRepresentationError(TypeError):
    """The finite descriptions involved cannot express the requested result."""


class InconclusiveParametersError(ValueError):
    """Parameters are valid but too weak for the requested certificate."""


class SpecFormatError(ValueError):
    """A weight or vector file does not follow the documented schema."""


class GeneratorRefusal(RuntimeError):
    """A witness generator cannot meet a requested error budget."""


class DiagonalFailure(RuntimeError):
    """The diagonal combinator could not complete step ``m``."""

    def __init__(self, m, reason):
        super().__init__(f"diagonal step m={m} failed: {reason}")
        self.m = m
        self.reason = reason
