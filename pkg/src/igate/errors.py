"""Exception hierarchy shared by all igate modules."""

from __future__ import annotations


class IgateError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(IgateError):
    """Syntax or validation error in rule-language source text."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class GroundingError(IgateError):
    """Variable instantiation failed (empty domain, inexpressible head, ...)."""


class CircuitError(IgateError):
    """Program cannot be compiled into a gate network."""


class GuardError(IgateError):
    """A size guard was exceeded; carries a hint on how to override it."""


class UnresolvedGeneratorError(IgateError):
    """Propagation hit a fired generator with no choice and no scorer."""

    def __init__(self, generator_id: str, message: str):
        self.generator_id = generator_id
        super().__init__(message)


class VocabularyMismatchError(IgateError):
    """Equivalence check over programs with different ground atoms."""


class ProbabilityError(IgateError):
    """Undefined conditional, zero-mass event, or invalid joint table."""


class VectorError(IgateError):
    """Dimension mismatch or malformed concept-vector input."""
