"""
Exception hierarchy of the algebra engine.

Every engine failure derives from ``AlgebraError`` (itself a ``ValueError``),
so callers that only care about "bad input" can keep catching ``ValueError``.
The CLI maps all of them to exit code 2.
"""

from __future__ import annotations


class AlgebraError(ValueError):
    """Base class for all engine errors."""


class FieldMismatch(AlgebraError):
    """Scalars from different fields were combined."""


class DivisionByZero(AlgebraError):
    """Division by the zero scalar."""


class ShapeError(AlgebraError):
    """A tensor, matrix or document array has the wrong shape.

    Attributes:
        path: Location inside a document (e.g. ``maps.bracket_g[0]``), if known.
    """

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class SpaceMismatch(AlgebraError):
    """Two maps live on different split spaces or fields."""


class ArityCapExceeded(AlgebraError):
    """A multilinear map would exceed the configured arity cap."""


class CharacteristicTooSmall(AlgebraError):
    """The field characteristic divides a required denominator."""


class NotADeformationMap(AlgebraError):
    """A linear map was required to be a deformation map and is not."""


class InvalidOmega(AlgebraError):
    """An Omega structure fails the Leibniz identity."""


class NotMaurerCartan(AlgebraError):
    """Twisting was requested by an element with nonzero curvature defect."""


class InvalidExampleInput(AlgebraError):
    """Inputs of a zoo builder violate a named identity.

    Attributes:
        identity: Name of the violated identity.
    """

    def __init__(self, identity: str, detail: str = ""):
        self.identity = identity
        message = f"invalid example input: {identity} violated"
        super().__init__(f"{message} ({detail})" if detail else message)


class BudgetExceeded(AlgebraError):
    """An exhaustive scan would visit more candidates than allowed."""


class NotSymmetric(AlgebraError):
    """A bilinear form required to be symmetric is not."""


class ParseError(AlgebraError):
    """A document or scalar could not be parsed."""

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class UnknownCommand(AlgebraError):
    """The CLI received a subcommand it does not know."""


class ConfigurationError(AlgebraError):
    """An environment setting is malformed."""
