"""Exception types shared across the package."""
from __future__ import annotations


class CodeboundsError(Exception):
    """Base class for errors raised by this package."""


class ParseError(CodeboundsError, ValueError):
    """Malformed input file.

    ``kind`` is one of ``"header"``, ``"symbol-range"``, ``"duplicate"``,
    ``"length"``, ``"group"``.
    """

    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(message)


class UndefinedDistanceError(CodeboundsError, ValueError):
    """Minimum distance requested for a code with fewer than two words."""


class DimensionError(CodeboundsError, ValueError):
    """Operands disagree on word length or alphabet size."""


class ScaleError(CodeboundsError):
    """Instance is beyond desk scale and no explicit budget was given."""


class BudgetError(CodeboundsError):
    """A node or time budget was exhausted.

    Carries whatever was completed so far (for enumeration, a tuple of
    complete canonical codes); callers must treat the result as partial,
    never as an answer.
    """

    def __init__(self, message: str, nodes: int = 0, partial: object = None):
        self.nodes = nodes
        self.partial = partial
        super().__init__(message)


class ExtensionError(CodeboundsError, ValueError):
    """One-word extension is not defined for this input.

    ``kind`` is one of ``"size"`` (wrong code size), ``"profile"`` (no
    unique deficient symbol in some column), ``"distance"`` (the appended
    word violates the minimum distance).
    """

    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(message)


class StructureError(CodeboundsError, ValueError):
    """An incidence structure violates a required property."""


class RegistryMissError(CodeboundsError, KeyError):
    """A needed known value is absent from the registry."""
