"""Exception hierarchy shared by the package."""


class ArrayPatError(Exception):
    """Base class for all errors raised by arraypat."""


class FormatError(ArrayPatError, ValueError):
    """Malformed text input (ragged rows, bad variable tokens, ...)."""


class DomainError(ArrayPatError, ValueError):
    """A symbol lies outside the alphabet an operation was given."""


class IncompleteSubstitutionError(ArrayPatError, KeyError):
    """A substitution has no image for some variable of the pattern."""

    def __str__(self):
        return Exception.__str__(self)


class MorphismError(ArrayPatError, ValueError):
    """A substitution is not uniform where a two-dimensional morphism is required."""


class CapacityError(ArrayPatError, RuntimeError):
    """An enumeration would exceed its configured size guard."""


class UnsupportedOperationError(ArrayPatError):
    """The requested construction does not exist for this mode/direction."""


class ConfigurationError(ArrayPatError, ValueError):
    """Operands were enumerated under incompatible bounds or alphabets."""
