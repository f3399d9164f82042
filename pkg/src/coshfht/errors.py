"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain where an operation is defined."""


class ConvergenceError(RuntimeError):
    """Quadrature refinement failed to settle within the order cap."""


class SingularWeightError(ValueError):
    """A family weight vanishes at a sampling node."""


class MissingMomentError(ValueError):
    """The cosh moment of the source is required but was not supplied."""


class ComplexParseError(ValueError):
    """Malformed complex literal.

    Attributes
    ----------
    text : str
        The offending input.
    position : int
        Zero-based offset of the first character that could not be parsed.
    """

    def __init__(self, text, position, reason="unexpected character"):
        self.text = text
        self.position = position
        super().__init__(f"cannot parse {text!r} at position {position}: {reason}")


class RangeWarning(UserWarning):
    """Data does not satisfy the range condition of the d-inverse."""
