"""Domain errors. All derive from ValueError so callers can catch broadly."""


class DimensionMismatchError(ValueError):
    """Tensor fields of an algebra context are ragged or inconsistent."""


class SizeLimitError(ValueError):
    """A size guard (partition size, word length, degree) was exceeded."""


class ExampleParameterError(ValueError):
    """Parameters passed to a catalog example are invalid."""


class PositivityError(ValueError):
    """A Gram matrix or positivity hypothesis is violated."""


class KindMismatchError(ValueError):
    """An operation was called on a context of the wrong kind."""


class SingularElementError(ValueError):
    """An algebra element that must be invertible is not."""


class PreconditionError(ValueError):
    """A structural precondition of an operation does not hold."""


class ConstructionError(ValueError):
    """A hypothesis of the C-deformed construction is violated."""

    def __init__(self, violations):
        self.violations = list(violations)
        names = ", ".join(f"{name} (residual {residual:.3g})" for name, residual in self.violations)
        super().__init__(f"Construction hypotheses violated: {names}")


class SpecParseError(ValueError):
    """A JSON algebra spec could not be parsed."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        location = f" (line {line}, column {column})" if line else ""
        super().__init__(f"{message}{location}")
