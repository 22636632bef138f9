"""Exception types raised across the package."""


class AnticoordError(Exception):
    """Base class for every error raised by this package."""


class GraphError(AnticoordError, ValueError):
    pass


class SelfLoopError(GraphError):
    pass


class DuplicateArcError(GraphError):
    pass


class VertexOutOfRangeError(GraphError, IndexError):
    pass


class DirectednessMismatchError(GraphError):
    pass


class DirectedUnsupportedError(GraphError):
    """The operation is only defined for undirected graphs."""


class ColoringError(AnticoordError, ValueError):
    pass


class InvalidInitError(ColoringError):
    pass


class ParseError(AnticoordError, ValueError):
    """Malformed input text; ``lineno`` is 1-based, or None for whole-file errors."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class BudgetExceededError(AnticoordError):
    def __init__(self, needed, budget):
        self.needed = needed
        self.budget = budget
        super().__init__(f"search space of {needed} colorings exceeds budget {budget}")


class NoEquilibriumError(AnticoordError):
    pass


class TooManyVariablesError(AnticoordError, ValueError):
    pass


class OddOrderError(GraphError):
    pass


class TooLargeError(AnticoordError, ValueError):
    pass


class ContractViolationError(AnticoordError):
    """A gadget failed its exhaustive self-test."""


class NotStrictlyStableError(ColoringError):
    pass


class ExtractionUnsatisfiedError(AnticoordError):
    """A strict coloring decoded to an assignment that falsifies the formula."""
