"""Exception hierarchy.

Validation problems (bad input shapes, labels, cell values) derive from
``ValidationError``; numeric failures (non-convergence, undefined distances,
degenerate spectra) derive from ``NumericError``. The CLI maps the two
families to exit codes 1 and 2.
"""


class SemmapError(Exception):
    pass


class ValidationError(SemmapError, ValueError):
    pass


class ShapeError(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericError(SemmapError, ArithmeticError):
    pass


class ConvergenceError(NumericError):
    def __init__(self, message, residual):
        self.residual = residual
        super().__init__(f"{message} (achieved residual {residual:.3e})")


class UndefinedDistanceError(NumericError):
    pass


class DegenerateInputError(NumericError):
    pass


class DisconnectedGraphError(NumericError):
    def __init__(self, component_sizes):
        self.component_sizes = tuple(component_sizes)
        super().__init__(
            "neighbourhood graph is disconnected; component sizes "
            f"{list(self.component_sizes)} (try a larger k)"
        )
