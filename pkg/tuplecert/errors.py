class TupleCertError(Exception):
    """Base class for every error raised by tuplecert."""


# Input errors: the CLI maps these to exit code 65
class InputError(TupleCertError):
    pass


class ParseError(InputError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class TermTypeError(InputError):
    pass


class RuleError(InputError):
    pass


class ExpressionError(InputError):
    pass


class NegativeCoefficient(ExpressionError):
    pass


class ShapeMismatch(InputError):
    pass


class MissingSymbol(InputError):
    pass


# Evaluation errors
class UnboundVariable(TupleCertError):
    pass


class UnboundAtom(TupleCertError):
    pass


class UninstantiatedParameter(TupleCertError):
    pass


class NonIntegralValue(TupleCertError):
    pass


# Search errors
class SimplificationFailed(TupleCertError):
    pass


class SearchTimeout(TupleCertError):
    pass


class PreconditionViolated(TupleCertError):
    pass
