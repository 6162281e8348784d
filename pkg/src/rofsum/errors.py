"""Exception hierarchy.

Every error carries a stable ``code`` string; the CLI prints it on stderr so
scripts can branch on the failure kind without parsing messages.
"""


class RofsumError(Exception):
    code = "error"


class DivisionByZero(RofsumError, ZeroDivisionError):
    code = "division-by-zero"


class FieldMismatch(RofsumError, ValueError):
    code = "field-mismatch"


class NotMultilinear(RofsumError, ValueError):
    code = "not-multilinear"


class NotReadOnce(RofsumError, ValueError):
    code = "not-read-once"

    def __init__(self, message, var=None):
        super().__init__(message)
        self.var = var


class TooManyVariables(RofsumError, ValueError):
    code = "too-many-variables"


class NotMultiplicative(RofsumError, ValueError):
    code = "not-multiplicative"


class DegenerateLeaf(RofsumError, ValueError):
    code = "degenerate-leaf"


class WrongArity(RofsumError, ValueError):
    code = "wrong-arity"


class RootNotRepresentable(RofsumError):
    """A square root exists over the reals but is irrational.

    ``report`` holds whatever verdict was reached before the root was needed.
    """

    code = "root-not-representable"

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotExpressible(RofsumError):
    """Raised by a construction when the input provably has no certificate of that kind."""

    code = "not-expressible"

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InternalInvariantViolation(RofsumError, AssertionError):
    code = "internal-invariant"


class ResourceGuard(RofsumError):
    code = "resource-guard"


class ParseError(RofsumError, SyntaxError):
    code = "parse-error"

    def __init__(self, message, text="", pos=0):
        super().__init__(f"{message} at position {pos}")
        self.text = text
        self.pos = pos


class UnknownVariable(ParseError):
    code = "unknown-variable"
