"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class SturmError(Exception):
    exit_code = 2
    reason = "precondition"


class ParseError(SturmError, ValueError):
    reason = "parse"


class PrecisionExhausted(SturmError, ArithmeticError):
    exit_code = 3
    reason = "precision_exhausted"


class Unsupported(SturmError):
    reason = "unsupported"


class NotExpansionOfOne(SturmError):
    reason = "not_expansion_of_one"


class FloorMismatch(SturmError):
    reason = "floor_mismatch"


class SlopeMismatch(SturmError):
    reason = "slope_mismatch"


class DivergentInput(SturmError):
    reason = "divergent_input"


class IdentityViolated(SturmError):
    exit_code = 4
    reason = "identity_violated"


class InequalityUnresolved(SturmError):
    exit_code = 4
    reason = "inequality_unresolved"
