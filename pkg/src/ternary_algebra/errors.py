"""Exception taxonomy shared by the library and the command line front end.

Each class carries the exit status and machine-readable code the CLI emits.
"""


class TernaryError(Exception):
    exit_code = 1
    code = "error"


class ParseError(TernaryError, ValueError):
    exit_code = 2
    code = "parse-error"


class PreconditionError(TernaryError, ValueError):
    exit_code = 3
    code = "precondition"


class NotInvertibleError(TernaryError, ArithmeticError):
    exit_code = 4
    code = "not-invertible"


class CapExceededError(TernaryError, ArithmeticError):
    exit_code = 5
    code = "cap-exceeded"
