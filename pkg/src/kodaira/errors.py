"""Exception hierarchy shared by every module."""


class KodairaError(Exception):
    """Base class; `code` is a stable machine-readable identifier."""

    code = "ERROR"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class DomainError(KodairaError, ValueError):
    code = "DOMAIN_ERROR"


class DomainMismatchError(DomainError):
    code = "DOMAIN_MISMATCH"


class FieldDivisionError(KodairaError, ZeroDivisionError):
    code = "DIVISION_BY_ZERO"


class NotApplicableError(KodairaError):
    code = "NOT_APPLICABLE"


class InternalConsistencyError(KodairaError, AssertionError):
    code = "INTERNAL_CONSISTENCY"


class ParseError(KodairaError, ValueError):
    """Input text rejected; carries a position and the offending token."""

    code = "PARSE_ERROR"

    def __init__(self, message, line=None, column=None, token=None, code=None):
        if code is not None:
            self.code = code
        self.line = line
        self.column = column
        self.token = token
        where = ""
        if line is not None:
            where = f" at line {line}, column {column}"
        tok = f" near {token!r}" if token is not None else ""
        super().__init__(f"{message}{where}{tok}")
        self.message = message

    def to_dict(self):
        return {
            "error": self.code,
            "message": self.message,
            "line": self.line,
            "column": self.column,
            "token": self.token,
        }


class UnknownKeyError(ParseError):
    code = "UNKNOWN_KEY"


class NonPrimeError(ParseError):
    code = "NON_PRIME_CHARACTERISTIC"


class SingularModelError(ParseError, DomainError):
    code = "SINGULAR_MODEL"


class MalformedExpressionError(ParseError):
    code = "MALFORMED_EXPRESSION"
