"""Exception hierarchy. Every error carries a short machine-readable ``code``."""


class PfaffkitError(Exception):
    code = "error"


class DomainError(PfaffkitError, ValueError):
    """Operands live over different coefficient domains or variable counts."""

    code = "domain_mismatch"


class BadPrimeError(PfaffkitError, ValueError):
    """A denominator vanishes modulo the requested prime; retry with another."""

    code = "bad_prime"


class DimensionError(PfaffkitError, ValueError):
    code = "dimension_mismatch"


class NotProjectiveError(PfaffkitError, ValueError):
    code = "not_projective"


class TrivialKernelError(PfaffkitError, ValueError):
    code = "trivial_kernel"


class CapExceededError(PfaffkitError, ValueError):
    code = "cap_exceeded"

    def __init__(self, message, required):
        super().__init__(message)
        self.required = required


class InternalConsistencyError(PfaffkitError, RuntimeError):
    code = "internal_consistency"


class ParseError(PfaffkitError, ValueError):
    code = "parse_error"

    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.message = message
        self.line = line
        self.column = column
