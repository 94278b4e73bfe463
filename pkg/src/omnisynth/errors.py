"""Exception types raised by omnisynth."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class DegenerateDesignError(DomainError):
    """A regression design matrix is rank deficient (e.g. all distances equal)."""


class DegenerateResultError(DomainError):
    """Nothing usable remained to compute a result from (e.g. all samples below floor)."""


class ParseError(ValueError):
    """Malformed input file. Carries the 1-based line and column of the fault."""

    def __init__(self, message, path=None, line=None, column=None):
        self.path = path
        self.line = line
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
