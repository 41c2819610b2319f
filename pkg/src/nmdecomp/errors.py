"""Exception hierarchy.

Two families matter to callers: :class:`DataError` for malformed input
tables and :class:`MethodError` for numerical or method-specific failures
(degenerate margins, infeasible counterfactuals, non-convergence).
"""


class NMDecompError(Exception):
    """Base class for every error raised by this package."""


class DataError(NMDecompError, ValueError):
    """Input data does not describe a valid contingency table."""


class CsvFormatError(DataError):
    """A table file is malformed (ragged rows, non-numeric cells, ...)."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class NegativeCountError(CsvFormatError):
    """A cell of an input table holds a negative count."""


class MethodError(NMDecompError, ArithmeticError):
    """A numerical method cannot produce a result for the given input."""

    split = None
    where = None

    def with_context(self, split=None, where=None):
        """Attach the offending split ``(i, j)`` and/or a period description; return self.

        Context already present is kept, so the innermost caller wins.
        """
        if split is not None and self.split is None:
            self.split = split
            self.args = (f"{self.args[0]} [split i={split[0]}, j={split[1]}]",)
        if where is not None and self.where is None:
            self.where = where
            self.args = (f"{self.args[0]} [{where}]",)
        return self


class DegenerateMargins(MethodError):
    """The LL indicator is undefined because max and min attainable H,H coincide."""


class NegativeSortingSource(MethodError):
    """The NM closed form needs a source with non-negative sorting."""


class DegenerateSource(MethodError):
    """The source table has a zero head-room denominator in the NM closed form."""


class InfeasibleTarget(MethodError):
    """Target margins leave negative head-room for the H,H cell."""


class NegativeCellError(MethodError):
    """A counterfactual table reconstructed from tail sums has a negative cell."""

    def __init__(self, message, cell=None):
        self.cell = cell
        super().__init__(message)


class NotConverged(MethodError):
    """Iterative fitting hit its iteration cap."""

    def __init__(self, message, deviation=None, iterations=None):
        self.deviation = deviation
        self.iterations = iterations
        super().__init__(message)


class InfeasibleZeroPattern(MethodError):
    """A positive target total falls on an all-zero row or column of the source."""
