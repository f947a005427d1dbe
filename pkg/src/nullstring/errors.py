"""Exception hierarchy shared across the package."""

from __future__ import annotations


class NullstringError(Exception):
    """Base class for all package errors."""


class ExprSyntaxError(NullstringError):
    """Raised on malformed expression source; carries line/column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UndeclaredIdentifierError(NullstringError):
    """An identifier does not resolve to a coordinate, parameter or named expression."""


class DomainError(NullstringError):
    """Evaluation left the valid domain (log of non-positive value, near-zero divisor, ...)."""


class OrderMismatchError(NullstringError):
    """Binary jet operation on jets of different truncation order."""


class DegenerateTetradError(NullstringError):
    """Tetrad component matrix is singular at the evaluation point."""


class ConstraintViolationError(NullstringError):
    """A declared parameter/domain constraint fails at load time."""


class CatalogSchemaError(NullstringError):
    """Catalog file does not validate; carries record id and field path when known."""

    def __init__(self, message: str, record_id: str | None = None, path: str | None = None):
        detail = message
        if record_id is not None:
            detail = f"record {record_id!r}: {detail}"
        if path is not None:
            detail = f"{detail} (at {path})"
        super().__init__(detail)
        self.record_id = record_id
        self.path = path


class MixedExpansionError(NullstringError):
    """Expansion witnesses neither vanish nor stay bounded away from zero across the sample."""


class ConsensusError(NullstringError):
    """Pointwise classifications disagree across the sample domain."""


class SamplingError(NullstringError):
    """Sample domain too constrained to place the requested number of points."""
