"""Error types shared across the toolkit."""

from __future__ import annotations

from typing import Optional

from rpscov.spans import SourceSpan


class RpsError(Exception):
    """Base for all diagnostics carrying an optional source span."""

    def __init__(self, message: str, span: Optional[SourceSpan] = None) -> None:
        self.message = message
        self.span = span
        super().__init__(str(self))

    def __str__(self) -> str:
        if self.span is not None:
            return f"{self.span}: {self.message}"
        return self.message


class ParseError(RpsError):
    pass


class TypeCheckError(RpsError):
    """Static rejection; `witness` carries a counterexample value when the
    failure is a non-exhaustive match."""

    def __init__(
        self, message: str, span: Optional[SourceSpan] = None, witness: object = None
    ) -> None:
        self.witness = witness
        super().__init__(message, span)


class EvalError(RpsError):
    pass


class Panic(EvalError):
    pass


class FuelExhausted(EvalError):
    pass


class NotADecision(RpsError):
    """Raised when decision lowering is asked for an irrefutable pattern."""


class TooManyConditions(RpsError):
    """Raised when vector suggestion would need to enumerate more than the
    supported number of conditions."""


class StaleTraceError(RpsError):
    """Trace was produced for a different program than the one analyzed."""


class SuiteError(RpsError):
    """Malformed test-suite manifest or test case."""
