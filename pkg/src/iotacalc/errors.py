"""Exception types shared across the toolkit."""

from __future__ import annotations

from dataclasses import dataclass


class LogicError(Exception):
    """Base class for every error raised by iotacalc."""

    kind = "error"


class CaptureError(LogicError):
    kind = "capture"


class ArityMismatch(LogicError):
    kind = "arity"


class UnknownRuleName(LogicError):
    kind = "unknown-rule"


class UninterpretedSymbol(LogicError):
    kind = "uninterpreted"


class ResourceLimit(LogicError):
    kind = "resource-limit"


@dataclass(frozen=True)
class SourceSpan:
    byte_start: int
    byte_end: int
    line: int
    column: int

    def __post_init__(self):
        if self.byte_start > self.byte_end:
            raise ValueError("byte_start must not exceed byte_end")


class ParseError(LogicError):
    kind = "parse"

    def __init__(self, span: SourceSpan, expected, found: str, hint: str | None = None):
        self.span = span
        self.expected = list(expected) or ["valid input"]
        self.found = found
        self.hint = hint
        msg = f"{span.line}:{span.column}: expected {' or '.join(self.expected)}, found {found}"
        if hint:
            msg += f" ({hint})"
        super().__init__(msg)


class RuleError(LogicError):
    """A rule cannot be applied; ``reason`` is one of the CheckReport reason names."""

    kind = "rule"

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}" if detail else reason)


class Exhausted(LogicError):
    """Bounded proof search gave up; ``frontier`` holds open sequents at the depth limit."""

    kind = "exhausted"

    def __init__(self, frontier=(), depth: int = 0):
        self.frontier = list(frontier)
        self.depth = depth
        super().__init__(f"search exhausted at depth {depth}")


class BudgetExhausted(LogicError):
    kind = "budget"

    def __init__(self, partial, remaining_violations=()):
        self.partial = partial
        self.remaining_violations = list(remaining_violations)
        super().__init__("fresh constant budget exhausted")
