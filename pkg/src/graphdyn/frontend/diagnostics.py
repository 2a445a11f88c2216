"""Source spans and diagnostics shared by the lexer, parser, and checker."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

Span = Tuple[int, int]  # (line, column), both 1-based


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str
    span: Span
    expected: Tuple[str, ...] = ()

    def __str__(self) -> str:
        base = f"{self.span[0]}:{self.span[1]}: {self.severity}: {self.message}"
        if self.expected:
            base += f" (expected {', '.join(self.expected)})"
        return base


def error(message: str, span: Span, expected: Tuple[str, ...] = ()) -> Diagnostic:
    return Diagnostic("error", message, span, expected)
