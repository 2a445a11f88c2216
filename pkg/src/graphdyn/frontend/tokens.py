"""Lexer for the dynamic-graph DSL.

Token types are plain strings: keywords and operators use their own text
("forall", "=="), everything else is one of "ident", "intlit", "floatlit", "eof".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from .diagnostics import Diagnostic, Span, error

KEYWORDS = {
    "function",
    "Dynamic",
    "Static",
    "Incremental",
    "Decremental",
    "Batch",
    "OnAdd",
    "OnDelete",
    "forall",
    "for",
    "fixedPoint",
    "until",
    "in",
    "if",
    "else",
    "while",
    "return",
    "Min",
    "Max",
    "int",
    "bool",
    "long",
    "float",
    "double",
    "node",
    "edge",
    "Graph",
    "propNode",
    "propEdge",
    "updates",
}

# Longest-match-first operator table.
OPERATORS = [
    "&&", "||", "<=", ">=", "==", "!=", "++", "+=", "-=",
    "+", "-", "*", "/", "%", "<", ">", "=", "!", ".", ",",
    ";", ":", "(", ")", "{", "}", "[", "]",
]


@dataclass(frozen=True)
class Token:
    type: str  # keyword text, operator text, or "ident" / "intlit" / "floatlit" / "eof"
    text: str
    span: Span

    def __repr__(self) -> str:
        return f"Token({self.type!r}, {self.text!r}, {self.span})"


def tokenize(source: str) -> Tuple[List[Token], List[Diagnostic]]:
    tokens: List[Token] = []
    diagnostics: List[Diagnostic] = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
            continue
        span = (line, col)
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            tokens.append(Token(word if word in KEYWORDS else "ident", word, span))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            is_float = False
            if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                is_float = True
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    is_float = True
                    j = k
                    while j < n and source[j].isdigit():
                        j += 1
            text = source[i:j]
            tokens.append(Token("floatlit" if is_float else "intlit", text, span))
            col += j - i
            i = j
            continue
        for op in OPERATORS:
            if source.startswith(op, i):
                tokens.append(Token(op, op, span))
                i += len(op)
                col += len(op)
                break
        else:
            diagnostics.append(error(f"illegal character {ch!r}", span))
            i += 1
            col += 1
    tokens.append(Token("eof", "", (line, col)))
    return tokens, diagnostics
