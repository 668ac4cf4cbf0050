"""Recursive-descent parser for LTLf formulas.

Grammar (lowest to highest precedence)::

    formula := or
    or      := and ("||" and)*
    and     := until ("&&" until)*
    until   := unary (("U" | "R") unary)*        right-associative
    unary   := "!" unary | "X" unary | "N" unary | "F" unary | "G" unary
             | "true" | "false" | ident | "(" formula ")"

``&``, ``|`` and ``~`` are accepted as spellings of ``&&``, ``||`` and ``!``.
The parser returns the raw syntax tree; call :func:`~ltlf_forward.formula.to_nnf`
to normalize it.
"""
from __future__ import annotations

import re

from . import formula as fm

KEYWORDS = {"X", "N", "F", "G", "U", "R", "true", "false"}

_TOKEN = re.compile(
    r"(?P<ws>\s+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>&&|\|\||[&|!~()])"
)
_ALIASES = {"&": "&&", "|": "||", "~": "!"}


class ParseError(ValueError):
    """Syntax error with a 1-based line/column position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


def _tokenize(text: str):
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unknown operator token {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind == "ws":
            for i, ch in enumerate(value):
                if ch == "\n":
                    line, line_start = line + 1, pos + i + 1
        else:
            value = _ALIASES.get(value, value)
            tokens.append((value, kind, line, pos - line_start + 1))
        pos = m.end()
    tokens.append((None, "eof", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str):
        _, _, line, col = self.tokens[self.i]
        raise ParseError(message, line, col)

    def expect(self, value: str):
        if self.peek() != value:
            found = self.peek()
            self.fail(f"expected {value!r}, found {'end of input' if found is None else repr(found)}")
        self.take()

    def formula(self) -> fm.Formula:
        left = self.conjunction()
        while self.peek() == "||":
            self.take()
            left = fm.raw_or(left, self.conjunction())
        return left

    def conjunction(self) -> fm.Formula:
        left = self.until()
        while self.peek() == "&&":
            self.take()
            left = fm.raw_and(left, self.until())
        return left

    def until(self) -> fm.Formula:
        left = self.unary()
        if self.peek() in ("U", "R"):
            op = self.take()[0]
            right = self.until()
            return fm.until(left, right) if op == "U" else fm.release(left, right)
        return left

    def unary(self) -> fm.Formula:
        value, kind, _, _ = self.tokens[self.i]
        if value == "!":
            self.take()
            return fm.raw_not(self.unary())
        if value in ("X", "N", "F", "G"):
            self.take()
            body = self.unary()
            return {
                "X": fm.next_,
                "N": fm.wnext,
                "F": fm.raw_eventually,
                "G": fm.raw_always,
            }[value](body)
        if value == "true":
            self.take()
            return fm.T
        if value == "false":
            self.take()
            return fm.F
        if value == "(":
            self.take()
            inner = self.formula()
            self.expect(")")
            return inner
        if kind == "ident" and value not in KEYWORDS:
            self.take()
            return fm.atom(value)
        if value is None:
            self.fail("unexpected end of input")
        self.fail(f"unexpected token {value!r}")


def parse(text: str) -> fm.Formula:
    """Parse ``text`` into a raw (pre-NNF) formula tree."""
    p = _Parser(text)
    result = p.formula()
    if p.peek() is not None:
        p.fail(f"unexpected token {p.peek()!r}")
    return result


def parse_nnf(text: str) -> fm.Formula:
    """Parse and convert to negation normal form."""
    return fm.to_nnf(parse(text))
