"""Parser for the concrete temporal-formula syntax.

Grammar (loosest binding first)::

    formula  := or_exp ('->' formula)?          right associative
    or_exp   := and_exp ('|' and_exp)*
    and_exp  := until_exp ('&' until_exp)*
    until_exp:= unary ('U' unary)*               right associative
    unary    := ('!' | 'X' | 'G' | 'F') unary | primary
    primary  := 'true' | 'false' | ident('#'suffix)? | '(' formula ')'

Identifiers are ``[A-Za-z_][A-Za-z0-9_]*`` with an optional ``#`` agent
suffix; ``G``, ``F``, ``X``, ``U``, ``true`` and ``false`` are reserved.
"""

from __future__ import annotations

import re

from .formula import (
    FALSE,
    TRUE,
    Atom,
    Finally,
    Formula,
    Globally,
    Implies,
    Next,
    Not,
    Or,
    And,
    Until,
    canonical,
    obligation_kind,
)


class LtlfSyntaxError(ValueError):
    """Syntax error carrying the character position in the input."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*(?:#[A-Za-z0-9_]+)?)"
    r"|(?P<arrow>->)"
    r"|(?P<op>[!&|()]))"
)

_RESERVED = {"G", "F", "X", "U", "true", "false"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:]
            if rest.strip() == "":
                break
            bad = pos + (len(rest) - len(rest.lstrip()))
            raise LtlfSyntaxError(f"unexpected character {text[bad]!r}", bad)
        pos = m.end()
        if m.lastgroup == "ident":
            word = m.group("ident")
            kind = "keyword" if word in _RESERVED else "ident"
            tokens.append((kind, word, m.start("ident")))
        elif m.lastgroup == "arrow":
            tokens.append(("op", "->", m.start("arrow")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, value, pos = self.peek()
        if kind != "op" or value != op:
            raise LtlfSyntaxError(f"expected {op!r}, found {value or 'end of input'!r}", pos)
        self.take()

    def formula(self) -> Formula:
        lhs = self.or_exp()
        kind, value, _ = self.peek()
        if kind == "op" and value == "->":
            self.take()
            return Implies(lhs, self.formula())
        return lhs

    def or_exp(self) -> Formula:
        parts = [self.and_exp()]
        while self.peek()[:2] == ("op", "|"):
            self.take()
            parts.append(self.and_exp())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def and_exp(self) -> Formula:
        parts = [self.until_exp()]
        while self.peek()[:2] == ("op", "&"):
            self.take()
            parts.append(self.until_exp())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def until_exp(self) -> Formula:
        lhs = self.unary()
        if self.peek()[:2] == ("keyword", "U"):
            self.take()
            return Until(lhs, self.until_exp())
        return lhs

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "op" and value == "!":
            self.take()
            return Not(self.unary())
        if kind == "keyword" and value in ("X", "G", "F"):
            self.take()
            wrap = {"X": Next, "G": Globally, "F": Finally}[value]
            return wrap(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        kind, value, pos = self.take()
        if kind == "keyword" and value == "true":
            return TRUE
        if kind == "keyword" and value == "false":
            return FALSE
        if kind == "ident":
            return Atom(value)
        if kind == "op" and value == "(":
            inner = self.formula()
            self.expect_op(")")
            return inner
        raise LtlfSyntaxError(
            f"expected a proposition or '(', found {value or 'end of input'!r}", pos
        )


def parse_ltlf(text: str, *, obligation_only: bool = True) -> Formula:
    """Parse and canonicalize a formula.

    With ``obligation_only`` (the default for rule definitions) the
    formula must have top-level shape ``G p`` or ``F p`` with ``p``
    free of temporal operators other than ``X``; pass ``False`` to
    build arbitrary formulas, e.g. for direct experimentation.
    """
    parser = _Parser(text)
    raw = parser.formula()
    kind, value, pos = parser.peek()
    if kind != "end":
        raise LtlfSyntaxError(f"unexpected trailing input {value!r}", pos)
    if obligation_only:
        obligation_kind(raw)
    return canonical(raw)
