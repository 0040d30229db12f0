# Copyright (c) Materials Virtual Lab.
# Distributed under the terms of the BSD License.

"""
Parser and evaluator for element expressions such as "1 + u*z" or
"z^3/(1+z)". The grammar is

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('+' | '-') factor | base ('^' ['-'] integer)?
    base   := integer | 'p' | 'z' | 'zeta' | 'u' | 's' | '(' expr ')'

Whitespace is insignificant. "**" is accepted for "^" so that sympy output
parses back. Expressions are evaluated directly into canonical FieldElems.
"""
from __future__ import annotations

import re
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from ramification.algebra.fields import Field, FieldElem

__author__ = "Materials Virtual Lab"
__version__ = "0.1"
__date__ = "Jun 3 2024"

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_]+)|(?P<op>\*\*|[-+*/^()]))")


class ExpressionSyntaxError(ValueError):
    """
    Raised for malformed expressions. The offending character offset is
    stored in position.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def tokenize(src: str) -> list[tuple[str, str, int]]:
    """
    Split src into (kind, text, position) tokens, closed by an "end" token.
    """
    tokens = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            pos = len(src)
            break
        m = _TOKEN.match(src, pos)
        if m is None:
            bad = pos + len(src[pos:]) - len(src[pos:].lstrip())
            raise ExpressionSyntaxError(f"Unexpected character {src[bad]!r}", bad)
        kind = m.lastgroup
        text = m.group(kind)
        tokens.append((kind, "^" if text == "**" else text, m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", pos))
    return tokens


class _Parser:
    def __init__(self, field: Field, src: str, s_power: int):
        self.field = field
        self.tokens = tokenize(src)
        self.i = 0
        self.s_power = s_power

    @property
    def current(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def accept(self, *ops: str) -> str | None:
        kind, text, _ = self.current
        if kind == "op" and text in ops:
            self.i += 1
            return text
        return None

    def expect(self, op: str) -> None:
        if self.accept(op) is None:
            kind, text, pos = self.current
            found = "end of input" if kind == "end" else repr(text)
            raise ExpressionSyntaxError(f"Expected {op!r}, found {found}", pos)

    def parse(self) -> FieldElem:
        value = self.expr()
        kind, text, pos = self.current
        if kind != "end":
            raise ExpressionSyntaxError(f"Unexpected token {text!r}", pos)
        return value

    def expr(self) -> FieldElem:
        value = self.term()
        while op := self.accept("+", "-"):
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> FieldElem:
        value = self.factor()
        while True:
            pos = self.current[2]
            op = self.accept("*", "/")
            if op is None:
                return value
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            elif rhs.is_zero:
                raise ZeroDivisionError(f"Division by zero at position {pos}")
            else:
                value = value / rhs

    def factor(self) -> FieldElem:
        if self.accept("-"):
            return -self.factor()
        if self.accept("+"):
            return self.factor()
        value = self.base()
        pos = self.current[2]
        if self.accept("^"):
            negative = self.accept("-") is not None
            kind, text, epos = self.current
            if kind != "num":
                raise ExpressionSyntaxError("Exponent must be an integer", epos)
            self.i += 1
            k = -int(text) if negative else int(text)
            if k < 0 and value.is_zero:
                raise ZeroDivisionError(f"Zero raised to a negative power at position {pos}")
            value = value**k
        return value

    def base(self) -> FieldElem:
        kind, text, pos = self.current
        fld = self.field
        if kind == "num":
            self.i += 1
            return fld(int(text))
        if kind == "name":
            self.i += 1
            if text == "p":
                return fld(fld.p)
            if text == "z":
                return fld.z
            if text == "zeta":
                return fld.zeta
            if text == "u":
                if not fld.with_u:
                    raise ExpressionSyntaxError("Generator 'u' is not adjoined", pos)
                return fld.u
            if text == "s":
                if fld.tower_level == 0:
                    raise ExpressionSyntaxError("Generator 's' is not adjoined", pos)
                return fld.s**self.s_power
            raise ExpressionSyntaxError(f"Unknown symbol {text!r}", pos)
        if self.accept("("):
            value = self.expr()
            self.expect(")")
            return value
        found = "end of input" if kind == "end" else repr(text)
        raise ExpressionSyntaxError(f"Unexpected {found}", pos)


def eval_expr(field: Field, src: str, s_power: int = 1) -> FieldElem:
    """
    Parse src and evaluate it in field.

    Args:
        field: Target field.
        src: Expression text.
        s_power: Evaluate the symbol s as s^s_power. Used to embed an
            expression written at tower level n into level n' > n, with
            s_power = p^(n' - n).

    Returns:
        Canonical FieldElem.
    """
    return _Parser(field, src, s_power).parse()
