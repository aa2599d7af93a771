"""Text grammar for polynomials and rationals.

    expr     := term (("+" | "-") term)*
    term     := factor ("*" factor)*
    factor   := base ("^" nat)?
    base     := var | rational | "(" expr ")" | ("-" | "+") factor
    rational := int ("/" nat)?

Whitespace is ignored.  Juxtaposition (``x y``, ``2x``) is a syntax error.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

from .core import MultiPoly
from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # pragma: no cover - the pattern always matches non-space
            raise ParseError("unexpected character", pos)
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3))
            tokens.append(("op", ch, m.start(3)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variable: Callable, constant: Callable):
        self.tokens = tokenize(text)
        self.i = 0
        self.variable = variable
        self.constant = constant

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0)
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r} (implicit multiplication is not allowed)",
                             tok[2])
        return value

    def expr(self):
        value = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            value = value * self.factor()
        return value

    def factor(self):
        value = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                raise ParseError("exponent must be a natural number", tok[2])
            value = value ** int(tok[1])
        return value

    def base(self):
        tok = self.take()
        kind, text, pos = tok
        if kind == "int":
            num = int(text)
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                den = self.take()
                if den[0] != "int":
                    raise ParseError("denominator must be a natural number", den[2])
                if int(den[1]) == 0:
                    raise ParseError("zero denominator", den[2])
                return self.constant(Fraction(num, int(den[1])))
            return self.constant(Fraction(num))
        if kind == "name":
            return self.variable(text, pos)
        if kind == "op" and text == "(":
            value = self.expr()
            self.expect(")")
            return value
        if kind == "op" and text in "+-":
            value = self.factor()
            return -value if text == "-" else value
        raise ParseError(f"unexpected token {text or 'end of input'!r}", pos)


def parse_poly(text: str, variables: Sequence[str]) -> MultiPoly:
    variables = tuple(variables)
    if not variables or len(set(variables)) != len(variables):
        raise ParseError("variable list must be nonempty and distinct")

    def variable(name, pos):
        if name not in variables:
            raise ParseError(f"unknown identifier {name!r}", pos)
        return MultiPoly.variable(name, variables)

    return _Parser(text, variable, lambda q: MultiPoly.constant(q, variables)).parse()


def parse_rational(text: str) -> Fraction:
    """Parse ``[+-]int[/nat]``."""
    m = re.fullmatch(r"\s*([+-]?)\s*(\d+)\s*(?:/\s*(\d+))?\s*", text)
    if not m:
        raise ParseError(f"not a rational literal: {text!r}", 0)
    den = int(m.group(3)) if m.group(3) else 1
    if den == 0:
        raise ParseError("zero denominator", text.index("/"))
    q = Fraction(int(m.group(2)), den)
    return -q if m.group(1) == "-" else q


def parse_operator(text: str, ring):
    """Parse an element of D<s,dt>; products are taken in the written order."""
    from .pbw import PBWOperator

    names = ring.all_names

    def variable(name, pos):
        if name not in names:
            raise ParseError(f"unknown identifier {name!r}", pos)
        return ring.gen(name)

    def constant(q):
        return PBWOperator(ring, {(0,) * ring.width: q})

    return _Parser(text, variable, constant).parse()
