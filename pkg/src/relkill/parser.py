"""Recursive-descent parser and canonical printer for rational expressions.

Grammar::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' nonneg-integer)?
    atom  := rational-literal | identifier | '(' expr ')'

Implicit multiplication is rejected.  ``^`` binds tighter than unary minus,
so ``-x^2`` is ``-(x^2)``.  Literals are integers or decimals (``0.25`` is
exactly 1/4); ``3/4`` is ordinary division.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .poly import Poly
from .ratfn import RatFn

__all__ = [
    "ExprSource",
    "ParseError",
    "parse_ratfn",
    "parse_poly",
    "format_ratfn",
    "format_poly",
]


class ParseError(ValueError):
    """Malformed expression; ``position`` is the byte offset of the problem."""

    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at offset {position}" + (f" in {text!r}" if text else ""))
        self.reason = message
        self.position = position


@dataclass(frozen=True)
class ExprSource:
    text: str
    variables: tuple[str, ...]


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.vars = tuple(variables)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, pos: int | None = None):
        if pos is None:
            pos = self.peek()[2]
        raise ParseError(msg, pos, self.text)

    def parse(self) -> RatFn:
        if self.peek()[0] == "end":
            self.error("empty expression")
        value = self.expr()
        kind, tok, pos = self.peek()
        if kind != "end":
            if kind in ("id", "num") or tok == "(":
                self.error("implicit multiplication is not allowed", pos)
            self.error(f"unexpected token {tok!r}", pos)
        return value

    def expr(self) -> RatFn:
        value = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RatFn:
        value = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op, pos = self.take()[1:]
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    self.error("division by the zero polynomial", pos)
                value = value / rhs
        return value

    def unary(self) -> RatFn:
        kind, tok, _ = self.peek()
        if kind == "op" and tok == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self) -> RatFn:
        base = self.atom()
        kind, tok, pos = self.peek()
        if kind == "op" and tok == "^":
            self.take()
            kind, tok, epos = self.peek()
            if kind != "num" or not tok.isdigit():
                self.error("exponent must be a nonnegative integer", epos)
            self.take()
            base = base ** int(tok)
            if self.peek()[0] == "op" and self.peek()[1] == "^":
                self.error("chained exponents need parentheses")
        return base

    def atom(self) -> RatFn:
        kind, tok, pos = self.take()
        if kind == "num":
            return RatFn.constant(self.vars, Fraction(tok))
        if kind == "id":
            if tok not in self.vars:
                raise ParseError(f"unknown identifier {tok!r}", pos, self.text)
            return RatFn.var(self.vars, tok)
        if kind == "op" and tok == "(":
            value = self.expr()
            k2, t2, p2 = self.take()
            if t2 != ")":
                self.error("expected ')'", p2)
            return value
        if kind == "end":
            self.error("unexpected end of expression", pos)
        self.error(f"unexpected token {tok!r}", pos)


def parse_ratfn(src: ExprSource | str, variables: Sequence[str] | None = None) -> RatFn:
    """Parse an expression into a normalized :class:`RatFn`."""
    if isinstance(src, ExprSource):
        text, variables = src.text, src.variables
    else:
        text = src
        if variables is None:
            raise TypeError("variables are required when parsing a plain string")
    if not text or not text.strip():
        raise ParseError("empty expression", 0, text)
    return _Parser(text, variables).parse()


def parse_poly(text: str, variables: Sequence[str]) -> Poly:
    f = parse_ratfn(text, variables)
    if not f.is_poly():
        raise ValueError(f"{text!r} is not a polynomial")
    return f.num.scale(Fraction(1) / f.den.constant_value())


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------

def _format_monomial(vars: tuple[str, ...], exps: tuple[int, ...]) -> str:
    parts = []
    for name, k in zip(vars, exps):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def _format_coef(c: Fraction) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for idx, (e, c) in enumerate(p.sorted_terms()):
        c = Fraction(c)
        neg = c < 0
        mag = -c if neg else c
        mono = _format_monomial(p.vars, e)
        if not mono:
            body = _format_coef(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_format_coef(mag)}*{mono}"
        if idx == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("-" if neg else "+") + body)
    return "".join(out)


def _simple_factor(p: Poly) -> bool:
    """True when ``.../p`` needs no parentheses: coefficient 1, one variable power."""
    if len(p.terms) != 1:
        return False
    (e, c), = p.terms.items()
    return c == 1 and sum(1 for k in e if k) == 1


def format_ratfn(f: RatFn | Poly) -> str:
    if isinstance(f, Poly):
        return format_poly(f)
    num = format_poly(f.num)
    if f.den.is_constant():
        return num
    if len(f.num.terms) > 1:
        num = f"({num})"
    den = format_poly(f.den)
    if not _simple_factor(f.den):
        den = f"({den})"
    return f"{num}/{den}"
