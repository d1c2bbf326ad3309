"""Text grammar for polynomial and rational expressions.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/')? unary)*        juxtaposition multiplies
    unary  := ('+' | '-') unary | power
    power  := atom ('^' ['-'] INT)?
    atom   := INT | NAME | '(' expr ')'

Whitespace is insignificant.  Expressions are evaluated into any algebra that
provides the hooks of `Algebra`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import FieldDivisionError, MalformedExpressionError
from .polynomials import Poly
from .rational import RationalFunction

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


@dataclass
class Token:
    kind: str  # "int", "name", "op", "end"
    text: str
    column: int


def tokenize(text: str, line: int | None = None, column_offset: int = 0):
    pos = 0
    out = []
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = text[pos:].lstrip()
            col = n - len(bad) + 1 + column_offset
            raise MalformedExpressionError("unexpected character", line, col, bad[:1])
        start = m.start(m.lastindex) + 1 + column_offset
        if m.group(1):
            out.append(Token("int", m.group(1), start))
        elif m.group(2):
            out.append(Token("name", m.group(2), start))
        else:
            op = m.group(3)
            out.append(Token("op", "^" if op == "**" else op, start))
        pos = m.end()
    out.append(Token("end", "", n + 1 + column_offset))
    return out


class Algebra:
    """Evaluation hooks; subclasses map names and integers into a ring."""

    def const(self, n: int):
        raise NotImplementedError

    def name(self, name: str):
        raise KeyError(name)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def neg(self, a):
        return -a

    def pow(self, a, k: int):
        return a ** k


class _Parser:
    def __init__(self, tokens, algebra: Algebra, line):
        self.tokens = tokens
        self.i = 0
        self.alg = algebra
        self.line = line

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, message, tok=None):
        tok = tok or self.tok
        raise MalformedExpressionError(message, self.line, tok.column, tok.text or "<end>")

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def parse(self):
        if self.tok.kind == "end":
            self.fail("empty expression")
        value = self.expr()
        if self.tok.kind != "end":
            self.fail("unexpected token")
        return value

    def expr(self):
        value = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            rhs = self.term()
            value = self.alg.add(value, rhs) if op == "+" else self.alg.sub(value, rhs)
        return value

    def _starts_atom(self) -> bool:
        t = self.tok
        return t.kind in ("int", "name") or (t.kind == "op" and t.text == "(")

    def term(self):
        value = self.unary()
        while True:
            t = self.tok
            if t.kind == "op" and t.text in "*/":
                self.advance()
                rhs = self.unary()
                if t.text == "*":
                    value = self.alg.mul(value, rhs)
                else:
                    try:
                        value = self.alg.div(value, rhs)
                    except (FieldDivisionError, ZeroDivisionError):
                        self.fail("division by zero", t)
                    except TypeError:
                        self.fail("division is not allowed here", t)
            elif self._starts_atom():
                value = self.alg.mul(value, self.unary())
            else:
                return value

    def unary(self):
        t = self.tok
        if t.kind == "op" and t.text in "+-":
            self.advance()
            v = self.unary()
            return v if t.text == "+" else self.alg.neg(v)
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            sign = 1
            if self.tok.kind == "op" and self.tok.text == "-":
                self.advance()
                sign = -1
            t = self.tok
            if t.kind == "int":
                self.advance()
                k = int(t.text)
            elif t.kind == "op" and t.text == "(":
                self.advance()
                inner_sign = 1
                if self.tok.kind == "op" and self.tok.text == "-":
                    self.advance()
                    inner_sign = -1
                if self.tok.kind != "int":
                    self.fail("exponent must be an integer")
                k = inner_sign * int(self.advance().text)
                if self.tok.kind != "op" or self.tok.text != ")":
                    self.fail("expected ')'")
                self.advance()
            else:
                self.fail("exponent must be an integer")
            try:
                return self.alg.pow(base, sign * k)
            except (FieldDivisionError, ZeroDivisionError):
                self.fail("negative power of zero", t)
            except (TypeError, ValueError):
                self.fail("negative exponents are not allowed here", t)
        return base

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return self.alg.const(int(t.text))
        if t.kind == "name":
            self.advance()
            try:
                return self.alg.name(t.text)
            except KeyError:
                self.fail(f"unknown symbol {t.text!r}", t)
        if t.kind == "op" and t.text == "(":
            self.advance()
            v = self.expr()
            if not (self.tok.kind == "op" and self.tok.text == ")"):
                self.fail("expected ')'")
            self.advance()
            return v
        self.fail("expected a number, a symbol or '('")


def parse_expression(text: str, algebra: Algebra, line: int | None = None, column_offset: int = 0):
    tokens = tokenize(text, line, column_offset)
    return _Parser(tokens, algebra, line).parse()


class RationalAlgebra(Algebra):
    """Rational functions in `var` over a field; `generator` names the field generator."""

    def __init__(self, field, var: str = "t", generator: str = "g"):
        self.field = field
        self.var = var
        self.generator = generator

    def const(self, n: int):
        return RationalFunction.from_int(self.field, n)

    def name(self, name: str):
        if name == self.var:
            return RationalFunction.t(self.field)
        if name == self.generator and self.field.degree > 1:
            return RationalFunction.constant(self.field, self.field.gen)
        raise KeyError(name)

    def div(self, a, b):
        return a / b


class FieldConstantAlgebra(Algebra):
    """Integers and the generator of a field; yields raw field values wrapped in Poly."""

    def __init__(self, base, var: str = "x"):
        self.base = base
        self.var = var

    def const(self, n: int):
        return Poly(self.base, [self.base.from_int(n)])

    def name(self, name: str):
        if name == self.var:
            return Poly.x(self.base)
        raise KeyError(name)

    def div(self, a, b):
        raise TypeError("division")

    def pow(self, a, k):
        if k < 0:
            raise ValueError("negative exponent")
        return a ** k


def parse_rational(text: str, field, var: str = "t", generator: str = "g",
                   line: int | None = None, column_offset: int = 0) -> RationalFunction:
    return parse_expression(text, RationalAlgebra(field, var, generator), line, column_offset)
