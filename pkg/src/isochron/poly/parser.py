"""Recursive descent parser for the polynomial grammar::

    expr     := ["+"|"-"] term (("+"|"-") term)*
    term     := factor (("*"|"/") factor)*
    factor   := ("+"|"-") factor | base ("^" exponent)?
    base     := rational | ident | "I" | ident "(" args ")" | "(" expr ")"
    rational := int ("/" nat)?

Division is only accepted by a nonzero constant when parsing into a
polynomial ring.  The same parser drives :func:`evaluate_expression`, which
evaluates arbitrary arithmetic (including ``sqrt``) over a name space.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..arith import DivisionByZero

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>\*\*|[-+*/^(),])
    """,
    re.VERBOSE,
)


class PolySyntaxError(ValueError):
    def __init__(self, message, text="", offset=0):
        line = text.count("\n", 0, offset) + 1
        col = offset - (text.rfind("\n", 0, offset) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.column = col
        self.reason = message


class UnknownVariable(PolySyntaxError):
    def __init__(self, name, text="", offset=0):
        super().__init__(f"unknown variable {name!r}", text, offset)
        self.name = name


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            t = m.group(kind)
            toks.append(_Tok("op" if t == "**" else kind, "^" if t == "**" else t, pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text, sem):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.sem = sem

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t.kind != "op" or t.text != op:
            self.fail(f"expected {op!r}", t)
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise PolySyntaxError(f"{msg}, found {found}", self.text, tok.pos)

    def parse(self):
        if self.peek().kind == "end":
            self.fail("empty expression")
        v = self.expr()
        if self.peek().kind != "end":
            self.fail("unexpected token")
        return v

    def is_op(self, *ops):
        t = self.peek()
        return t.kind == "op" and t.text in ops

    def expr(self):
        neg = False
        if self.is_op("+", "-"):
            neg = self.take().text == "-"
        v = self.term()
        if neg:
            v = -v
        while self.is_op("+", "-"):
            op = self.take().text
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self):
        v = self.factor()
        while self.is_op("*", "/"):
            tok = self.take()
            rhs = self.factor()
            if tok.text == "*":
                v = v * rhs
            else:
                v = self.sem.div(v, rhs, self, tok)
        return v

    def factor(self):
        if self.is_op("-"):
            self.take()
            return -self.factor()
        if self.is_op("+"):
            self.take()
            return self.factor()
        base = self.base()
        if self.is_op("^"):
            tok = self.take()
            exp = self.exponent()
            return self.sem.pow(base, exp, self, tok)
        return base

    def exponent(self):
        if self.is_op("-"):
            self.take()
            return -self.exponent()
        t = self.peek()
        if t.kind == "num":
            self.take()
            return int(t.text)
        if self.is_op("("):
            self.take()
            v = self.expr()
            self.expect(")")
            return v
        if t.kind == "ident":
            return self.base()
        self.fail("expected an exponent")

    def base(self):
        t = self.take()
        if t.kind == "num":
            return self.sem.number(int(t.text), self, t)
        if t.kind == "ident":
            if self.is_op("("):
                self.take()
                args = [self.expr()]
                while self.is_op(","):
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                return self.sem.call(t.text, args, self, t)
            if t.text == "I":
                return self.sem.imaginary(self, t)
            return self.sem.name(t.text, self, t)
        if t.kind == "op" and t.text == "(":
            v = self.expr()
            self.expect(")")
            return v
        self.fail("expected a number, variable or '('", t)


class _RingSemantics:
    def __init__(self, ring):
        self.ring = ring

    def number(self, n, parser, tok):
        return self.ring.constant(n)

    def name(self, name, parser, tok):
        try:
            return self.ring.resolve(name)
        except KeyError:
            raise UnknownVariable(name, parser.text, tok.pos) from None

    def imaginary(self, parser, tok):
        try:
            return self.ring.imaginary_unit()
        except TypeError:
            raise PolySyntaxError(f"'I' is not available over {self.ring.domain.name}", parser.text, tok.pos) from None

    def call(self, fname, args, parser, tok):
        raise PolySyntaxError(f"function call {fname!r} not allowed in a polynomial", parser.text, tok.pos)

    def div(self, a, b, parser, tok):
        if not b.is_constant():
            raise PolySyntaxError("division by a non-constant polynomial", parser.text, tok.pos)
        if not b:
            raise PolySyntaxError("division by zero", parser.text, tok.pos)
        return a / b

    def pow(self, base, exp, parser, tok):
        if not isinstance(exp, int) or exp < 0:
            raise PolySyntaxError("exponent must be a natural number", parser.text, tok.pos)
        return base**exp


def parse(text: str, ring):
    """Parse ``text`` into a polynomial of ``ring``."""
    return _Parser(text, _RingSemantics(ring)).parse()


class _NamespaceSemantics:
    def __init__(self, namespace, functions, number, imaginary):
        self.ns = namespace
        self.functions = functions
        self._number = number
        self._imag = imaginary

    def number(self, n, parser, tok):
        return self._number(n)

    def name(self, name, parser, tok):
        if name not in self.ns:
            raise UnknownVariable(name, parser.text, tok.pos)
        return self.ns[name]

    def imaginary(self, parser, tok):
        if self._imag is None:
            raise PolySyntaxError("'I' is not available", parser.text, tok.pos)
        return self._imag

    def call(self, fname, args, parser, tok):
        fn = self.functions.get(fname)
        if fn is None:
            raise PolySyntaxError(f"unknown function {fname!r}", parser.text, tok.pos)
        return fn(*args)

    def div(self, a, b, parser, tok):
        try:
            return a / b
        except (ZeroDivisionError, DivisionByZero):
            raise PolySyntaxError("division by zero", parser.text, tok.pos) from None

    def pow(self, base, exp, parser, tok):
        return base**exp


def evaluate_expression(text: str, namespace: dict, *, functions=None, number=int, imaginary=None):
    """Evaluate ``text`` with names from ``namespace`` using Python arithmetic."""
    sem = _NamespaceSemantics(namespace, functions or {}, number, imaginary)
    return _Parser(text, sem).parse()
