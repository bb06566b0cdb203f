"""Recursive-descent parser for the problem-language expression grammar.

    expr     := term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := '-' factor | base ('^' posint)?
    base     := rational | symbol | symbol '[' int ']'
              | 'd(' symbol (';' symbol (',' symbol)*)? ')' | '(' expr ')'
    rational := int ('/' posint)?

A leading unary minus is accepted anywhere a factor may start.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import NamedTuple

from ..errors import OrderOverflowError, ParseError, UndeclaredSymbolError
from .core import Add, Expr, Mul, Neg, Num, Pow, Var, canonicalize

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<float>\d+\.\d*|\.\d+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),;\[\]])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, line: int = 1, col: int = 1):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "float":
            raise ParseError("floating-point literals are not allowed; write p/q", line, col)
        if kind != "ws":
            tokens.append(Token(kind, chunk, line, col))
        for ch in chunk:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        pos = m.end()
    tokens.append(Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens, space, max_order):
        self.tokens = tokens
        self.i = 0
        self.space = space
        self.max_order = max_order

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, text) -> Token:
        if self.tok.text != text:
            shown = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {shown!r}")
        return self.advance()

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            if self.tok.text == "/":
                raise self.error("division is only allowed between integer literals")
            raise self.error(f"unexpected {self.tok.text!r}")
        return node

    def expr(self):
        items = [self.term()]
        while self.tok.text in ("+", "-"):
            op = self.advance().text
            t = self.term()
            items.append(t if op == "+" else Neg(t))
        return items[0] if len(items) == 1 else Add(tuple(items))

    def term(self):
        items = [self.factor()]
        while self.tok.text == "*":
            self.advance()
            items.append(self.factor())
        if self.tok.text == "/":
            raise self.error("division is only allowed between integer literals")
        return items[0] if len(items) == 1 else Mul(tuple(items))

    def factor(self):
        if self.tok.text == "-":
            self.advance()
            return Neg(self.factor())
        base = self.base()
        if self.tok.text == "^":
            self.advance()
            tok = self.tok
            if tok.kind != "int" or int(tok.text) < 1:
                raise self.error("exponent must be a positive integer")
            self.advance()
            return Pow(base, int(tok.text))
        return base

    def base(self):
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            value = Fraction(int(tok.text))
            if self.tok.text == "/":
                self.advance()
                den = self.tok
                if den.kind != "int":
                    raise self.error("division is only allowed between integer literals")
                if int(den.text) == 0:
                    raise self.error("division by zero", den)
                self.advance()
                value /= int(den.text)
            return Num(value)
        if tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "ident":
            self.advance()
            if tok.text == "d" and self.tok.text == "(":
                return self.derivative(tok)
            if self.tok.text == "(":
                raise self.error(f"function {tok.text!r} is not supported; expressions must be polynomial", tok)
            if self.tok.text == "[":
                return self.slot(tok)
            return Var(self.resolve(lambda: self.space.resolve_name(tok.text), tok))
        shown = tok.text or "end of input"
        raise self.error(f"unexpected {shown!r}")

    def derivative(self, start):
        self.expect("(")
        var = self.tok
        if var.kind != "ident":
            raise self.error("expected a dependent variable name")
        self.advance()
        axes = []
        if self.tok.text == ";":
            self.advance()
            while True:
                ax = self.tok
                if ax.kind != "ident":
                    raise self.error("expected an independent variable name")
                self.advance()
                axes.append(ax.text)
                if self.tok.text != ",":
                    break
                self.advance()
        self.expect(")")
        if len(axes) > self.max_order:
            raise self.error(
                f"derivative of order {len(axes)} exceeds the allowed order {self.max_order}", start
            )
        return Var(self.resolve(lambda: self.space.resolve_derivative(var.text, axes), start))

    def slot(self, name):
        self.expect("[")
        sign = 1
        if self.tok.text == "-":
            self.advance()
            sign = -1
        k = self.tok
        if k.kind != "int":
            raise self.error("expected an integer shift")
        self.advance()
        self.expect("]")
        return Var(self.resolve(lambda: self.space.resolve_slot(name.text, sign * int(k.text)), name))

    def resolve(self, thunk, tok):
        try:
            return thunk()
        except UndeclaredSymbolError as exc:
            raise UndeclaredSymbolError(str(exc), tok.line, tok.col) from None
        except OrderOverflowError as exc:
            raise ParseError(str(exc), tok.line, tok.col) from None


def parse_tree(text: str, space, max_order: int | None = None, line: int = 1, col: int = 1):
    """Parse to an unevaluated tree (no canonicalization)."""
    if max_order is None:
        max_order = getattr(space, "max_order", 0)
    return _Parser(tokenize(text, line, col), space, max_order).parse()


def parse(text: str, space, max_order: int | None = None, line: int = 1, col: int = 1) -> Expr:
    """Parse and canonicalize. ``max_order`` defaults to the space's headroom."""
    return canonicalize(parse_tree(text, space, max_order, line, col))
