"""Exact polynomial expressions over independent variables and jet coordinates.

An :class:`Expr` is always stored in canonical form: a mapping from monomials
to nonzero :class:`fractions.Fraction` coefficients.  A monomial is a tuple of
``(Symbol, exponent)`` pairs sorted by symbol, so two expressions compare equal
exactly when they are equal as polynomials.

The small tree classes (:class:`Add`, :class:`Mul`, :class:`Pow`, :class:`Neg`,
:class:`Num`, :class:`Var`) describe *unevaluated* arithmetic.  The parser
produces them, and the certificate builders use them so that randomized
evaluation can check an identity without going through the canonicalizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

INDEP = 0
JET = 1
SLOT = 2


@dataclass(frozen=True, order=True)
class Symbol:
    """A polynomial variable.

    ``kind`` is INDEP (independent variable or lattice site), JET (jet
    coordinate ``u^i_J`` with derivative counts ``orders``) or SLOT (lattice
    value ``u[k]`` with ``orders == (k,)``).  ``slot`` is the declaration index
    of the variable.  Field order gives the canonical symbol order.
    """

    kind: int
    slot: int
    orders: tuple = ()
    name: str = ""
    axes: tuple = field(default=(), compare=False)

    @property
    def order(self) -> int:
        return sum(self.orders) if self.kind == JET else 0

    def with_orders(self, orders) -> "Symbol":
        return Symbol(self.kind, self.slot, tuple(orders), self.name, self.axes)

    def __str__(self):
        if self.kind == INDEP:
            return self.name
        if self.kind == SLOT:
            return f"{self.name}[{self.orders[0]}]"
        if not any(self.orders):
            return self.name
        wrt = [ax for ax, k in zip(self.axes, self.orders) for _ in range(k)]
        return f"d({self.name};{','.join(wrt)})"

    def __repr__(self):
        return f"Symbol({self})"


Monomial = tuple  # tuple[tuple[Symbol, int], ...], sorted by symbol
Scalar = Union[int, Fraction]


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for s, k in b:
        out[s] = out.get(s, 0) + k
    return tuple(sorted(out.items()))


def mono_degree(m: Monomial) -> int:
    return sum(k for _, k in m)


def mono_sort_key(m: Monomial):
    """Graded lex: higher total degree first, then lex over the symbol order."""
    return (-mono_degree(m), tuple((s, -k) for s, k in m))


def _as_fraction(value) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, Rational):
        raise TypeError(f"exact rational expected, got {type(value).__name__}")
    return Fraction(value)


class Expr:
    """Immutable polynomial with rational coefficients, always canonical."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = Fraction(c)
        self._terms = clean
        self._hash = None

    # -- construction -------------------------------------------------
    @classmethod
    def const(cls, value) -> "Expr":
        value = _as_fraction(value)
        return cls({(): value}) if value else ZERO

    @classmethod
    def sym(cls, symbol: Symbol) -> "Expr":
        return cls({((symbol, 1),): Fraction(1)})

    @classmethod
    def coerce(cls, value) -> "Expr":
        if isinstance(value, Expr):
            return value
        if isinstance(value, Symbol):
            return cls.sym(value)
        if isinstance(value, Node):
            return canonicalize(value)
        return cls.const(value)

    # -- inspection ---------------------------------------------------
    def items(self):
        """(monomial, coefficient) pairs in canonical print order."""
        return sorted(self._terms.items(), key=lambda mc: mono_sort_key(mc[0]))

    def raw(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def symbols(self) -> frozenset:
        return frozenset(s for m in self._terms for s, _ in m)

    def degree(self) -> int:
        return max((mono_degree(m) for m in self._terms), default=0)

    def degree_in(self, symbol: Symbol) -> int:
        return max((dict(m).get(symbol, 0) for m in self._terms), default=0)

    def __len__(self):
        return len(self._terms)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = _coerce_operand(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return Expr(out)

    __radd__ = __add__

    def __neg__(self):
        return Expr({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = _coerce_operand(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_operand(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_operand(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Expr(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or isinstance(k, bool) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = _coerce_operand(other)
        if other is NotImplemented:
            return False
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- calculus and substitution -------------------------------------
    def diff(self, symbol: Symbol) -> "Expr":
        """Partial derivative with respect to one symbol."""
        out: dict = {}
        for m, c in self._terms.items():
            for idx, (s, k) in enumerate(m):
                if s == symbol:
                    rest = m[:idx] + ((s, k - 1),) + m[idx + 1:] if k > 1 else m[:idx] + m[idx + 1:]
                    out[rest] = out.get(rest, 0) + c * k
                    break
        return Expr(out)

    def coefficients_in(self, symbol: Symbol) -> dict:
        """Split as sum_k coeff_k * symbol**k; returns {k: coeff_k}."""
        parts: dict = {}
        for m, c in self._terms.items():
            d = dict(m)
            k = d.pop(symbol, 0)
            parts.setdefault(k, {})
            rest = tuple(sorted(d.items()))
            parts[k][rest] = parts[k].get(rest, 0) + c
        return {k: Expr(v) for k, v in parts.items()}

    def subs(self, bindings: Mapping[Symbol, "Expr"]) -> "Expr":
        """Simultaneous substitution of symbols by expressions."""
        if not bindings:
            return self
        bindings = {s: Expr.coerce(v) for s, v in bindings.items()}
        powers: dict = {}
        out = ZERO
        for m, c in self._terms.items():
            kept = []
            term = Expr.const(c)
            for s, k in m:
                if s in bindings:
                    key = (s, k)
                    if key not in powers:
                        powers[key] = bindings[s] ** k
                    term = term * powers[key]
                else:
                    kept.append((s, k))
            out = out + term * Expr({tuple(kept): Fraction(1)})
        return out

    def evaluate(self, point: Mapping[Symbol, Fraction]) -> Fraction:
        total = Fraction(0)
        for m, c in self._terms.items():
            v = c
            for s, k in m:
                try:
                    v *= Fraction(point[s]) ** k
                except KeyError:
                    raise KeyError(f"no value for symbol {s}") from None
            total += v
        return total

    # -- printing -----------------------------------------------------
    def __str__(self):
        from .printer import to_text

        return to_text(self)

    def __repr__(self):
        return f"Expr({self})"


def _coerce_operand(other):
    if isinstance(other, Expr):
        return other
    if isinstance(other, Symbol):
        return Expr.sym(other)
    if isinstance(other, Rational) and not isinstance(other, bool):
        return Expr.const(other)
    return NotImplemented


ZERO = Expr()
ONE = Expr({(): Fraction(1)})


# ---------------------------------------------------------------------------
# Unevaluated trees


class Node:
    """Base class for unevaluated arithmetic trees."""

    __slots__ = ()


@dataclass(frozen=True)
class Num(Node):
    value: Fraction


@dataclass(frozen=True)
class Var(Node):
    symbol: Symbol


@dataclass(frozen=True)
class Add(Node):
    items: tuple


@dataclass(frozen=True)
class Mul(Node):
    items: tuple


@dataclass(frozen=True)
class Pow(Node):
    base: object
    exponent: int


@dataclass(frozen=True)
class Neg(Node):
    item: object


Tree = Union[Node, Expr]


def canonicalize(e: Tree) -> Expr:
    """Expand a tree (or pass through an Expr) to its unique normal form."""
    if isinstance(e, Expr):
        return e
    if isinstance(e, Num):
        return Expr.const(e.value)
    if isinstance(e, Var):
        return Expr.sym(e.symbol)
    if isinstance(e, Add):
        out = ZERO
        for item in e.items:
            out = out + canonicalize(item)
        return out
    if isinstance(e, Mul):
        out = ONE
        for item in e.items:
            out = out * canonicalize(item)
        return out
    if isinstance(e, Pow):
        return canonicalize(e.base) ** e.exponent
    if isinstance(e, Neg):
        return -canonicalize(e.item)
    if isinstance(e, (Symbol, int, Fraction)):
        return Expr.coerce(e)
    raise TypeError(f"cannot canonicalize {type(e).__name__}")


def eval_at(e: Tree, point: Mapping[Symbol, Fraction]) -> Fraction:
    """Exact value of a tree or Expr; walks the tree without canonicalizing."""
    if isinstance(e, Expr):
        return e.evaluate(point)
    if isinstance(e, Num):
        return Fraction(e.value)
    if isinstance(e, Var):
        try:
            return Fraction(point[e.symbol])
        except KeyError:
            raise KeyError(f"no value for symbol {e.symbol}") from None
    if isinstance(e, Add):
        return sum((eval_at(i, point) for i in e.items), Fraction(0))
    if isinstance(e, Mul):
        v = Fraction(1)
        for i in e.items:
            v *= eval_at(i, point)
        return v
    if isinstance(e, Pow):
        return eval_at(e.base, point) ** e.exponent
    if isinstance(e, Neg):
        return -eval_at(e.item, point)
    if isinstance(e, (int, Fraction)):
        return Fraction(e)
    raise TypeError(f"cannot evaluate {type(e).__name__}")


def free_symbols(e: Tree) -> frozenset:
    if isinstance(e, Expr):
        return e.symbols()
    if isinstance(e, Var):
        return frozenset([e.symbol])
    if isinstance(e, (Add, Mul)):
        return frozenset().union(*(free_symbols(i) for i in e.items))
    if isinstance(e, Pow):
        return free_symbols(e.base)
    if isinstance(e, Neg):
        return free_symbols(e.item)
    return frozenset()


def substitute(e: Tree, bindings: Mapping[Symbol, Tree], space=None) -> Expr:
    """Simultaneous substitution followed by canonicalization.

    When ``space`` is given, every symbol introduced by a binding must belong
    to it.
    """
    bound = {s: canonicalize(v) for s, v in bindings.items()}
    if space is not None:
        from ..errors import UndeclaredSymbolError

        for s, v in bound.items():
            for t in v.symbols() | {s}:
                if not space.contains(t):
                    raise UndeclaredSymbolError(f"symbol {t} is not in the jet space")
    return canonicalize(e).subs(bound)


def sum_exprs(items: Iterable[Expr]) -> Expr:
    out = ZERO
    for i in items:
        out = out + i
    return out
