"""Discrete variational calculus on a one-dimensional lattice.

The shift S maps n to n+1 and u[j] to u[j+1].  The role of the total
derivative is played by the forward difference S - id.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, NotASymmetryError
from .expr import INDEP, SLOT, ZERO, Add, Expr, LatticeSpace, Mul, Neg, sum_exprs


def shift(e, k: int, space: LatticeSpace) -> Expr:
    """S^k: n -> n + k and u[j] -> u[j + k]."""
    e = Expr.coerce(e)
    if k == 0 or not e:
        return e
    bindings = {}
    for s in e.symbols():
        if s.kind == INDEP:
            bindings[s] = Expr.sym(s) + k
        elif s.kind == SLOT:
            bindings[s] = Expr.sym(space.slot(s.slot, s.orders[0] + k))
    return e.subs(bindings)


def difference(e, space: LatticeSpace) -> Expr:
    """(S - id)(e)."""
    e = Expr.coerce(e)
    return shift(e, 1, space) - e


def _slots(e: Expr):
    return [s for s in e.symbols() if s.kind == SLOT]


def _antidifference_in_n(r: Expr, space: LatticeSpace) -> Expr:
    n = space.n_symbol
    P = ZERO
    while r:
        d = r.degree_in(n)
        lead = r.coefficients_in(n)[d]
        term = lead * Expr.sym(n) ** (d + 1) * Fraction(1, d + 1)
        P = P + term
        r = r - difference(term, space)
    return P


def anti_difference(e, space: LatticeSpace):
    """Find M with (S - id)(M) == e, peeling the highest slot first.

    Returns (M, remainder); the remainder is zero exactly when e was
    recognized as a difference.
    """
    e = Expr.coerce(e)
    M = ZERO
    floor = min((s.orders[0] for s in _slots(e)), default=0)
    while e:
        slots = _slots(e)
        if not slots:
            return M + _antidifference_in_n(e, space), ZERO
        top = max(s.orders[0] for s in slots)
        bottom = min(s.orders[0] for s in slots)
        # a difference (S - id)(M) never reaches below the lowest slot of M
        if top == bottom or bottom < floor:
            return M, e
        h = Expr({m: c for m, c in e.raw().items() if any(s.kind == SLOT and s.orders[0] == top for s, _ in m)})
        mh = shift(h, -1, space)
        M = M + mh
        e = e - h + mh
    return M, ZERO


@dataclass(frozen=True)
class DiscreteLagrangian:
    """L(n, u[0], ..., u[width]) for the dependent variable ``var``."""

    width: int
    expr: Expr
    space: LatticeSpace
    var: int = 0

    def __post_init__(self):
        if self.width < 1:
            raise DomainError("stencil width must be >= 1")
        expr = Expr.coerce(self.expr)
        for s in _slots(expr):
            if s.slot != self.var or not 0 <= s.orders[0] <= self.width:
                raise DomainError(f"{s} is outside the stencil u[0..{self.width}]")
        object.__setattr__(self, "expr", expr)


@dataclass(frozen=True)
class DiscreteSymmetry:
    Q: Expr

    def __post_init__(self):
        object.__setattr__(self, "Q", Expr.coerce(self.Q))


def discrete_euler_lagrange(L: DiscreteLagrangian) -> Expr:
    """E(L) = sum_j S^{-j}(dL/du[j])."""
    return _euler(L.expr, L.var, L.space)


def _euler(expr: Expr, var: int, space: LatticeSpace) -> Expr:
    out = ZERO
    for s in sorted(_slots(expr)):
        if s.slot == var:
            out = out + shift(expr.diff(s), -s.orders[0], space)
    return out


def discrete_euler(expr, space: LatticeSpace, var: int = 0) -> Expr:
    """Discrete variational derivative of an arbitrary stencil expression."""
    return _euler(Expr.coerce(expr), var, space)


def prolong_discrete(L: DiscreteLagrangian, Q) -> Expr:
    """pr Q(L) = sum_j dL/du[j] * S^j(Q)."""
    Q = Expr.coerce(Q)
    sp = L.space
    return sum_exprs(L.expr.diff(s) * shift(Q, s.orders[0], sp) for s in sorted(_slots(L.expr)))


def _summation_boundary(L: DiscreteLagrangian, Q: Expr) -> Expr:
    """A with pr Q(L) = E(L) Q + (S - id)(A)."""
    sp = L.space
    A = ZERO
    for s in sorted(_slots(L.expr)):
        j = s.orders[0]
        a = L.expr.diff(s)
        if j > 0:
            for k in range(j):
                A = A + shift(a, k - j, sp) * shift(Q, k, sp)
        elif j < 0:
            for k in range(j, 0):
                A = A - shift(a, k - j, sp) * shift(Q, k, sp)
    return A


@dataclass(frozen=True)
class FirstIntegral:
    """I with (S - id)(I) = E(L) Q; ``residual`` is that difference, zero when certified."""

    value: Expr
    residual: Expr
    lagrangian: DiscreteLagrangian
    symmetry: DiscreteSymmetry

    @property
    def certified(self) -> bool:
        return self.residual.is_zero()

    def tree(self):
        """Unevaluated (S - id)(I) - E(L) Q for randomized checking."""
        sp = self.lagrangian.space
        E = discrete_euler_lagrange(self.lagrangian)
        return Add((shift(self.value, 1, sp), Neg(self.value), Neg(Mul((E, self.symmetry.Q)))))


def discrete_first_integral(L: DiscreteLagrangian, Q) -> FirstIntegral:
    if not isinstance(Q, DiscreteSymmetry):
        Q = DiscreteSymmetry(Q)
    sp = L.space
    M, rest = anti_difference(prolong_discrete(L, Q.Q), sp)
    if rest:
        raise NotASymmetryError("pr Q(L) is not a total difference", rest)
    I = M - _summation_boundary(L, Q.Q)
    residual = difference(I, sp) - discrete_euler_lagrange(L) * Q.Q
    return FirstIntegral(I, residual, L, Q)


__all__ = [
    "shift",
    "difference",
    "anti_difference",
    "DiscreteLagrangian",
    "DiscreteSymmetry",
    "discrete_euler_lagrange",
    "discrete_euler",
    "prolong_discrete",
    "FirstIntegral",
    "discrete_first_integral",
]
