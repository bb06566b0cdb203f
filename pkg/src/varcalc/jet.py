"""Total derivatives, generalized vector fields and their prolongations."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError
from .expr import INDEP, JET, ZERO, Expr, JetSpace, sum_exprs
from .expr.core import mono_mul


@lru_cache(maxsize=65536)
def _total_derivative(e: Expr, axis: int, space: JetSpace) -> Expr:
    out: dict = {}
    for m, c in e.raw().items():
        for idx, (s, k) in enumerate(m):
            if s.kind == INDEP:
                if s.slot != axis:
                    continue
                new = ()
            elif s.kind == JET:
                new = ((space.prolong(s, axis), 1),)
            else:
                continue
            rest = m[:idx] + ((s, k - 1),) + m[idx + 1:] if k > 1 else m[:idx] + m[idx + 1:]
            term = mono_mul(rest, new)
            out[term] = out.get(term, 0) + c * k
    return Expr(out)


def total_derivative(e: Expr, axis, space: JetSpace) -> Expr:
    """D_axis e = de/dx_axis + sum over jets of u_{J+axis} * de/du_J."""
    return _total_derivative(Expr.coerce(e), space.axis_index(axis), space)


def total_derivative_multi(e: Expr, counts, space: JetSpace) -> Expr:
    """Composite total derivative D_J for a multi-index J."""
    e = Expr.coerce(e)
    for axis, k in enumerate(counts):
        for _ in range(k):
            e = _total_derivative(e, axis, space)
    return e


@dataclass(frozen=True)
class Current:
    """An n-component vector of expressions, a candidate conservation law."""

    components: tuple
    space: JetSpace

    def __post_init__(self):
        comps = tuple(Expr.coerce(c) for c in self.components)
        if len(comps) != self.space.n:
            raise DomainError(
                f"current has {len(comps)} components, the space has {self.space.n} independent variables"
            )
        object.__setattr__(self, "components", comps)

    @classmethod
    def zero(cls, space: JetSpace) -> "Current":
        return cls((ZERO,) * space.n, space)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __add__(self, other: "Current") -> "Current":
        return Current(tuple(a + b for a, b in zip(self, other)), self.space)

    def __sub__(self, other: "Current") -> "Current":
        return Current(tuple(a - b for a, b in zip(self, other)), self.space)

    def __neg__(self):
        return Current(tuple(-a for a in self), self.space)

    def scale(self, c) -> "Current":
        return Current(tuple(a * c for a in self), self.space)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)


def divergence(P: Current) -> Expr:
    return sum_exprs(total_derivative(c, lam, P.space) for lam, c in enumerate(P.components))


def divergence_terms(P: Current) -> list:
    """The individual D_lambda P^lambda, for building evaluation certificates."""
    return [total_derivative(c, lam, P.space) for lam, c in enumerate(P.components)]


@dataclass(frozen=True)
class GeneralizedField:
    """Vertical generalized vector field sum_i Q_i d/du^i (one Q per field)."""

    characteristics: tuple
    space: JetSpace

    def __post_init__(self):
        q = tuple(Expr.coerce(c) for c in self.characteristics)
        if len(q) != len(self.space.fields):
            raise DomainError(
                f"expected {len(self.space.fields)} characteristics, got {len(q)}"
            )
        object.__setattr__(self, "characteristics", q)

    def __iter__(self):
        return iter(self.characteristics)

    def __getitem__(self, i):
        return self.characteristics[i]


@dataclass(frozen=True)
class SymmetryCandidate:
    """Base field sum X^lam d/dx_lam + sum Y^i d/du^i plus a divergence term C.

    X may depend on the independent variables only.
    """

    X: tuple
    Y: tuple
    space: JetSpace
    C: tuple | None = None

    def __post_init__(self):
        sp = self.space
        X = tuple(Expr.coerce(v) for v in self.X)
        Y = tuple(Expr.coerce(v) for v in self.Y)
        C = tuple(Expr.coerce(v) for v in self.C) if self.C is not None else (ZERO,) * sp.n
        if len(X) != sp.n or len(C) != sp.n:
            raise DomainError("X and C need one component per independent variable")
        if len(Y) != len(sp.fields):
            raise DomainError("Y needs one component per dependent variable")
        for lam, comp in enumerate(X):
            bad = [s for s in comp.symbols() if s.kind != INDEP]
            if bad:
                raise DomainError(
                    f"X[{sp.independent[lam]}] depends on {bad[0]}; base components must be functions of x only"
                )
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "C", C)

    @property
    def divergence_term(self) -> Current:
        return Current(self.C, self.space)


def evolutionary_representative(s: SymmetryCandidate) -> GeneralizedField:
    """Q_i = Y^i - sum_lam X^lam u^i_lam."""
    sp = s.space
    Q = []
    for i, y in enumerate(s.Y):
        q = y
        for lam, x in enumerate(s.X):
            if x:
                q = q - x * Expr.sym(sp.prolong(sp.jet(i), lam))
        Q.append(q)
    return GeneralizedField(tuple(Q), sp)


def prolong_apply(Z: GeneralizedField, e: Expr) -> Expr:
    """pr Z(e) = sum_{i,J} D_J(Q_i) * de/du^i_J."""
    sp = Z.space
    e = Expr.coerce(e)
    out = ZERO
    for s in sorted(e.symbols()):
        if not sp.is_field_jet(s):
            continue
        q = Z[s.slot]
        if not q:
            continue
        out = out + total_derivative_multi(q, s.orders, sp) * e.diff(s)
    return out


def vertical_field(characteristics, space: JetSpace) -> GeneralizedField:
    return GeneralizedField(tuple(characteristics), space)


__all__ = [
    "Current",
    "GeneralizedField",
    "SymmetryCandidate",
    "total_derivative",
    "total_derivative_multi",
    "divergence",
    "divergence_terms",
    "evolutionary_representative",
    "prolong_apply",
    "vertical_field",
]
