"""Declarations of the variables an expression may mention."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

from ..errors import OrderOverflowError, UndeclaredSymbolError
from .core import INDEP, JET, SLOT, Symbol

MultiIndex = tuple  # derivative counts, one per independent variable


def multi_indices(n: int, max_order: int):
    """All multi-indices of length n with total order <= max_order, graded."""
    out = [J for J in product(range(max_order + 1), repeat=n) if sum(J) <= max_order]
    return sorted(out, key=lambda J: (sum(J), J))


def unit(n: int, axis: int) -> MultiIndex:
    return tuple(1 if i == axis else 0 for i in range(n))


def _check_identifiers(names):
    for name in names:
        if not name.isidentifier() or not name.isascii():
            raise ValueError(f"not an ASCII identifier: {name!r}")


@dataclass(frozen=True)
class JetSpace:
    """n independent variables, mu dependent variables, Lagrangian order kappa.

    ``arbitrary`` lists extra dependent variables that stand for arbitrary
    functions (gauge parameters).  They get jet coordinates like any field
    but carry no Euler-Lagrange component.  ``max_order`` bounds every jet
    coordinate an operation may create; it defaults to ``order + 3``
    (room for a first-order gauge operator plus two prolongations).
    """

    independent: tuple
    dependent: tuple
    order: int = 1
    arbitrary: tuple = ()
    max_order: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "independent", tuple(self.independent))
        object.__setattr__(self, "dependent", tuple(self.dependent))
        object.__setattr__(self, "arbitrary", tuple(self.arbitrary))
        names = self.independent + self.dependent + self.arbitrary
        _check_identifiers(names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        if not self.independent or not self.dependent:
            raise ValueError("need at least one independent and one dependent variable")
        if self.order < 1:
            raise ValueError("Lagrangian order must be >= 1")
        if self.max_order is None:
            object.__setattr__(self, "max_order", self.order + 3)
        if self.max_order < self.order:
            raise ValueError("max_order must be at least the Lagrangian order")

    # -- lookup -------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.independent)

    @property
    def fields(self) -> tuple:
        return self.dependent

    @property
    def variables(self) -> tuple:
        return self.dependent + self.arbitrary

    def axis_index(self, axis) -> int:
        if isinstance(axis, int):
            if not 0 <= axis < self.n:
                raise IndexError(f"axis {axis} out of range")
            return axis
        try:
            return self.independent.index(axis)
        except ValueError:
            raise UndeclaredSymbolError(f"unknown independent variable {axis!r}") from None

    def variable_index(self, name) -> int:
        if isinstance(name, int):
            return name
        try:
            return self.variables.index(name)
        except ValueError:
            raise UndeclaredSymbolError(f"unknown dependent variable {name!r}") from None

    def x(self, axis) -> Symbol:
        i = self.axis_index(axis)
        return Symbol(INDEP, i, (), self.independent[i])

    def jet(self, var, orders=None) -> Symbol:
        i = self.variable_index(var)
        if orders is None:
            orders = (0,) * self.n
        orders = tuple(orders)
        if len(orders) != self.n or any(k < 0 for k in orders):
            raise ValueError(f"bad multi-index {orders}")
        if sum(orders) > self.max_order:
            raise OrderOverflowError(
                f"derivative of order {sum(orders)} exceeds the headroom {self.max_order}"
            )
        return Symbol(JET, i, orders, self.variables[i], self.independent)

    def u(self, var, *axes) -> Symbol:
        """Jet coordinate by axis names, e.g. ``space.u('u', 't', 'x')``."""
        counts = [0] * self.n
        for ax in axes:
            counts[self.axis_index(ax)] += 1
        return self.jet(var, counts)

    def prolong(self, s: Symbol, axis: int) -> Symbol:
        orders = list(s.orders)
        orders[axis] += 1
        return self.jet(s.slot, orders)

    def is_field_jet(self, s: Symbol) -> bool:
        return s.kind == JET and s.slot < len(self.dependent)

    def contains(self, s: Symbol) -> bool:
        if s.kind == INDEP:
            return s.slot < self.n and self.independent[s.slot] == s.name
        if s.kind == JET:
            return (
                s.slot < len(self.variables)
                and self.variables[s.slot] == s.name
                and len(s.orders) == self.n
                and sum(s.orders) <= self.max_order
            )
        return False

    @cached_property
    def _all_symbols(self) -> tuple:
        out = [self.x(i) for i in range(self.n)]
        for v in range(len(self.variables)):
            out.extend(self.jet(v, J) for J in multi_indices(self.n, self.max_order))
        return tuple(out)

    def symbols(self) -> tuple:
        """Every symbol of the space, up to max_order, in canonical order."""
        return self._all_symbols

    def with_max_order(self, max_order: int) -> "JetSpace":
        return JetSpace(self.independent, self.dependent, self.order, self.arbitrary, max_order)

    # -- parser hooks ---------------------------------------------------
    def resolve_name(self, name: str) -> Symbol:
        if name in self.independent:
            return self.x(name)
        if name in self.variables:
            return self.jet(name)
        raise UndeclaredSymbolError(f"undeclared symbol {name!r}")

    def resolve_derivative(self, var: str, axes) -> Symbol:
        if var not in self.variables:
            raise UndeclaredSymbolError(f"undeclared dependent variable {var!r}")
        return self.u(var, *axes)

    def resolve_slot(self, var: str, k: int) -> Symbol:
        raise UndeclaredSymbolError("lattice slots u[k] are only valid in discrete problems")


@dataclass(frozen=True)
class LatticeSpace:
    """One integer site variable and lattice values u[k] for |k| <= window."""

    dependent: tuple = ("u",)
    site: str = "n"
    window: int = 4

    def __post_init__(self):
        object.__setattr__(self, "dependent", tuple(self.dependent))
        names = (self.site,) + self.dependent
        _check_identifiers(names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        if self.window < 1:
            raise ValueError("window must be >= 1")

    @property
    def n_symbol(self) -> Symbol:
        return Symbol(INDEP, 0, (), self.site)

    def slot(self, var, k: int) -> Symbol:
        i = var if isinstance(var, int) else self.variable_index(var)
        if abs(k) > self.window:
            raise OrderOverflowError(f"shift {k} leaves the window |k| <= {self.window}")
        return Symbol(SLOT, i, (k,), self.dependent[i])

    def variable_index(self, name) -> int:
        try:
            return self.dependent.index(name)
        except ValueError:
            raise UndeclaredSymbolError(f"unknown dependent variable {name!r}") from None

    def contains(self, s: Symbol) -> bool:
        if s.kind == INDEP:
            return s.slot == 0 and s.name == self.site
        if s.kind == SLOT:
            return s.slot < len(self.dependent) and abs(s.orders[0]) <= self.window
        return False

    def symbols(self) -> tuple:
        out = [self.n_symbol]
        for i in range(len(self.dependent)):
            out.extend(self.slot(i, k) for k in range(-self.window, self.window + 1))
        return tuple(out)

    def resolve_name(self, name: str) -> Symbol:
        if name == self.site:
            return self.n_symbol
        if name in self.dependent:
            raise UndeclaredSymbolError(f"lattice variable {name!r} needs a slot, e.g. {name}[0]")
        raise UndeclaredSymbolError(f"undeclared symbol {name!r}")

    def resolve_derivative(self, var, axes) -> Symbol:
        raise UndeclaredSymbolError("derivatives d(...) are not defined on a lattice")

    def resolve_slot(self, var: str, k: int) -> Symbol:
        return self.slot(var, k)
