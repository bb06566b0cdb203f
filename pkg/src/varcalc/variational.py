"""Euler-Lagrange operator, integration by parts, Frechet linearization and
formal adjoints of linear differential operators."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import DomainError, OrderOverflowError
from .expr import INDEP, JET, ZERO, Expr, JetSpace, multi_indices
from .jet import Current, GeneralizedField, divergence, total_derivative, total_derivative_multi


def _order(J) -> int:
    return sum(J)


def _rank(J):
    return (sum(J), tuple(J))


@dataclass(frozen=True)
class EulerLagrange:
    """The Lagrangian expressions psi_i, one per field."""

    components: tuple
    space: JetSpace

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __len__(self):
        return len(self.components)


def _check_order(f: Expr, space: JetSpace, limit: int):
    for s in f.symbols():
        if s.kind == JET and s.order > limit:
            raise OrderOverflowError(f"{s} has order {s.order}, above the Lagrangian order {limit}")


def variational_derivative(f: Expr, var, space: JetSpace) -> Expr:
    """sum_J (-1)^|J| D_J(df/du_J) for one dependent (or arbitrary) variable."""
    i = space.variable_index(var)
    out = ZERO
    for s in sorted(f.symbols()):
        if s.kind == JET and s.slot == i:
            term = total_derivative_multi(f.diff(s), s.orders, space)
            out = out - term if s.order % 2 else out + term
    return out


def euler_lagrange(f, space: JetSpace) -> EulerLagrange:
    f = Expr.coerce(f)
    _check_order(f, space, space.order)
    return EulerLagrange(
        tuple(variational_derivative(f, i, space) for i in range(len(space.fields))), space
    )


def integrate_by_parts(coeffs: dict, q: Expr, space: JetSpace):
    """Move every derivative off ``q``.

    Given sum_J c_J * D_J(q), return (c, Gamma) with

        sum_J c_J D_J(q) = c * q + Div Gamma,   c = sum_J (-1)^|J| D_J(c_J).

    The largest multi-index is peeled first, always along its first nonzero
    axis, so Gamma is deterministic.
    """
    n = space.n
    work = {tuple(J): Expr.coerce(c) for J, c in coeffs.items() if c}
    gamma = [ZERO] * n
    while True:
        pending = [J for J in work if _order(J) > 0]
        if not pending:
            break
        J = max(pending, key=_rank)
        c = work.pop(J)
        lam = next(a for a, k in enumerate(J) if k)
        K = tuple(k - 1 if a == lam else k for a, k in enumerate(J))
        gamma[lam] = gamma[lam] + c * total_derivative_multi(q, K, space)
        rest = work.get(K, ZERO) - total_derivative(c, lam, space)
        if rest:
            work[K] = rest
        else:
            work.pop(K, None)
    zero = (0,) * n
    return work.get(zero, ZERO), Current(tuple(gamma), space)


def boundary_current(f, Z: GeneralizedField) -> Current:
    """A with pr Z(f) = sum_i psi_i Q_i + Div A."""
    sp = Z.space
    f = Expr.coerce(f)
    _check_order(f, sp, sp.order)
    A = Current.zero(sp)
    for i, q in enumerate(Z):
        if not q:
            continue
        coeffs = {}
        for s in f.symbols():
            if s.kind == JET and s.slot == i:
                coeffs[s.orders] = f.diff(s)
        _, gamma = integrate_by_parts(coeffs, q, sp)
        A = A + gamma
    return A


# ---------------------------------------------------------------------------
# Linear differential operators


def _op_key(key):
    r, c, J = key
    return (r, c, -sum(J), tuple(-k for k in J))


@dataclass(frozen=True, eq=False)
class LinearDiffOp:
    """Matrix of linear differential operators.

    ``coeffs[(r, c, J)]`` multiplies D_J of the c-th argument in the r-th
    output.  A scalar operator has shape (1, 1).
    """

    shape: tuple
    coeffs: dict = field(repr=False)
    space: JetSpace = field(repr=False)

    def __post_init__(self):
        clean = {}
        for (r, c, J), a in self.coeffs.items():
            a = Expr.coerce(a)
            J = tuple(J)
            if not (0 <= r < self.shape[0] and 0 <= c < self.shape[1]) or len(J) != self.space.n:
                raise DomainError(f"coefficient index {(r, c, J)} outside the operator shape")
            if a:
                clean[(r, c, J)] = a
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def scalar(cls, coeffs: dict, space: JetSpace) -> "LinearDiffOp":
        return cls((1, 1), {(0, 0, tuple(J)): a for J, a in coeffs.items()}, space)

    @classmethod
    def multiplication(cls, a, space: JetSpace) -> "LinearDiffOp":
        return cls.scalar({(0,) * space.n: a}, space)

    @classmethod
    def from_expr(cls, expr, var, space: JetSpace) -> "LinearDiffOp":
        """Scalar operator D with D(var) == expr; expr must be linear in var's jets."""
        expr = Expr.coerce(expr)
        i = space.variable_index(var)
        coeffs = {}
        rebuilt = ZERO
        for s in expr.symbols():
            if s.kind == JET and s.slot == i:
                a = expr.diff(s)
                if any(t.kind == JET and t.slot == i for t in a.symbols()):
                    raise DomainError(f"{expr} is not linear in {space.variables[i]}")
                coeffs[s.orders] = a
                rebuilt = rebuilt + a * Expr.sym(s)
        if rebuilt != expr:
            raise DomainError(f"{expr} is not homogeneous linear in {space.variables[i]}")
        return cls.scalar(coeffs, space)

    @property
    def order(self) -> int:
        return max((sum(J) for (_, _, J) in self.coeffs), default=0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, J, r=0, c=0) -> Expr:
        return self.coeffs.get((r, c, tuple(J)), ZERO)

    def keys(self):
        return sorted(self.coeffs, key=_op_key)

    def apply(self, args) -> list:
        args = [Expr.coerce(a) for a in args]
        if len(args) != self.shape[1]:
            raise DomainError(f"operator takes {self.shape[1]} arguments, got {len(args)}")
        out = [ZERO] * self.shape[0]
        for (r, c, J), a in self.coeffs.items():
            out[r] = out[r] + a * total_derivative_multi(args[c], J, self.space)
        return out

    def __call__(self, *args):
        out = self.apply(args)
        return out[0] if self.shape[0] == 1 else out

    def __eq__(self, other):
        if not isinstance(other, LinearDiffOp):
            return NotImplemented
        return self.shape == other.shape and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.shape, frozenset(self.coeffs.items())))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for r, c, J in self.keys():
            a = self.coeffs[(r, c, J)]
            d = "*".join(
                f"D_{ax}" + (f"^{k}" if k > 1 else "") for ax, k in zip(self.space.independent, J) if k
            )
            slot = f"[{r},{c}] " if self.shape != (1, 1) else ""
            parts.append(f"{slot}({a})" + (f"*{d}" if d else ""))
        return " + ".join(parts)


def linearize(F, space: JetSpace) -> LinearDiffOp:
    """Frechet derivative of the system F (one row per equation)."""
    if isinstance(F, (Expr, int, Fraction)):
        F = [F]
    F = [Expr.coerce(e) for e in F]
    coeffs = {}
    nf = len(space.fields)
    for r, e in enumerate(F):
        for s in e.symbols():
            if s.kind == JET and s.slot < nf:
                coeffs[(r, s.slot, s.orders)] = e.diff(s)
    return LinearDiffOp((len(F), nf), coeffs, space)


def _binom(J, K) -> int:
    out = 1
    for j, k in zip(J, K):
        out *= comb(j, k)
    return out


def formal_adjoint(D: LinearDiffOp) -> LinearDiffOp:
    """D*(w)_c = sum_{r,J} (-1)^|J| D_J(a^{r,c,J} w_r), expanded by Leibniz."""
    sp = D.space
    out: dict = {}
    for (r, c, J), a in D.coeffs.items():
        sign = -1 if sum(J) % 2 else 1
        for K in multi_indices(sp.n, sum(J)):
            if any(k > j for k, j in zip(K, J)):
                continue
            JK = tuple(j - k for j, k in zip(J, K))
            term = total_derivative_multi(a, JK, sp) * (sign * _binom(J, K))
            key = (c, r, K)
            out[key] = out.get(key, ZERO) + term
    return LinearDiffOp((D.shape[1], D.shape[0]), out, sp)


def adjoint_boundary(D: LinearDiffOp, w, p) -> Current:
    """Gamma with sum_r w_r D(p)_r - sum_c D*(w)_c p_c = Div Gamma."""
    sp = D.space
    w = [Expr.coerce(x) for x in w]
    p = [Expr.coerce(x) for x in p]
    gamma = Current.zero(sp)
    for c in range(D.shape[1]):
        coeffs: dict = {}
        for (r, cc, J), a in D.coeffs.items():
            if cc == c:
                coeffs[J] = coeffs.get(J, ZERO) + w[r] * a
        _, g = integrate_by_parts(coeffs, p[c], sp)
        gamma = gamma + g
    return gamma


@dataclass(frozen=True)
class SelfAdjointness:
    holds: bool
    witness: tuple | None = None  # ((r, c, J), coefficient in D, coefficient in D*)

    def __bool__(self):
        return self.holds


def is_self_adjoint(D: LinearDiffOp) -> SelfAdjointness:
    if D.shape[0] != D.shape[1]:
        raise DomainError(f"operator of shape {D.shape} is not square")
    Ds = formal_adjoint(D)
    for key in sorted(set(D.coeffs) | set(Ds.coeffs), key=_op_key):
        a, b = D.coeffs.get(key, ZERO), Ds.coeffs.get(key, ZERO)
        if a != b:
            return SelfAdjointness(False, (key, a, b))
    return SelfAdjointness(True)


# ---------------------------------------------------------------------------
# Recognizing total divergences


def _antiderivative(c: Expr, w) -> Expr:
    """Polynomial G with dG/dw = c, treating every other symbol as constant."""
    out = ZERO
    for k, b in c.coefficients_in(w).items():
        out = out + b * Expr.sym(w) ** (k + 1) * Fraction(1, k + 1)
    return out


def integrate_divergence(e, space: JetSpace, max_steps: int = 400) -> Current | None:
    """Find P with Div P == e by repeatedly integrating the top-ranked jet.

    Returns None when the recursion does not recognize ``e`` as a total
    divergence (which includes every e that is not one).
    """
    target = Expr.coerce(e)
    e = target
    comps = [ZERO] * space.n
    for _ in range(max_steps):
        if not e:
            break
        jets = [s for s in e.symbols() if s.kind == JET and s.order > 0]
        if jets:
            v = max(jets, key=lambda s: (s.order, s.orders, s.slot))
            parts = e.coefficients_in(v)
            if max(parts) > 1:
                return None
            c1 = parts[1]
            if any(s.kind == JET and s.order >= v.order for s in c1.symbols()):
                return None
            lam = next(a for a, k in enumerate(v.orders) if k)
            w = v.with_orders(tuple(k - 1 if a == lam else k for a, k in enumerate(v.orders)))
        else:
            if any(s.kind == JET for s in e.symbols()):
                return None
            xs = sorted(s for s in e.symbols() if s.kind == INDEP)
            lam = xs[0].slot if xs else 0
            w = space.x(lam)
            c1 = e
        G = _antiderivative(c1, w)
        comps[lam] = comps[lam] + G
        e = e - total_derivative(G, lam, space)
    else:
        return None
    P = Current(tuple(comps), space)
    return P if divergence(P) == target else None


__all__ = [
    "EulerLagrange",
    "LinearDiffOp",
    "SelfAdjointness",
    "euler_lagrange",
    "variational_derivative",
    "integrate_by_parts",
    "boundary_current",
    "linearize",
    "formal_adjoint",
    "adjoint_boundary",
    "is_self_adjoint",
    "integrate_divergence",
]
