"""Conserved currents from divergence symmetries, Noether identities from
gauge families, triviality classification and the adjoint-linearization
test for non-variational systems.

Sign convention: every current B returned here satisfies

    Div B = sum_i psi_i Q_i

exactly, where psi are the Lagrangian expressions and Q the characteristics
of the evolutionary representative.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import (
    DomainError,
    NotAConservationLawError,
    NotASymmetryError,
    OrderOverflowError,
    ReductionError,
    VarCalcError,
)
from .expr import JET, ZERO, Add, Expr, JetSpace, Mul, Neg, Symbol, sum_exprs
from .jet import (
    Current,
    GeneralizedField,
    SymmetryCandidate,
    divergence,
    divergence_terms,
    evolutionary_representative,
    prolong_apply,
    total_derivative_multi,
)
from .variational import (
    LinearDiffOp,
    adjoint_boundary,
    boundary_current,
    euler_lagrange,
    formal_adjoint,
    integrate_divergence,
    linearize,
)


# ---------------------------------------------------------------------------
# Theorem I


@dataclass(frozen=True)
class SymmetryCheck:
    holds: bool
    residual: Expr

    def __bool__(self):
        return self.holds


def check_divergence_symmetry(f, s: SymmetryCandidate) -> SymmetryCheck:
    """R = pr Q(f) + Div(f X) - Div C; a divergence symmetry iff R == 0."""
    f = Expr.coerce(f)
    sp = s.space
    Z = evolutionary_representative(s)
    R = prolong_apply(Z, f)
    R = R + divergence(Current(tuple(f * x for x in s.X), sp))
    R = R - divergence(s.divergence_term)
    return SymmetryCheck(R.is_zero(), R)


def noether_current(f, s: SymmetryCandidate) -> Current:
    """B = C - f X - A, with A from pr Q(f) = sum psi Q + Div A."""
    f = Expr.coerce(f)
    check = check_divergence_symmetry(f, s)
    if not check:
        raise NotASymmetryError("candidate is not a divergence symmetry", check.residual)
    sp = s.space
    Z = evolutionary_representative(s)
    A = boundary_current(f, Z)
    B = Current(tuple(c - f * x - a for c, x, a in zip(s.C, s.X, A)), sp)
    psi = euler_lagrange(f, sp)
    if divergence(B) != sum_exprs(p * q for p, q in zip(psi, Z)):
        raise VarCalcError("internal error: current fails Div B = sum psi Q")
    return B


def conservation_residual(B: Current, psi, Z: GeneralizedField):
    """Unevaluated tree for Div B - sum psi_i Q_i, for randomized checking."""
    items = list(divergence_terms(B))
    items += [Neg(Mul((p, q))) for p, q in zip(psi, Z)]
    return Add(tuple(items))


# ---------------------------------------------------------------------------
# Theorem II


@dataclass(frozen=True)
class GaugeFamily:
    """Symmetries Q_i = D_i(p) linear in an arbitrary function p.

    ``operators`` holds one scalar LinearDiffOp per field.
    """

    parameter: str
    operators: tuple
    space: JetSpace

    def __post_init__(self):
        if self.parameter not in self.space.arbitrary:
            raise DomainError(f"{self.parameter!r} is not declared as an arbitrary function")
        ops = tuple(self.operators)
        if len(ops) != len(self.space.fields):
            raise DomainError("a gauge family needs one operator per dependent variable")
        object.__setattr__(self, "operators", ops)

    @classmethod
    def from_exprs(cls, parameter: str, variations, space: JetSpace) -> "GaugeFamily":
        """Build from the variations delta u_i, each linear in jets of p."""
        ops = tuple(LinearDiffOp.from_expr(v, parameter, space) for v in variations)
        return cls(parameter, ops, space)

    @property
    def order(self) -> int:
        return max((op.order for op in self.operators), default=0)

    def characteristic(self, p_value) -> GeneralizedField:
        p_value = Expr.coerce(p_value)
        return GeneralizedField(tuple(op(p_value) for op in self.operators), self.space)

    def candidate(self, p_value) -> SymmetryCandidate:
        sp = self.space
        Q = self.characteristic(p_value)
        return SymmetryCandidate((ZERO,) * sp.n, tuple(Q), sp)


@dataclass(frozen=True)
class NoetherIdentity:
    expression: Expr
    gauge: GaugeFamily
    verified: bool
    terms: tuple = field(default=(), repr=False)

    def tree(self):
        return Add(tuple(self.terms))


def noether_identity(f, gauge: GaugeFamily) -> NoetherIdentity:
    """sum_i (D_i)*(psi_i); verified iff it vanishes identically."""
    sp = gauge.space
    psi = euler_lagrange(f, sp)
    terms = tuple(formal_adjoint(op)(p) for op, p in zip(gauge.operators, psi))
    expr = sum_exprs(terms)
    return NoetherIdentity(expr, gauge, expr.is_zero(), terms)


@dataclass(frozen=True)
class ImproperLaw:
    """Current induced by fixing the arbitrary function, with its split.

    ``first_kind`` is sum_i Gamma_i from psi_i D_i(p) = D_i*(psi_i) p + Div
    Gamma_i; it is linear in psi and so vanishes on shell.  ``second_kind`` is
    the remainder ``current - first_kind``.
    """

    p_value: Expr
    symmetry: SymmetryCandidate
    current: Current
    first_kind: Current
    second_kind: Current


def gauge_specialization(f, gauge: GaugeFamily, p_value) -> ImproperLaw:
    sp = gauge.space
    p_value = Expr.coerce(p_value)
    s = gauge.candidate(p_value)
    B = noether_current(f, s)
    psi = euler_lagrange(f, sp)
    first = Current.zero(sp)
    for op, p in zip(gauge.operators, psi):
        first = first + adjoint_boundary(op, [p], [p_value])
    return ImproperLaw(p_value, s, B, first, B - first)


# ---------------------------------------------------------------------------
# On-shell reduction and triviality


@dataclass(frozen=True)
class NormalForm:
    """Directed substitutions lead -> rhs, applied with all prolongations.

    A jet u^i_K is rewritten by the first rule whose lead u^i_J has J <= K,
    to D_{K-J}(rhs).  Rewriting repeats until no rule applies.
    """

    rules: tuple
    space: JetSpace

    def __post_init__(self):
        rules = []
        for lead, rhs in self.rules:
            if not isinstance(lead, Symbol) or lead.kind != JET:
                raise DomainError(f"normal-form lead {lead} is not a jet coordinate")
            rhs = Expr.coerce(rhs)
            if lead in rhs.symbols():
                raise DomainError(f"normal-form rule for {lead} mentions its own lead")
            rules.append((lead, rhs))
        object.__setattr__(self, "rules", tuple(rules))

    def _rule_for(self, s: Symbol):
        for lead, rhs in self.rules:
            if lead.slot == s.slot and all(a <= b for a, b in zip(lead.orders, s.orders)):
                return lead, rhs
        return None

    def reduce(self, e, max_rounds: int | None = None) -> Expr:
        e = Expr.coerce(e)
        if max_rounds is None:
            max_rounds = 4 * (self.space.max_order + 1)
        for _ in range(max_rounds):
            bindings = {}
            for s in e.symbols():
                if s.kind != JET:
                    continue
                hit = self._rule_for(s)
                if hit is None:
                    continue
                lead, rhs = hit
                K = tuple(b - a for a, b in zip(lead.orders, s.orders))
                try:
                    bindings[s] = total_derivative_multi(rhs, K, self.space)
                except OrderOverflowError as exc:
                    raise ReductionError(f"on-shell substitution of {s} overflows: {exc}") from None
            if not bindings:
                return e
            e = e.subs(bindings)
        raise ReductionError(f"on-shell substitution did not terminate within {max_rounds} rounds")


class Triviality(str, enum.Enum):
    NONTRIVIAL = "nontrivial"
    FIRST_KIND = "trivial-first-kind"
    SECOND_KIND = "trivial-second-kind"
    MIXED = "mixed-trivial"


@dataclass(frozen=True)
class TrivialityVerdict:
    """Verdict plus the data needed to re-check it.

    For MIXED, ``first_kind + second_kind == current`` with the first part
    vanishing on shell and the second having zero divergence.
    """

    kind: Triviality
    current: Current
    divergence: Expr
    first_kind: Current | None = None
    second_kind: Current | None = None
    reduced: tuple = ()

    @property
    def is_trivial(self) -> bool:
        return self.kind is not Triviality.NONTRIVIAL

    def recheck(self, normal_form: NormalForm) -> bool:
        B = self.current
        if self.kind is Triviality.SECOND_KIND:
            return divergence(B).is_zero()
        if self.kind is Triviality.FIRST_KIND:
            return all(normal_form.reduce(c).is_zero() for c in B)
        if self.kind is Triviality.MIXED:
            C, D = self.first_kind, self.second_kind
            return (
                (C + D - B).is_zero()
                and all(normal_form.reduce(c).is_zero() for c in C)
                and divergence(D).is_zero()
            )
        return (
            not divergence(B).is_zero()
            and normal_form.reduce(divergence(B)).is_zero()
            and not all(normal_form.reduce(c).is_zero() for c in B)
        )


def classify_triviality(B: Current, normal_form: NormalForm, first_kind: Current | None = None) -> TrivialityVerdict:
    """Classify B against the on-shell rewriting ``normal_form``.

    Deterministic split for the mixed case: the on-shell reduction of B is
    taken as the null-divergence candidate.  An explicit ``first_kind``
    candidate (e.g. the sum of Gamma_i of a gauge family) is tried next.
    """
    div = divergence(B)
    if div.is_zero():
        return TrivialityVerdict(Triviality.SECOND_KIND, B, div)
    reduced = tuple(normal_form.reduce(c) for c in B)
    if all(c.is_zero() for c in reduced):
        return TrivialityVerdict(Triviality.FIRST_KIND, B, div, reduced=reduced)
    rdiv = normal_form.reduce(div)
    if rdiv:
        raise NotAConservationLawError("divergence does not vanish on shell", rdiv)
    D = Current(reduced, B.space)
    if divergence(D).is_zero():
        return TrivialityVerdict(Triviality.MIXED, B, div, B - D, D, reduced)
    if first_kind is not None:
        if all(normal_form.reduce(c).is_zero() for c in first_kind):
            D = B - first_kind
            if divergence(D).is_zero():
                return TrivialityVerdict(Triviality.MIXED, B, div, first_kind, D, reduced)
    return TrivialityVerdict(Triviality.NONTRIVIAL, B, div, reduced=reduced)


# ---------------------------------------------------------------------------
# Non-variational systems


@dataclass(frozen=True)
class MagriResult:
    holds: bool
    residual: tuple
    current: Current | None = None

    def __bool__(self):
        return self.holds


def magri_check(F, w, normal_form: NormalForm) -> MagriResult:
    """Is w in the kernel of the adjoint linearization of F, on shell?

    When it is and sum w_i F_i is recognized as a total divergence, the
    corresponding current is attached.
    """
    sp = normal_form.space
    F = [Expr.coerce(e) for e in ([F] if isinstance(F, Expr) else F)]
    w = [Expr.coerce(e) for e in ([w] if isinstance(w, Expr) else w)]
    if len(w) != len(F):
        raise DomainError("multiplier and system have different lengths")
    L = linearize(F, sp)
    image = formal_adjoint(L).apply(w)
    residual = tuple(normal_form.reduce(r) for r in image)
    holds = all(r.is_zero() for r in residual)
    current = None
    if holds:
        current = integrate_divergence(sum_exprs(a * b for a, b in zip(w, F)), sp)
    return MagriResult(holds, residual, current)


__all__ = [
    "Current",
    "SymmetryCheck",
    "check_divergence_symmetry",
    "noether_current",
    "conservation_residual",
    "GaugeFamily",
    "NoetherIdentity",
    "noether_identity",
    "ImproperLaw",
    "gauge_specialization",
    "NormalForm",
    "Triviality",
    "TrivialityVerdict",
    "classify_triviality",
    "MagriResult",
    "magri_check",
]
