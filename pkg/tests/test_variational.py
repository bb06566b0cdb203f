import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import jet_pool, random_poly
from varcalc.errors import DomainError, OrderOverflowError
from varcalc.expr import JET, Expr, JetSpace, multi_indices, parse
from varcalc.jet import GeneralizedField, divergence, prolong_apply
from varcalc.variational import (
    LinearDiffOp,
    adjoint_boundary,
    boundary_current,
    euler_lagrange,
    formal_adjoint,
    integrate_divergence,
    is_self_adjoint,
    linearize,
)
from varcalc.verify import certify_zero

# w is a probe function for the Frechet-derivative oracle
SPW = JetSpace(("t", "x"), ("u",), 2, arbitrary=("w",), max_order=8)
POOL = jet_pool(SPW, 2)[: 2 + 6]  # t, x and the u-jets up to order 2


def p(text, space):
    return parse(text, space)


def frechet_oracle(F: Expr, space: JetSpace, probe="w") -> Expr:
    """Part of F(u + w) that is linear in the probe w."""
    wi = space.variable_index(probe)
    bindings = {}
    for s in F.symbols():
        if s.kind == JET and s.slot == 0:
            bindings[s] = Expr.sym(s) + Expr.sym(space.jet(wi, s.orders))
    shifted = F.subs(bindings)
    linear = {
        m: c for m, c in shifted.raw().items()
        if sum(k for s, k in m if s.kind == JET and s.slot == wi) == 1
    }
    return Expr(linear)


# -- euler_lagrange ---------------------------------------------------------


def test_euler_lagrange_examples(tu, txu):
    assert euler_lagrange(p("1/2*d(u;t)^2", tu), tu)[0] == p("-d(u;t,t)", tu)
    assert euler_lagrange(0, tu)[0].is_zero()
    assert euler_lagrange(p("1/2*d(u;t)^2 - 1/2*d(u;x)^2", txu), txu)[0] == p(
        "-d(u;t,t) + d(u;x,x)", txu
    )


def test_euler_lagrange_two_fields():
    sp = JetSpace(("t", "x"), ("u", "v"), 1)
    psi = euler_lagrange(p("1/2*(d(u;x) - v)^2", sp), sp)
    assert psi[0] == p("-d(u;x,x) + d(v;x)", sp)
    assert psi[1] == p("v - d(u;x)", sp)


def test_euler_lagrange_rejects_high_order(tu):
    with pytest.raises(OrderOverflowError):
        euler_lagrange(p("d(u;t,t)^2", tu), tu)


# -- boundary_current -------------------------------------------------------


def test_boundary_current_examples(tu):
    one = GeneralizedField((1,), tu)
    assert tuple(boundary_current(p("1/2*d(u;t)^2", tu), one)) == (p("d(u;t)", tu),)
    Z = GeneralizedField((p("d(u;t)^3 + t", tu),), tu)
    assert boundary_current(p("u^4 + t*u", tu), Z).is_zero()
    Z = GeneralizedField((p("-d(u;t)", tu),), tu)
    assert tuple(boundary_current(p("1/2*d(u;t)^2 - 1/2*u^2", tu), Z)) == (p("-d(u;t)^2", tu),)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32))
def test_boundary_current_identity(seed):
    rng = random.Random(seed)
    sp = JetSpace(("t", "x"), ("u",), 2, max_order=8)
    pool = jet_pool(sp, 2)
    f = random_poly(rng, pool, terms=3, degree=3)
    Q = random_poly(rng, jet_pool(sp, 1), terms=2, degree=2)
    Z = GeneralizedField((Q,), sp)
    A = boundary_current(f, Z)
    assert prolong_apply(Z, f) == euler_lagrange(f, sp)[0] * Q + divergence(A)


# -- linearize --------------------------------------------------------------


def test_linearize_advection(txu):
    L = linearize(p("d(u;t) - u*d(u;x)", txu), txu)
    assert L.coefficient((1, 0)) == Expr.const(1)
    assert L.coefficient((0, 1)) == p("-u", txu)
    assert L.coefficient((0, 0)) == p("-d(u;x)", txu)
    assert L.order == 1


def test_linearize_identity_and_second_order(tu):
    assert linearize(p("u", tu), tu) == LinearDiffOp.multiplication(1, tu)
    sp = tu.with_max_order(5)
    assert linearize(p("d(u;t,t) + u", sp), sp) == LinearDiffOp.scalar({(2,): 1, (0,): 1}, sp)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_linearize_matches_frechet_oracle(seed):
    rng = random.Random(seed)
    F = random_poly(rng, POOL, terms=4, degree=3)
    lin = linearize(F, SPW)
    wi = SPW.variable_index("w")
    assert lin(Expr.sym(SPW.jet(wi))) == frechet_oracle(F, SPW)


# -- formal adjoint ---------------------------------------------------------


def test_adjoint_examples(txu):
    Dx = LinearDiffOp.scalar({(0, 1): 1}, txu)
    assert formal_adjoint(Dx) == LinearDiffOp.scalar({(0, 1): -1}, txu)
    a = p("x*u^2 + t", txu)
    M = LinearDiffOp.multiplication(a, txu)
    assert formal_adjoint(M) == M
    D = LinearDiffOp.scalar({(0, 1): p("u", txu), (0, 0): 1}, txu)
    Ds = formal_adjoint(D)
    assert Ds.coefficient((0, 1)) == p("-u", txu)
    assert Ds.coefficient((0, 0)) == p("1 - d(u;x)", txu)


def test_adjoint_defining_relation_by_evaluation(txu):
    sp = JetSpace(("t", "x"), ("u",), 1, arbitrary=("q", "r"), max_order=5)
    D = LinearDiffOp.scalar({(0, 1): p("u", sp), (0, 0): 1}, sp)
    q, r = p("q", sp), p("r", sp)
    gamma = adjoint_boundary(D, [q], [r])
    rel = q * D(r) - formal_adjoint(D)(q) * r - divergence(gamma)
    assert certify_zero(rel, seed=3)


def test_from_expr_requires_linearity(txu):
    sp = JetSpace(("t", "x"), ("u",), 1, arbitrary=("p",))
    op = LinearDiffOp.from_expr(p("2*d(p;x) + t*p", sp), "p", sp)
    assert op.coefficient((0, 1)) == Expr.const(2)
    with pytest.raises(DomainError):
        LinearDiffOp.from_expr(p("p^2", sp), "p", sp)
    with pytest.raises(DomainError):
        LinearDiffOp.from_expr(p("p + 1", sp), "p", sp)


def _random_op(rng, sp, order, nargs=1):
    pool = jet_pool(sp, 1)[: sp.n + sp.n + 1]
    coeffs = {}
    for J in multi_indices(sp.n, order):
        if rng.random() < 0.5:
            for c in range(nargs):
                coeffs[(0, c, J)] = random_poly(rng, pool, terms=2, degree=2)
    return LinearDiffOp((1, nargs), coeffs, sp)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32))
def test_adjoint_is_an_involution(seed):
    sp = JetSpace(("t", "x"), ("u",), 1, arbitrary=("q", "r"), max_order=8)
    D = _random_op(random.Random(seed), sp, 3)
    assert formal_adjoint(formal_adjoint(D)) == D


def test_adjoint_of_a_matrix_operator_transposes():
    sp = JetSpace(("t",), ("u", "v"), 1, max_order=5)
    D = LinearDiffOp((1, 2), {(0, 0, (1,)): 1, (0, 1, (0,)): p("u", sp)}, sp)
    Ds = formal_adjoint(D)
    assert Ds.shape == (2, 1)
    assert Ds.coefficient((1,), r=0, c=0) == Expr.const(-1)
    assert Ds.coefficient((0,), r=1, c=0) == p("u", sp)


# -- self-adjointness -------------------------------------------------------


def test_self_adjoint_examples(tu, txu):
    sp = tu.with_max_order(6)
    L = linearize(list(euler_lagrange(p("1/2*d(u;t)^2 - 1/2*u^2", sp), sp)), sp)
    assert L == LinearDiffOp.scalar({(2,): -1, (0,): -1}, sp)
    assert is_self_adjoint(L)
    assert is_self_adjoint(LinearDiffOp.scalar({}, tu))


def test_advection_is_not_self_adjoint(txu):
    res = is_self_adjoint(linearize(p("d(u;t) - u*d(u;x)", txu), txu))
    assert not res
    (r, c, J), mine, adjoint = res.witness
    assert J == (1, 0)
    assert (mine, adjoint) == (Expr.const(1), Expr.const(-1))


def test_self_adjoint_needs_square(txu):
    D = LinearDiffOp((1, 2), {}, JetSpace(("t",), ("u", "v"), 1))
    with pytest.raises(DomainError):
        is_self_adjoint(D)


# -- recognizing divergences ------------------------------------------------


def test_integrate_divergence(txu):
    P = integrate_divergence(p("d(u;t) - d(u;x,x)", txu), txu)
    assert tuple(P) == (p("u", txu), p("-d(u;x)", txu))
    P = integrate_divergence(p("d(u;t) - u*d(u;x)", txu), txu)
    assert divergence(P) == p("d(u;t) - u*d(u;x)", txu)


def test_integrate_divergence_gives_up_on_non_divergences(txu):
    # Euler-Lagrange of u*u_tx is 2*u_tx, so it is no divergence
    assert integrate_divergence(p("u*d(u;t,x)", txu), txu.with_max_order(6)) is None
    assert integrate_divergence(p("u^2", txu), txu) is None
