import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import jet_pool, random_poly
from varcalc.errors import DomainError, OrderOverflowError
from varcalc.expr import Expr, JetSpace, parse
from varcalc.jet import (
    Current,
    GeneralizedField,
    SymmetryCandidate,
    divergence,
    evolutionary_representative,
    prolong_apply,
    total_derivative,
    total_derivative_multi,
)

SP = JetSpace(("t", "x"), ("u", "v"), 1, max_order=6)
POOL = jet_pool(SP, 2)
polys = st.integers(0, 2**32).map(lambda s: random_poly(random.Random(s), POOL, terms=3, degree=3))


def p(text, space=SP):
    return parse(text, space)


def test_total_derivative_examples(txu):
    assert total_derivative(p("u", txu), "x", txu) == p("d(u;x)", txu)
    assert total_derivative(p("u*d(u;t)", txu), "t", txu) == p("d(u;t)^2 + u*d(u;t,t)", txu)
    assert total_derivative(p("x^2", txu), "x", txu) == p("2*x", txu)


def test_total_derivative_multi(txu):
    assert total_derivative_multi(p("u^2", txu), (1, 1), txu) == p(
        "2*d(u;t)*d(u;x) + 2*u*d(u;t,x)", txu
    )


def test_total_derivative_overflow(tu):
    top = tu.u("u", *["t"] * tu.max_order)
    with pytest.raises(OrderOverflowError):
        total_derivative(Expr.sym(top), "t", tu)


def test_divergence_examples(tu, txu):
    assert divergence(Current((p("d(u;t)", tu),), tu)) == p("d(u;t,t)", tu)
    g = p("u*d(u;x)", txu)
    curl = Current((total_derivative(g, "x", txu), -total_derivative(g, "t", txu)), txu)
    assert divergence(curl).is_zero()


def test_wave_energy_divergence(txu):
    # energy density of u_tt = u_xx needs the u_x^2 term
    B = Current((p("1/2*d(u;t)^2 + 1/2*d(u;x)^2", txu), p("-d(u;t)*d(u;x)", txu)), txu)
    assert divergence(B) == p("d(u;t)*(d(u;t,t) - d(u;x,x))", txu)


def test_current_component_count(txu):
    with pytest.raises(DomainError):
        Current((p("u", txu),), txu)


def test_evolutionary_representative(tu):
    time = SymmetryCandidate((1,), (0,), tu)
    assert evolutionary_representative(time)[0] == p("-d(u;t)", tu)
    shift = SymmetryCandidate((0,), (1,), tu)
    assert evolutionary_representative(shift)[0] == Expr.const(1)
    boost = SymmetryCandidate((0,), (p("t", tu),), tu)
    assert evolutionary_representative(boost)[0] == p("t", tu)


def test_candidate_rejects_x_depending_on_u(tu):
    with pytest.raises(DomainError, match="functions of x only"):
        SymmetryCandidate((p("u", tu),), (0,), tu)


def test_prolong_apply_examples(tu):
    one = GeneralizedField((1,), tu)
    assert prolong_apply(one, p("u^2", tu)) == p("2*u", tu)
    Z = GeneralizedField((p("-d(u;t)", tu),), tu)
    assert prolong_apply(Z, p("1/2*d(u;t)^2 - 1/2*u^2", tu)) == p("u*d(u;t) - d(u;t)*d(u;t,t)", tu)
    assert prolong_apply(Z, p("t^3 + 2", tu)).is_zero()


@settings(max_examples=40, deadline=None)
@given(polys)
def test_total_derivatives_commute(e):
    assert total_derivative(total_derivative(e, "t", SP), "x", SP) == total_derivative(
        total_derivative(e, "x", SP), "t", SP
    )


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_leibniz(a, b):
    for ax in ("t", "x"):
        lhs = total_derivative(a * b, ax, SP)
        assert lhs == total_derivative(a, ax, SP) * b + a * total_derivative(b, ax, SP)


@settings(max_examples=30, deadline=None)
@given(polys, polys, polys)
def test_prolongation_commutes_with_total_derivative(e, q1, q2):
    Z = GeneralizedField((q1, q2), SP)
    for ax in ("t", "x"):
        assert prolong_apply(Z, total_derivative(e, ax, SP)) == total_derivative(prolong_apply(Z, e), ax, SP)


@settings(max_examples=30, deadline=None)
@given(polys, polys)
def test_vertical_candidate_is_its_own_representative(y1, y2):
    s = SymmetryCandidate((0, 0), (y1, y2), SP)
    assert tuple(evolutionary_representative(s)) == (y1, y2)
