from fractions import Fraction

import pytest

from conftest import PROBLEMS
from varcalc.errors import NotAConservationLawError, NotASymmetryError, ReductionError
from varcalc.expr import Expr, JetSpace, parse
from varcalc.jet import Current, SymmetryCandidate, divergence, evolutionary_representative, total_derivative
from varcalc.noether import (
    GaugeFamily,
    NormalForm,
    Triviality,
    check_divergence_symmetry,
    classify_triviality,
    gauge_specialization,
    magri_check,
    noether_current,
    noether_identity,
)
from varcalc.problem import load_problem
from varcalc.variational import LinearDiffOp, euler_lagrange

TRIVIAL = {Triviality.FIRST_KIND, Triviality.SECOND_KIND, Triviality.MIXED}


def load(name):
    return load_problem((PROBLEMS / name).read_text())


def p(text, space):
    return parse(text, space)


def sum_psi_q(f, s):
    psi = euler_lagrange(f, s.space)
    Z = evolutionary_representative(s)
    return sum((a * b for a, b in zip(psi, Z)), Expr.const(0))


# -- Theorem I --------------------------------------------------------------


def test_divergence_symmetry_examples(tu):
    osc = p("1/2*d(u;t)^2 - 1/2*u^2", tu)
    assert check_divergence_symmetry(osc, SymmetryCandidate((1,), (0,), tu))
    free = p("1/2*d(u;t)^2", tu)
    assert check_divergence_symmetry(free, SymmetryCandidate((0,), (p("t", tu),), tu, (p("u", tu),)))
    assert check_divergence_symmetry(osc, SymmetryCandidate((0,), (0,), tu))


def test_missing_divergence_term_leaves_residual(tu):
    free = p("1/2*d(u;t)^2", tu)
    res = check_divergence_symmetry(free, SymmetryCandidate((0,), (p("t", tu),), tu))
    assert not res
    assert res.residual == p("d(u;t)", tu)


# Expected currents obey Div B = sum psi Q; each is the negative of the
# textbook energy/momentum written with the opposite orientation.
@pytest.mark.parametrize(
    "text, cand, expected",
    [
        ("1/2*d(u;t)^2 - 1/2*u^2", ((1,), (0,), None), "1/2*d(u;t)^2 + 1/2*u^2"),
        ("1/2*d(u;t)^2", ((0,), (1,), None), "-d(u;t)"),
        ("1/2*d(u;t)^2", ((0,), ("t",), ("u",)), "u - t*d(u;t)"),
    ],
)
def test_noether_current_examples(tu, text, cand, expected):
    f = p(text, tu)
    X, Y, C = cand
    s = SymmetryCandidate(X, tuple(p(str(y), tu) for y in Y), tu, None if C is None else tuple(p(c, tu) for c in C))
    B = noether_current(f, s)
    assert tuple(B) == (p(expected, tu),)
    assert divergence(B) == sum_psi_q(f, s)


def test_noether_current_rejects_non_symmetry():
    prob = load("wave.noe")
    with pytest.raises(NotASymmetryError) as info:
        noether_current(prob.lagrangians["wave"], prob.symmetries["scaling"])
    assert not info.value.residual.is_zero()


@pytest.mark.parametrize("sym", ["time", "space"])
def test_wave_translations(sym):
    prob = load("wave.noe")
    f, s = prob.lagrangians["wave"], prob.symmetries[sym]
    B = noether_current(f, s)
    assert divergence(B) == sum_psi_q(f, s)
    assert classify_triviality(B, prob.normals["shell"]).kind is Triviality.NONTRIVIAL


def test_scaling_equivariance(tu):
    f = p("1/2*d(u;t)^2", tu)
    s = SymmetryCandidate((0,), (p("t", tu),), tu, (p("u", tu),))
    c = Fraction(-7, 3)
    scaled = SymmetryCandidate(s.X, s.Y, tu, tuple(x * c for x in s.C))
    diff = noether_current(f * c, scaled) - noether_current(f, s).scale(c)
    nf = NormalForm(((tu.u("u", "t", "t"), Expr.const(0)),), tu)
    assert classify_triviality(diff, nf).kind is Triviality.SECOND_KIND


# -- Theorem II -------------------------------------------------------------


@pytest.mark.parametrize("file, lag, gauge", [("gauge_uv.noe", "L", "shift"), ("maxwell.noe", "maxwell", "u1")])
def test_noether_identity_vanishes(file, lag, gauge):
    prob = load(file)
    ident = noether_identity(prob.lagrangians[lag], prob.gauges[gauge])
    assert ident.verified
    assert ident.expression.is_zero()


def test_noether_identity_uv_terms():
    prob = load("gauge_uv.noe")
    sp = prob.space
    ident = noether_identity(prob.lagrangians["L"], prob.gauges["shift"])
    psi = euler_lagrange(prob.lagrangians["L"], sp)
    assert ident.terms[0] == psi[0]
    assert ident.terms[1] == -total_derivative(psi[1], "x", sp)


def test_zero_gauge_gives_trivial_identity():
    sp = JetSpace(("t",), ("u",), 1, arbitrary=("p",))
    g = GaugeFamily("p", (LinearDiffOp.scalar({}, sp),), sp)
    ident = noether_identity(p("1/2*d(u;t)^2", sp), g)
    assert ident.verified and ident.expression.is_zero()


def test_broken_gauge_is_reported():
    prob = load("gauge_uv.noe")
    ident = noether_identity(prob.lagrangians["L"], prob.gauges["broken"])
    assert not ident.verified
    assert not ident.expression.is_zero()


@pytest.mark.parametrize("pv", ["1", "t", "x", "t^2", "x^2"])
def test_maxwell_specializations_are_improper(pv):
    prob = load("maxwell.noe")
    sp = prob.space
    law = gauge_specialization(prob.lagrangians["maxwell"], prob.gauges["u1"], p(pv, sp))
    nf = prob.normals["shell"]
    verdict = classify_triviality(law.current, nf, law.first_kind)
    assert verdict.kind in TRIVIAL
    assert verdict.recheck(nf)
    assert all(nf.reduce(c).is_zero() for c in law.first_kind)
    assert divergence(law.second_kind).is_zero()


@pytest.mark.parametrize("pv", ["1", "t", "x", "t^2", "x^2"])
def test_uv_specializations_are_improper(pv):
    prob = load("gauge_uv.noe")
    law = gauge_specialization(prob.lagrangians["L"], prob.gauges["shift"], p(pv, prob.space))
    verdict = classify_triviality(law.current, prob.normals["shell"], law.first_kind)
    assert verdict.kind in TRIVIAL


# -- triviality -------------------------------------------------------------


def test_classify_examples():
    osc = load("oscillator.noe")
    nf = osc.normals["shell"]
    energy, _ = osc.currents["energy"]
    assert classify_triviality(energy, nf).kind is Triviality.NONTRIVIAL
    onshell, _ = osc.currents["onshell"]
    assert classify_triviality(onshell, nf).kind is Triviality.FIRST_KIND
    with pytest.raises(NotAConservationLawError):
        classify_triviality(osc.currents["bogus"][0], nf)
    wave = load("wave.noe")
    curl, _ = wave.currents["curl"]
    assert classify_triviality(curl, wave.normals["shell"]).kind is Triviality.SECOND_KIND


def test_verdicts_recheck():
    osc = load("oscillator.noe")
    nf = osc.normals["shell"]
    for name in ("energy", "onshell"):
        assert classify_triviality(osc.currents[name][0], nf).recheck(nf)


def test_adding_a_curl_keeps_the_class():
    wave = load("wave.noe")
    sp, nf = wave.space, wave.normals["shell"]
    curl, _ = wave.currents["curl"]
    energy = noether_current(wave.lagrangians["wave"], wave.symmetries["time"])
    assert classify_triviality(energy + curl, nf).kind is Triviality.NONTRIVIAL
    psi = euler_lagrange(wave.lagrangians["wave"], sp)[0]
    first = Current((psi * p("d(u;t)", sp), Expr.const(0)), sp)
    assert classify_triviality(first, nf).kind is Triviality.FIRST_KIND
    mixed = classify_triviality(first + curl, nf)
    assert mixed.kind is Triviality.MIXED
    assert mixed.recheck(nf)


def test_cyclic_normal_form_is_reported(txu):
    nf = NormalForm(((txu.u("u", "t"), p("d(u;x)", txu)), (txu.u("u", "x"), p("d(u;t)", txu))), txu)
    with pytest.raises(ReductionError):
        nf.reduce(p("d(u;t)", txu))


def test_prolonged_reduction(tu):
    sp = tu.with_max_order(5)
    nf = NormalForm(((sp.u("u", "t", "t"), p("-u", sp)),), sp)
    assert nf.reduce(p("d(u;t,t,t,t)", sp)) == p("u", sp)


# -- Magri ------------------------------------------------------------------


def _heat(sp, rhs):
    return NormalForm(((sp.u("u", "t"), p(rhs, sp)),), sp)


def test_magri_heat(txu):
    res = magri_check(p("d(u;t) - d(u;x,x)", txu), Expr.const(1), _heat(txu, "d(u;x,x)"))
    assert res
    assert tuple(res.current) == (p("u", txu), p("-d(u;x)", txu))


def test_magri_advection(txu):
    res = magri_check(p("d(u;t) - u*d(u;x)", txu), Expr.const(1), _heat(txu, "u*d(u;x)"))
    assert res
    assert tuple(res.current) == (p("u", txu), p("-1/2*u^2", txu))


def test_magri_zero_multiplier(txu):
    res = magri_check(p("d(u;t) - d(u;x,x)", txu), Expr.const(0), _heat(txu, "d(u;x,x)"))
    assert res
    assert res.current.is_zero()


def test_magri_rejects_bad_multiplier(txu):
    res = magri_check(p("d(u;t) - d(u;x,x)", txu), p("u", txu), _heat(txu, "d(u;x,x)"))
    assert not res
    assert res.residual[0] == p("-2*d(u;x,x)", txu)
