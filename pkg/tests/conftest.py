import random
from fractions import Fraction
from pathlib import Path

import pytest

from varcalc.expr import Expr, JetSpace, LatticeSpace, multi_indices, parse

ROOT = Path(__file__).resolve().parent.parent
PROBLEMS = ROOT / "problems"
GOLDEN = Path(__file__).resolve().parent / "golden"


def jet_pool(space: JetSpace, max_order: int, with_x=True):
    """Independent variables and field jets up to ``max_order``."""
    pool = [space.x(i) for i in range(space.n)] if with_x else []
    for i in range(len(space.fields)):
        for J in multi_indices(space.n, max_order):
            pool.append(space.jet(i, J))
    return pool


def random_poly(rng: random.Random, pool, terms=3, degree=3, coeff=5) -> Expr:
    """Sum of ``terms`` random monomials of total degree <= ``degree``."""
    out = Expr.const(0)
    for _ in range(terms):
        c = rng.randint(-coeff, coeff) or 1
        m = Expr.const(Fraction(c, rng.randint(1, 3)))
        for _ in range(rng.randint(0, degree)):
            m = m * Expr.sym(rng.choice(pool))
        out = out + m
    return out


@pytest.fixture
def tu():
    return JetSpace(("t",), ("u",), 1)


@pytest.fixture
def txu():
    return JetSpace(("t", "x"), ("u",), 1)


@pytest.fixture
def lattice():
    return LatticeSpace(("u",), "n", 6)


@pytest.fixture
def P():
    """Parse shorthand: P(text, space)."""
    return parse
