"""Randomized certification of polynomial identities.

Evaluation walks the unevaluated tree with exact rationals, so it shares no
code with the canonicalizer.  A PASS needs both a zero canonical form and a
zero value at every sampled point.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .expr import canonicalize, eval_at, free_symbols

DEFAULT_TRIALS = 16
DEFAULT_BOUND = 97


def _random_rational(rng: random.Random, bound: int) -> Fraction:
    den = rng.randint(1, bound)
    return Fraction(rng.randint(-bound * den, bound * den), den)


def random_point(space, seed: int, bound: int = DEFAULT_BOUND) -> dict:
    """Reproducible rational in [-bound, bound] (denominator <= bound) per symbol.

    ``space`` is a JetSpace / LatticeSpace or any iterable of symbols.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    symbols = space.symbols() if hasattr(space, "symbols") else space
    rng = random.Random(f"varcalc:{seed}")
    return {s: _random_rational(rng, bound) for s in sorted(symbols)}


@dataclass(frozen=True)
class Verdict:
    passed: bool
    canonical_zero: bool
    trials: int
    seed: int
    point: dict | None = None  # witnessing point on FAIL by evaluation
    value: Fraction | None = None

    def __bool__(self):
        return self.passed

    def __str__(self):
        return "PASS" if self.passed else "FAIL"


def certify_zero(e, trials: int = DEFAULT_TRIALS, seed: int = 0, bound: int = DEFAULT_BOUND) -> Verdict:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    symbols = free_symbols(e)
    for t in range(trials):
        point = random_point(symbols, seed * 100003 + t, bound)
        v = eval_at(e, point)
        if v != 0:
            return Verdict(False, canonicalize(e).is_zero(), trials, seed, point, v)
    zero = canonicalize(e).is_zero()
    return Verdict(zero, zero, trials, seed)


__all__ = ["DEFAULT_BOUND", "DEFAULT_TRIALS", "Verdict", "certify_zero", "random_point"]
