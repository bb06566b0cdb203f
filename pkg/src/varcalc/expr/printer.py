"""Bit-stable text rendering of canonical expressions.

The output is valid input for :func:`varcalc.expr.parse`, and reparsing it
reproduces the same canonical form.
"""

from fractions import Fraction


def _rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _monomial(m, c: Fraction) -> str:
    """Render |c| * m; the caller handles the sign."""
    c = abs(c)
    factors = [str(s) if k == 1 else f"{s}^{k}" for s, k in m]
    if not factors:
        return _rational(c)
    if c != 1:
        factors.insert(0, _rational(c))
    return "*".join(factors)


def to_text(e) -> str:
    items = e.items()
    if not items:
        return "0"
    parts = []
    for i, (m, c) in enumerate(items):
        body = _monomial(m, c)
        if i == 0:
            parts.append("-" + body if c < 0 else body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)
