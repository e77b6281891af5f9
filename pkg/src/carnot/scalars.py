"""Exact rational scalars.

Every coefficient in this package is an arbitrary-precision rational kept in
lowest terms with a positive denominator.  gmpy2's mpq provides that contract
at C speed; fractions.Fraction is a drop-in fallback.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Rational

ZERO = Rational(0)
ONE = Rational(1)


def rat(value, den=None) -> Rational:
    """Coerce ints, "p/q" strings, or a (num, den) pair to a Rational."""
    if den is not None:
        return Rational(value, den)
    if isinstance(value, str):
        return Rational(value.strip())
    return Rational(value)


def rat_str(q) -> str:
    """Canonical text form: "p" or "p/q" with q > 0."""
    return str(q)
