"""Exact rationals, the Cantor pairing, the rational numbering and ball codes.

Rationals are ``gmpy2.mpq`` values: always reduced, positive denominator,
immutable. Nothing in this module touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from gmpy2 import mpq

Rational = mpq

ZERO = mpq(0)
ONE = mpq(1)


def rational(p, q=1) -> mpq:
    """Build a reduced rational; ``q == 0`` raises ``ZeroDivisionError``."""
    return mpq(p, q)


def parse_rational(text: str) -> mpq:
    """Parse the ``p/q`` text format (``q`` may be omitted)."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    num, sep, den = text.partition("/")
    if sep and not den.strip():
        raise ValueError(f"malformed rational {text!r}")
    return mpq(int(num), int(den) if sep else 1)


def format_rational(x) -> str:
    x = mpq(x)
    if x.denominator == 1:
        return str(int(x.numerator))
    return f"{int(x.numerator)}/{int(x.denominator)}"


def dyadic(n: int) -> mpq:
    """Return 2^-n (n may be negative)."""
    if n >= 0:
        return mpq(1, 1 << n)
    return mpq(1 << -n)


def pair(i: int, j: int) -> int:
    if i < 0 or j < 0:
        raise ValueError("pair is defined on naturals")
    s = i + j
    return s * (s + 1) // 2 + i


def unpair(n: int) -> tuple[int, int]:
    if n < 0:
        raise ValueError("unpair is defined on naturals")
    # largest s with s(s+1)/2 <= n
    s = (isqrt(8 * n + 1) - 1) // 2
    i = n - s * (s + 1) // 2
    return i, s - i


def nu_q(n: int) -> mpq:
    a, b = unpair(n)
    if a % 2 == 0:
        return mpq(-(a // 2), b + 1)
    return mpq((a + 1) // 2, b + 1)


def nu_q_index(x) -> int:
    """Canonical preimage of ``x`` under ``nu_q`` (reduced numerator/denominator)."""
    x = mpq(x)
    p, q = int(x.numerator), int(x.denominator)
    a = -2 * p if p <= 0 else 2 * p - 1
    return pair(a, q - 1)


@dataclass(frozen=True)
class BallCode:
    """Open rational interval coded by a natural number."""

    code: int

    @property
    def center(self) -> mpq:
        return nu_q(unpair(self.code)[0])

    @property
    def radius_exponent(self) -> int:
        return unpair(self.code)[1]

    @property
    def radius(self) -> mpq:
        return dyadic(self.radius_exponent)

    @classmethod
    def from_parts(cls, center, radius_exponent: int) -> "BallCode":
        return cls(pair(nu_q_index(center), radius_exponent))

    def closed_contains(self, x) -> bool:
        return abs(mpq(x) - self.center) <= self.radius


def ball(code: int) -> tuple[mpq, mpq]:
    b = BallCode(code)
    return b.center, b.radius
