"""Field operations on modulus-carrying reals and root refinement by bisection.

Every operation returns a new :class:`ModulusedReal` whose approximant is
the pointwise combination of the inputs' approximants and whose Cauchy
modulus is derived from theirs. Magnitude bounds for products and inverses
come from one refinement of the inputs; the exponent used is stored on the
result as ``bound_exponent``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Sequence

from gmpy2 import mpq

from .core import dyadic
from .errors import SignUndecidable, ZeroWitnessNotFound
from .sequences import (
    ModulusedReal,
    ModulusEvaluator,
    SequenceEvaluator,
    bound_exponent,
    sum_modulus,
)

DEFAULT_SIGN_BUDGET = 256


def as_real(x) -> ModulusedReal:
    return x if isinstance(x, ModulusedReal) else ModulusedReal.from_rational(x)


def sqrt_real(c) -> ModulusedReal:
    """Square root of a rational ``c >= 0``.

    ``approx`` at index ``n`` is the integer square root (Newton's method on
    integers) of ``c * 4^(n+1)`` over ``2^(n+1)``, a lower approximation
    within ``2^-(n+1)``.
    """
    c = mpq(c)
    if c < 0:
        raise ValueError("square root of a negative rational")
    p, q = int(c.numerator), int(c.denominator)

    def approx(n):
        scale = 1 << (n + 1)
        # floor(sqrt(p/q) * scale) = floor(sqrt(p*q*scale^2) / q)
        return mpq(isqrt(p * q * scale * scale) // q, scale)

    return ModulusedReal.from_fast(approx, name=f"sqrt({c})")


def creal_neg(x) -> ModulusedReal:
    x = as_real(x)
    seq = SequenceEvaluator(lambda m: -x.approximant(m), name=f"-{x.name}")
    return ModulusedReal(seq, x.cauchy_modulus, name=f"-({x.name})")


def creal_add(x, y) -> ModulusedReal:
    x, y = as_real(x), as_real(y)
    seq = SequenceEvaluator(lambda m: x.approximant(m) + y.approximant(m),
                            name=f"{x.name}+{y.name}")
    return ModulusedReal(seq, sum_modulus(x.cauchy_modulus, y.cauchy_modulus),
                         name=f"({x.name}+{y.name})")


def creal_sub(x, y) -> ModulusedReal:
    return creal_add(x, creal_neg(y))


def magnitude_exponent(x: ModulusedReal) -> int:
    """Least ``k`` with ``2^k > |a| + 3/2`` for ``a = approx(1)``, so ``2^k > |x| + 1``."""
    return bound_exponent(abs(x.approx(1)) + mpq(3, 2))


def creal_mul(x, y) -> ModulusedReal:
    x, y = as_real(x), as_real(y)
    k = max(magnitude_exponent(x), magnitude_exponent(y))
    gx, gy = x.cauchy_modulus, y.cauchy_modulus
    g = ModulusEvaluator(lambda n: max(gx(n + k + 1), gy(n + k + 1)),
                         name=f"mul({gx.name},{gy.name};{k})")
    seq = SequenceEvaluator(lambda m: x.approximant(m) * y.approximant(m),
                            name=f"{x.name}*{y.name}")
    out = ModulusedReal(seq, g, name=f"({x.name}*{y.name})")
    out.bound_exponent = k
    return out


def nonzero_exponent(x: ModulusedReal, budget: int = DEFAULT_SIGN_BUDGET) -> int:
    """Least ``k`` with ``|x| >= 2^(1-k)``, witnessed by some ``approx(j)``, ``j <= budget``."""
    for j in range(budget + 1):
        lower = abs(x.approx(j)) - dyadic(j)
        if lower > 0:
            k = 0
            while dyadic(k - 1) > lower:
                k += 1
            return k
    raise ZeroWitnessNotFound(f"{x.name} not separated from 0 at precision {budget}")


def creal_inv(x, budget: int = DEFAULT_SIGN_BUDGET) -> ModulusedReal:
    """Reciprocal of a real that refinement separates from zero.

    With ``|x| >= 2^(1-k)`` every approximant of index at least ``g(2k)``
    has magnitude at least ``2^-k``; indices below that are clamped to it.
    The modulus is ``n -> g(n + 2k)``.
    """
    x = as_real(x)
    k = nonzero_exponent(x, budget)
    g = x.cauchy_modulus
    floor_index = g(2 * k)
    seq = SequenceEvaluator(lambda m: 1 / x.approximant(max(m, floor_index)),
                            name=f"1/{x.name}")
    mod = ModulusEvaluator(lambda n: g(n + 2 * k), name=f"inv({g.name};{k})")
    out = ModulusedReal(seq, mod, name=f"1/({x.name})")
    out.bound_exponent = k
    return out


@dataclass
class Polynomial:
    """Coefficients ``b_0 .. b_k``, lowest degree first."""

    coefficients: list

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("a polynomial needs at least one coefficient")
        self.coefficients = [as_real(c) for c in self.coefficients]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @classmethod
    def from_rationals(cls, coeffs: Sequence) -> "Polynomial":
        return cls([ModulusedReal.from_rational(c) for c in coeffs])

    def derivative(self) -> "Polynomial":
        if self.degree == 0:
            return Polynomial([0])
        return Polynomial([creal_mul(i, c) if i != 1 else c
                           for i, c in enumerate(self.coefficients) if i > 0])


def poly_eval(p: Polynomial, x) -> ModulusedReal:
    """Horner's scheme over :func:`creal_add` and :func:`creal_mul`."""
    x = as_real(x)
    acc = p.coefficients[-1]
    for c in reversed(p.coefficients[:-1]):
        acc = creal_add(creal_mul(acc, x), c)
    return acc


def sign_of(x: ModulusedReal, budget: int = DEFAULT_SIGN_BUDGET) -> int | None:
    """+1 or -1 once some ``approx(j)`` with ``j <= budget`` clears ``2^-j``; ``None`` otherwise."""
    for j in range(budget + 1):
        a = x.approx(j)
        eps = dyadic(j)
        if a > eps:
            return 1
        if a < -eps:
            return -1
    return None


@dataclass(frozen=True)
class SignedInterval:
    lo: mpq
    hi: mpq
    sign_lo: int
    sign_hi: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty bracket [{self.lo}, {self.hi}]")
        if {self.sign_lo, self.sign_hi} != {1, -1}:
            raise ValueError("bracket endpoints need opposite signs")

    @classmethod
    def for_polynomial(cls, p: Polynomial, lo, hi,
                       budget: int = DEFAULT_SIGN_BUDGET) -> "SignedInterval":
        lo, hi = mpq(lo), mpq(hi)
        slo = sign_of(poly_eval(p, lo), budget)
        shi = sign_of(poly_eval(p, hi), budget)
        if slo is None or shi is None:
            raise SignUndecidable(f"cannot determine the sign at a bracket end of [{lo}, {hi}]")
        return cls(lo, hi, slo, shi)


def refine_root(p: Polynomial, bracket: SignedInterval, precision: int,
                budget: int = DEFAULT_SIGN_BUDGET, trace: list | None = None) -> mpq:
    """A rational within ``2^-precision`` of a root inside the sign-change bracket.

    Each step tries the midpoint; if its sign cannot be settled within
    ``budget`` refinements the two trisection points are tried in turn.
    ``trace`` (when given) receives every accepted ``(lo, hi)``.
    """
    lo, hi, slo = bracket.lo, bracket.hi, bracket.sign_lo
    tol = dyadic(precision)
    while hi - lo > tol:
        w = hi - lo
        for t in (lo + w / 2, lo + w / 3, lo + 2 * w / 3):
            s = sign_of(poly_eval(p, t), budget)
            if s is not None:
                break
        else:
            raise SignUndecidable(f"no trial point in [{lo}, {hi}] has a decidable sign")
        if s == slo:
            lo = t
        else:
            hi = t
        if trace is not None:
            trace.append((lo, hi))
    return (lo + hi) / 2
