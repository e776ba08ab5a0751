"""Decoders that read discrete data out of approximations.

* base-4 support decoding: recover ``A`` from approximations of
  ``sum(4^-n for n in A)``;
* the embedding ``alpha -> sum(4^-n for n with nu_q(n) < alpha)``;
* ball labelling and the locator built on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from gmpy2 import mpq

from .core import ZERO, BallCode, dyadic, nu_q, nu_q_index
from .errors import HorizonExceeded, ModulusViolated, TieUndecidable, WitnessInsideBall
from .sequences import (
    DEFAULT_SEARCH_HORIZON,
    ModulusedReal,
    ModulusEvaluator,
    Probe,
    SequenceEvaluator,
    _Recurrence,
    strict_monotonize,
)

DEFAULT_MAX_PRECISION = 256


def quaternary_value(elements: Iterable[int]) -> mpq:
    total = ZERO
    for n in set(elements):
        total += mpq(1, 4**n)
    return total


@dataclass(frozen=True)
class QuaternarySupport:
    elements: frozenset
    m: int

    @property
    def value(self) -> mpq:
        return quaternary_value(self.elements)


def nearest_support(x, m: int) -> frozenset | None:
    """The unique ``B`` within ``{0..m}`` with ``|4^-B - x| < 4^-m / 2``, or ``None``.

    Distinct supports inside ``{0..m}`` are at least ``4^-m`` apart, so the
    only candidate is the base-4 integer nearest to ``x * 4^m``; it
    qualifies when all its digits are 0 or 1. Digits are read
    most-significant first.
    """
    scaled = mpq(x) * 4**m
    # nearest integer; a half-integer is never strictly within 1/2
    k = int((scaled * 2 + 1) // 2)
    if not abs(scaled - k) < mpq(1, 2) or k < 0:
        return None
    if k >= 4 ** (m + 1):
        return None
    out = []
    for pos in range(m + 1):
        digit = (k >> (2 * (m - pos))) & 3
        if digit > 1:
            return None
        if digit:
            out.append(pos)
    return frozenset(out)


class _SupportSearch:
    """The index map ``r`` and the supports ``B_n`` read at ``a[r(n)]``."""

    def __init__(self, a: SequenceEvaluator, horizon: int):
        self.a = a
        self.supports: list[frozenset] = []

        def step(n, prev):
            k = prev[-1] + 1 if prev else 0
            while True:
                if k > horizon:
                    raise HorizonExceeded("extract_support", horizon)
                b = nearest_support(a(k), n)
                if b is not None:
                    self.supports.append(b)
                    return k
                k += 1

        self.r = _Recurrence(step)

    def support(self, m: int) -> frozenset:
        self.r(m)
        return self.supports[m]


def _search_for(a: SequenceEvaluator, horizon: int) -> _SupportSearch:
    # one search per sequence object: r depends only on a
    search = getattr(a, "_support_search", None)
    if search is None:
        search = _SupportSearch(a, horizon)
        a._support_search = search
    return search


def support_probe(a: SequenceEvaluator, horizon: int = DEFAULT_SEARCH_HORIZON) -> Probe:
    """The strictly increasing ``r`` rebuilt from ``a`` by minimal search."""
    return Probe(_search_for(a, horizon).r, name="support-r")


def extract_support(a: SequenceEvaluator, m: int,
                    horizon: int = DEFAULT_SEARCH_HORIZON) -> QuaternarySupport:
    return QuaternarySupport(_search_for(a, horizon).support(m), m)


def decode_quaternary(a: SequenceEvaluator, g: ModulusEvaluator, n: int,
                      horizon: int = DEFAULT_SEARCH_HORIZON,
                      validate_window: int | None = 16) -> int:
    """Bit ``n`` of ``A`` from a sequence converging to ``4^-A``.

    ``g`` must be a modulus of ``a[r(m+1)] - a[r(m)] -> 0`` for the ``r``
    rebuilt here. It is strictified first, then checked against ``r`` on
    ``0..validate_window`` (pass ``None`` to skip); the check can only
    falsify.
    """
    search = _search_for(a, horizon)
    gs = strict_monotonize(g)
    if validate_window is not None:
        from .harness import check_modulus

        r = Probe(search.r, name="support-r")
        bad = check_modulus(a, r, gs, validate_window)
        if bad:
            v = bad[0]
            raise ModulusViolated(
                f"modulus fails at m={v.m}, n={v.n}: increment {v.observed} > {v.bound}"
            )
    return 1 if n in search.support(gs(2 * n + 3)) else 0


def _decide_below(x: ModulusedReal, c: mpq, max_precision: int, n: int) -> bool:
    for k in range(max_precision + 1):
        approx = x.approx(k)
        eps = dyadic(k)
        if c < approx - eps:
            return True
        if c > approx + eps:
            return False
    raise TieUndecidable(n, max_precision)


def embedding_terms(precision: int) -> int:
    """Least ``T`` with ``4^-T / 3 <= 2^-(precision+1)``."""
    t = 0
    while mpq(1, 3 * 4**t) > dyadic(precision + 1):
        t += 1
    return t


def embed_indicator_sum(x: ModulusedReal, precision: int,
                        max_precision: int = DEFAULT_MAX_PRECISION) -> mpq:
    """Within ``2^-precision`` of ``sum(4^-n for n with nu_q(n) < x)``; ``x`` irrational.

    An exact rational ``x`` is refused up front with the index ``n`` where
    ``nu_q(n) == x``: no amount of refinement separates that term.
    """
    if not isinstance(x, ModulusedReal):
        raise TieUndecidable(nu_q_index(mpq(x)), max_precision)
    total = ZERO
    for n in range(embedding_terms(precision) + 1):
        if _decide_below(x, nu_q(n), max_precision, n):
            total += mpq(1, 4**n)
    return total


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class LabeledBall:
    ball: BallCode
    side: Side
    witness_index: int


def _as_ball(b) -> BallCode:
    return b if isinstance(b, BallCode) else BallCode(int(b))


def label_ball(z: SequenceEvaluator, g: ModulusEvaluator, f, n: int) -> LabeledBall:
    """Which side of the limit the closed ball ``f(n)`` lies on.

    ``g`` is a modulus of ``|z_{m+1} - z_m| -> 0``. The witness index is
    ``max(n + 1, g(radius exponent))``.
    """
    b = _as_ball(f(n) if callable(f) else f[n])
    r = max(n + 1, g(b.radius_exponent))
    w = z(r)
    c = b.center
    if abs(w - c) <= b.radius:
        raise WitnessInsideBall(f"z_{r} = {w} lies in closed ball {b.code} "
                                f"(center {c}, radius {b.radius})")
    return LabeledBall(b, Side.LEFT if c < w else Side.RIGHT, r)


@dataclass
class Bracket:
    lower: mpq | None = None
    upper: mpq | None = None
    scanned: int = 0
    contributions: int = 0

    @property
    def width(self):
        if self.lower is None or self.upper is None:
            return None
        return self.upper - self.lower


def locate_bracket(z: SequenceEvaluator, g: ModulusEvaluator, f, precision: int,
                   max_balls: int = DEFAULT_SEARCH_HORIZON) -> Bracket:
    tol = dyadic(precision)
    br = Bracket()
    n = 0
    while True:
        if br.width is not None and br.width <= tol:
            return br
        if n >= max_balls:
            raise HorizonExceeded("locate: bracket did not close (balls not dense?)", max_balls)
        lab = label_ball(z, g, f, n)
        b = lab.ball
        if lab.side is Side.LEFT:
            edge = b.center + b.radius
            if br.lower is None or edge > br.lower:
                br.lower = edge
                br.contributions += 1
        else:
            edge = b.center - b.radius
            if br.upper is None or edge < br.upper:
                br.upper = edge
                br.contributions += 1
        n += 1
        br.scanned = n


def locate(z: SequenceEvaluator, g: ModulusEvaluator, f, precision: int,
           max_balls: int = DEFAULT_SEARCH_HORIZON) -> mpq:
    """Midpoint of the first bracket of width at most ``2^-precision``."""
    br = locate_bracket(z, g, f, precision, max_balls)
    return (br.lower + br.upper) / 2
