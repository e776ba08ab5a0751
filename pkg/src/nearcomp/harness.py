"""Finite-horizon falsification of modulus claims.

A modulus statement quantifies over every index, so nothing here verifies
one. An empty violation list means "no falsification at this horizon" and
nothing more.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .core import dyadic, format_rational
from .sequences import (
    DEFAULT_CHECK_HORIZON,
    ModulusedReal,
    ModulusEvaluator,
    Probe,
    SequenceEvaluator,
)


@dataclass(frozen=True)
class Violation:
    m: int
    n: int
    observed: mpq
    bound: mpq

    def format(self) -> str:
        return f"m={self.m} n={self.n} observed={format_rational(self.observed)} " \
               f"bound={format_rational(self.bound)}"


@dataclass
class ModulusTable:
    """Pointwise least nondecreasing modulus that survives the window.

    ``entries[n] == horizon + 1`` means no index inside the window works.
    """

    horizon: int
    entries: list[int] = field(default_factory=list)

    def __getitem__(self, n):
        return self.entries[n]

    def __len__(self):
        return len(self.entries)

    def as_modulus(self) -> ModulusEvaluator:
        last = self.entries[-1]
        return ModulusEvaluator(lambda n: self.entries[n] if n < len(self.entries) else last,
                                declared_monotone=True, name="oracle")

    def format(self) -> str:
        return "".join(f"{n} {e}\n" for n, e in enumerate(self.entries))


def _increments(x: SequenceEvaluator, r, horizon: int) -> list[mpq]:
    return [abs(x(r(m + 1)) - x(r(m))) for m in range(horizon + 1)]


def check_modulus(x: SequenceEvaluator, r, g, horizon: int = DEFAULT_CHECK_HORIZON
                  ) -> list[Violation]:
    """Every ``(m, n)`` with ``g(n) <= m <= horizon`` where ``|x[r(m+1)] - x[r(m)]| > 2^-n``."""
    if r is None:
        r = Probe.identity()
    inc = _increments(x, r, horizon)
    monotone = getattr(g, "declared_monotone", False)
    out = []
    for n in range(horizon + 1):
        start = g(n)
        if start > horizon:
            if monotone:
                # later entries are past the window too; asking for them may be costly
                break
            continue
        bound = dyadic(n)
        for m in range(start, horizon + 1):
            if inc[m] > bound:
                out.append(Violation(m, n, inc[m], bound))
    return out


def brute_min_modulus(x: SequenceEvaluator, r, horizon: int = DEFAULT_CHECK_HORIZON
                      ) -> ModulusTable:
    if r is None:
        r = Probe.identity()
    inc = _increments(x, r, horizon)
    entries = []
    for n in range(horizon + 1):
        bound = dyadic(n)
        last_bad = -1
        for m in range(horizon, -1, -1):
            if inc[m] > bound:
                last_bad = m
                break
        entries.append(last_bad + 1)
    return ModulusTable(horizon, entries)


def check_cauchy_modulus(x: SequenceEvaluator, g, horizon: int = DEFAULT_CHECK_HORIZON
                         ) -> list[Violation]:
    """Falsify ``|x_l - x_m| <= 2^-n`` for ``l, m >= g(n)`` inside ``0..horizon``.

    One violation is reported per failing ``n``: ``m`` is the left end of
    the window and ``observed`` its spread.
    """
    vals = [x(i) for i in range(horizon + 1)]
    # suffix extremes
    hi = vals[:]
    lo = vals[:]
    for i in range(horizon - 1, -1, -1):
        hi[i] = max(hi[i], hi[i + 1])
        lo[i] = min(lo[i], lo[i + 1])
    out = []
    for n in range(horizon + 1):
        start = g(n)
        if start > horizon:
            if getattr(g, "declared_monotone", False):
                break
            continue
        spread = hi[start] - lo[start]
        if spread > dyadic(n):
            out.append(Violation(start, n, spread, dyadic(n)))
    return out


def check_convergence_modulus(x: SequenceEvaluator, limit, g,
                              horizon: int = DEFAULT_CHECK_HORIZON) -> list[Violation]:
    """Falsify ``|x_m - limit| <= 2^-n`` for ``m >= g(n)`` inside the window."""
    limit = mpq(limit)
    dist = [abs(x(m) - limit) for m in range(horizon + 1)]
    out = []
    for n in range(horizon + 1):
        start = g(n)
        if start > horizon and getattr(g, "declared_monotone", False):
            break
        bound = dyadic(n)
        for m in range(start, horizon + 1):
            if dist[m] > bound:
                out.append(Violation(m, n, dist[m], bound))
    return out


def check_real(x: ModulusedReal, horizon: int = DEFAULT_CHECK_HORIZON) -> list[Violation]:
    """The invariant of a modulus-carrying real, falsified on a window."""
    return check_cauchy_modulus(x.approximant, x.cauchy_modulus, horizon)


def probe_suite() -> list[Probe]:
    return [
        Probe(lambda n: n, name="identity"),
        Probe(lambda n: 2 * n, name="double"),
        Probe(lambda n: n * n, name="square"),
        Probe(lambda n: n * (n + 1) // 2, name="triangular"),
        Probe(lambda n: n + 3, name="shift3"),
    ]


def falsify_cauchy(x: SequenceEvaluator, epsilon_exponent: int,
                   horizon: int = DEFAULT_CHECK_HORIZON) -> tuple[int, int] | None:
    """First pair ``k < l <= horizon`` (ordered by ``l``, then ``k``) further apart than ``2^-e``."""
    eps = dyadic(epsilon_exponent)
    seen = [x(0)]
    lo = hi = seen[0]
    for l in range(1, horizon + 1):
        v = x(l)
        if hi - v > eps or v - lo > eps:
            for k, u in enumerate(seen):
                if abs(u - v) > eps:
                    return k, l
        seen.append(v)
        lo, hi = min(lo, v), max(hi, v)
    return None
