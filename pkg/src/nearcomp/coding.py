"""Online prefix-free coding and the two membership decision procedures.

``PrefixCode`` hands out, for each requested length, the lexicographically
least string that is prefix-incomparable with every earlier assignment.
A string of length L is the dyadic interval ``[w, w + 2^-L)`` of [0, 1);
it is available exactly when that interval misses every assigned one, so
the free part of [0, 1) is kept as a sorted list of maximal half-open
intervals with exact rational endpoints.
"""

from __future__ import annotations

from bisect import bisect_right
from typing import Iterable, Iterator

from gmpy2 import mpq

from .core import ZERO, dyadic
from .errors import KraftOverflow, MassExceeded, WeightNotPositive
from .sequences import ModulusEvaluator, SequenceEvaluator, _Recurrence


def is_prefix(u: str, w: str) -> bool:
    return w.startswith(u)


def prefix_free(strings: Iterable[str]) -> bool:
    """Brute-force pairwise check."""
    items = list(strings)
    for i, u in enumerate(items):
        for v in items[i + 1:]:
            if u.startswith(v) or v.startswith(u):
                return False
    return True


def _to_string(start: mpq, length: int) -> str:
    if length == 0:
        return ""
    k = int(start * (1 << length))
    return format(k, f"0{length}b")


class PrefixCode:
    """Stateful Kraft-Chaitin assignment; one owner while it is being built."""

    def __init__(self):
        self.assignments: list[str] = []
        self.kraft_mass = ZERO
        # disjoint, sorted, maximal free intervals [lo, hi)
        self._free: list[tuple[mpq, mpq]] = [(ZERO, mpq(1))]

    def request(self, length: int) -> str:
        if length < 0:
            raise ValueError("code lengths are naturals")
        size = dyadic(length)
        if self.kraft_mass + size > 1:
            raise KraftOverflow(len(self.assignments), self.kraft_mass, length)
        scale = 1 << length
        for pos, (lo, hi) in enumerate(self._free):
            start = mpq(-((-lo.numerator * scale) // lo.denominator), scale)  # ceil to the grid
            if start + size <= hi:
                break
        else:
            # first fit has never been seen to fragment below the Kraft bound;
            # fail loudly rather than return a non-prefix-free code
            raise RuntimeError(f"no free aligned block of length {length} "
                               f"at mass {self.kraft_mass}")
        pieces = []
        if lo < start:
            pieces.append((lo, start))
        if start + size < hi:
            pieces.append((start + size, hi))
        self._free[pos:pos + 1] = pieces
        self.kraft_mass += size
        word = _to_string(start, length)
        self.assignments.append(word)
        return word

    def free_intervals(self) -> list[tuple[mpq, mpq]]:
        return list(self._free)

    def contains_point(self, x) -> bool:
        """Whether ``x`` lies in the free region (used by tests)."""
        x = mpq(x)
        i = bisect_right([lo for lo, _ in self._free], x) - 1
        return i >= 0 and x < self._free[i][1]


def kc_assign(lengths: Iterable[int]) -> Iterator[str]:
    """Pull-based: each string is emitted before the next length is read."""
    code = PrefixCode()
    for length in lengths:
        yield code.request(int(length))


def lengths_from_weights(b: SequenceEvaluator) -> ModulusEvaluator:
    """Code lengths with ``2^-f(n) >= b_n / 2`` and dyadic partial sums below weight partial sums.

    ``b`` must be positive with total mass at most 1; both are checked on the
    prefix that gets evaluated.
    """
    state = {"weights": ZERO, "dyadic": ZERO}

    def step(n, prev):
        w = b(n)
        if w <= 0:
            raise WeightNotPositive(f"weight b_{n} = {w} is not positive")
        weights = state["weights"] + w
        if weights > 1:
            raise MassExceeded(f"partial weight sum {weights} exceeds 1 at index {n}")
        done = state["dyadic"]
        k = 0
        while not done + dyadic(k) < weights:
            k += 1
        state["weights"] = weights
        state["dyadic"] = done + dyadic(k)
        return k

    return ModulusEvaluator(_Recurrence(step), name="lengths")


def _window(items, count: int) -> list:
    if isinstance(items, (list, tuple)):
        return list(items[:count])
    if callable(items):
        return [items(i) for i in range(count)]
    out = []
    it = iter(items)
    for _ in range(count):
        try:
            out.append(next(it))
        except StopIteration:
            break
    return out


def decide_prefix_member(w: str, h, g) -> bool:
    """Decide membership of ``w`` in the enumerated prefix-free set.

    ``h`` is an injective enumeration (list, callable or iterable) and ``g``
    a modulus of ``2^-|h(n)| -> 0``; only ``h(0) .. h(g(|w|+1) - 1)`` is read.
    """
    return w in _window(h, g(len(w) + 1))


def decide_enumerated_member(n: int, f, g) -> bool:
    """Decide ``n in range(f)`` reading only ``f(0) .. f(g(n+1) - 1)``."""
    return n in _window(f, g(n + 1))
