"""Memoized evaluators for sequences, moduli and probes, plus the modulus algebra.

A sequence is a pure total map ``index -> Rational``; a modulus is a pure
total map ``precision -> index``; a probe is a strictly increasing index map.
All three memoize. Memo writes are single dict stores of a deterministic
value, so concurrent evaluation from several threads can at worst compute
the same entry twice.

None of the moduli produced here is checked for validity on construction.
Validity of a modulus quantifies over all indices; the harness module can
falsify it on a finite window, never verify it.
"""

from __future__ import annotations

import threading
from typing import Callable, Iterable

from gmpy2 import mpq

from .core import dyadic, unpair
from .errors import HorizonExceeded, UnboundednessUnverified

DEFAULT_SEARCH_HORIZON = 10**5
DEFAULT_CHECK_HORIZON = 128


class SequenceEvaluator:
    """A computable sequence of rationals with a memo table."""

    def __init__(self, fn: Callable[[int], object], name: str | None = None):
        self._fn = fn
        self._memo: dict[int, mpq] = {}
        self.name = name or getattr(fn, "__name__", "sequence")

    def __call__(self, n: int) -> mpq:
        v = self._memo.get(n)
        if v is None:
            if n < 0:
                raise IndexError(f"negative index {n}")
            v = self._memo.setdefault(n, mpq(self._fn(n)))
        return v

    __getitem__ = __call__

    def uncached(self, n: int) -> mpq:
        """Same value as ``self(n)`` without storing it; for single-pass scans."""
        v = self._memo.get(n)
        return mpq(self._fn(n)) if v is None else v

    def take(self, count: int, start: int = 0) -> list[mpq]:
        return [self(i) for i in range(start, start + count)]

    def __repr__(self):
        return f"SequenceEvaluator({self.name})"

    @classmethod
    def constant(cls, c) -> "SequenceEvaluator":
        c = mpq(c)
        return cls(lambda n: c, name=f"const({c})")

    @classmethod
    def from_list(cls, values: Iterable, name="table") -> "SequenceEvaluator":
        """A finite table extended by repeating its last value."""
        vals = [mpq(v) for v in values]
        if not vals:
            raise ValueError("empty table")
        last = len(vals) - 1
        return cls(lambda n: vals[min(n, last)], name=name)


class ModulusEvaluator:
    """A map precision-index -> index, optionally declared nondecreasing."""

    def __init__(self, fn: Callable[[int], int], declared_monotone: bool = False,
                 name: str | None = None):
        self._fn = fn
        self._memo: dict[int, int] = {}
        self.declared_monotone = declared_monotone
        self.name = name or getattr(fn, "__name__", "modulus")

    def __call__(self, n: int) -> int:
        v = self._memo.get(n)
        if v is None:
            if n < 0:
                raise IndexError(f"negative precision {n}")
            v = int(self._fn(n))
            if v < 0:
                raise ValueError(f"modulus {self.name} returned negative index {v}")
            v = self._memo.setdefault(n, v)
        return v

    def table(self, count: int) -> list[int]:
        return [self(n) for n in range(count)]

    def __repr__(self):
        return f"ModulusEvaluator({self.name})"

    @classmethod
    def constant(cls, c: int) -> "ModulusEvaluator":
        return cls(lambda n: c, declared_monotone=True, name=f"const({c})")

    @classmethod
    def identity(cls) -> "ModulusEvaluator":
        return cls(lambda n: n, declared_monotone=True, name="identity")


class Probe:
    """A strictly increasing index map, the adversary of the near-Cauchy condition.

    Strictness cannot be checked globally; :meth:`validate` checks a window.
    """

    def __init__(self, fn: Callable[[int], int], name: str | None = None):
        self._fn = fn
        self._memo: dict[int, int] = {}
        self.name = name or getattr(fn, "__name__", "probe")

    def __call__(self, n: int) -> int:
        v = self._memo.get(n)
        if v is None:
            if n < 0:
                raise IndexError(f"negative index {n}")
            v = self._memo.setdefault(n, int(self._fn(n)))
        return v

    def uncached(self, n: int) -> int:
        v = self._memo.get(n)
        return int(self._fn(n)) if v is None else v

    def validate(self, window: int) -> None:
        prev = self(0)
        if prev < 0:
            raise ValueError(f"probe {self.name} is negative at 0")
        for n in range(1, window + 1):
            cur = self(n)
            if cur <= prev:
                raise ValueError(f"probe {self.name} not strictly increasing at {n - 1}")
            prev = cur

    def as_modulus(self) -> ModulusEvaluator:
        return ModulusEvaluator(self, declared_monotone=True, name=self.name)

    def __repr__(self):
        return f"Probe({self.name})"

    @classmethod
    def identity(cls) -> "Probe":
        return cls(lambda n: n, name="identity")


class ModulusedReal:
    """A rational approximant together with a Cauchy modulus.

    The represented real is the limit ``x``; ``approx(n)`` is within
    ``2^-n`` of ``x`` because a Cauchy modulus is also a modulus of
    convergence.
    """

    def __init__(self, approximant: SequenceEvaluator, cauchy_modulus: ModulusEvaluator,
                 name: str | None = None):
        self.approximant = approximant
        self.cauchy_modulus = cauchy_modulus
        self.name = name or approximant.name
        # filled by field operations that need a magnitude bound
        self.bound_exponent: int | None = None

    def approx(self, n: int) -> mpq:
        return self.approximant(self.cauchy_modulus(n))

    def __repr__(self):
        return f"ModulusedReal({self.name})"

    @classmethod
    def from_rational(cls, q) -> "ModulusedReal":
        q = mpq(q)
        return cls(SequenceEvaluator.constant(q), ModulusEvaluator.constant(0), name=str(q))

    @classmethod
    def from_fast(cls, fn: Callable[[int], object], name: str | None = None) -> "ModulusedReal":
        """From a map with ``|x - fn(n)| <= 2^-n``; the Cauchy modulus is ``n + 1``."""
        seq = SequenceEvaluator(fn, name=name)
        g = ModulusEvaluator(lambda n: n + 1, declared_monotone=True, name="n+1")
        return cls(seq, g, name=name)


class RealSequenceGrid:
    """A computable sequence of reals given as a grid ``q(n, k)`` with ``|x_n - q(n, k)| <= 2^-k``."""

    def __init__(self, fn: Callable[[int, int], object], name: str | None = None):
        self._fn = fn
        self._memo: dict[tuple[int, int], mpq] = {}
        self.name = name or "grid"

    def __call__(self, n: int, k: int) -> mpq:
        key = (n, k)
        try:
            return self._memo[key]
        except KeyError:
            return self._memo.setdefault(key, mpq(self._fn(n, k)))

    def paired(self) -> SequenceEvaluator:
        """The same grid read through the pairing function, ``q_<n,k>``."""
        return SequenceEvaluator(lambda c: self(*unpair(c)), name=f"{self.name}<.,.>")

    @classmethod
    def exact(cls, seq: SequenceEvaluator) -> "RealSequenceGrid":
        return cls(lambda n, k: seq(n), name=f"exact({seq.name})")


class _Recurrence:
    """Lazily extended list for index maps defined by a minimal search on the previous value."""

    def __init__(self, step: Callable[[int, list], int]):
        self._step = step
        self._values: list[int] = []
        self._lock = threading.Lock()

    def __call__(self, n: int) -> int:
        if n < len(self._values):
            return self._values[n]
        with self._lock:
            while len(self._values) <= n:
                self._values.append(self._step(len(self._values), self._values))
        return self._values[n]


# ---------------------------------------------------------------------------
# modulus algebra


def shift_modulus(g: ModulusEvaluator, k: int, name: str | None = None) -> ModulusEvaluator:
    return ModulusEvaluator(lambda n: g(n + k), declared_monotone=g.declared_monotone,
                            name=name or f"{g.name}(n+{k})")


def cauchy_from_convergence(g: ModulusEvaluator) -> ModulusEvaluator:
    """A modulus of convergence ``g`` yields the Cauchy modulus ``n -> g(n+1)``."""
    return shift_modulus(g, 1, name=f"cauchy({g.name})")


def convergence_from_cauchy(g: ModulusEvaluator) -> ModulusEvaluator:
    """A Cauchy modulus of a convergent sequence is already a modulus of convergence."""
    return g


def monotonize(g: ModulusEvaluator) -> ModulusEvaluator:
    def step(n, prev):
        return g(n) if n == 0 else max(prev[-1], g(n))

    rec = _Recurrence(step)
    return ModulusEvaluator(rec, declared_monotone=True, name=f"mono({g.name})")


def strict_monotonize(g: ModulusEvaluator) -> ModulusEvaluator:
    def step(n, prev):
        return g(0) if n == 0 else max(prev[-1] + 1, g(n))

    rec = _Recurrence(step)
    return ModulusEvaluator(rec, declared_monotone=True, name=f"smono({g.name})")


def sum_modulus(gx: ModulusEvaluator, gy: ModulusEvaluator) -> ModulusEvaluator:
    return ModulusEvaluator(lambda n: max(gx(n + 1), gy(n + 1)),
                            declared_monotone=gx.declared_monotone and gy.declared_monotone,
                            name=f"sum({gx.name},{gy.name})")


def bound_exponent(lam) -> int:
    """Least ``k`` with ``2^k > |lam|``."""
    a = abs(mpq(lam))
    k = 0
    while (1 << k) <= a:
        k += 1
    return k


def scale_modulus(g: ModulusEvaluator, lam) -> ModulusEvaluator:
    k = bound_exponent(lam)
    return shift_modulus(g, k, name=f"scale({g.name},{mpq(lam)})")


def close_transfer_modulus(f: ModulusEvaluator, g: ModulusEvaluator) -> ModulusEvaluator:
    """Modulus for ``y``'s probed increments when ``|x_n - y_n| -> 0`` with modulus ``f``.

    ``g`` is a modulus of ``x``'s probed increments under the same probe.
    """
    return ModulusEvaluator(lambda n: max(f(n + 2), g(n + 2)),
                            declared_monotone=f.declared_monotone and g.declared_monotone,
                            name=f"close({f.name},{g.name})")


def monotone_step_modulus(s, g: ModulusEvaluator,
                          horizon: int = DEFAULT_CHECK_HORIZON) -> ModulusEvaluator:
    """Compose ``s`` after ``g``; a modulus of ``x_{n+1} - x_n`` for nondecreasing ``x``.

    ``s`` must tend to infinity. That is evidenced (not proved) by ``s``
    being declared or sampled nondecreasing on ``0..horizon`` and reaching
    ``horizon`` there.
    """
    if isinstance(s, Probe):
        s_fn, monotone = s, True
    else:
        s_fn, monotone = s, getattr(s, "declared_monotone", False)
    values = [s_fn(n) for n in range(horizon + 1)]
    if not monotone and any(b < a for a, b in zip(values, values[1:])):
        raise UnboundednessUnverified("index map is not nondecreasing on the sample window")
    if values[-1] < horizon:
        raise UnboundednessUnverified(
            f"index map stays below {horizon} on 0..{horizon}; cannot evidence unboundedness"
        )
    return ModulusEvaluator(lambda n: s_fn(g(n)), declared_monotone=g.declared_monotone,
                            name=f"step({getattr(s_fn, 'name', 's')},{g.name})")


def modulus_from_limit(a: RealSequenceGrid, b: SequenceEvaluator,
                       horizon: int = DEFAULT_SEARCH_HORIZON) -> ModulusEvaluator:
    """Strictly increasing convergence modulus of nondecreasing ``a`` towards a computable limit.

    ``b`` must satisfy ``|b_n - alpha| <= 2^-(n+2)``. ``g(n)`` is the least
    index above ``g(n-1)`` where the diagonal ``d_m = a(m, m+2)`` meets
    ``b_m`` within ``2^-(n+2)``.
    """

    def step(n, prev):
        m = prev[-1] + 1 if prev else 0
        tol = dyadic(n + 2)
        while abs(a(m, m + 2) - b(m)) > tol:
            m += 1
            if m > horizon:
                raise HorizonExceeded("modulus_from_limit", horizon)
        return m

    return ModulusEvaluator(_Recurrence(step), declared_monotone=True, name="limit-modulus")


def strictify(x: RealSequenceGrid) -> SequenceEvaluator:
    """Strictly increasing rationals below a nondecreasing real sequence.

    ``2^-(n+1) <= x_n - a_n <= 3 * 2^-(n+2)``.
    """
    return SequenceEvaluator(lambda n: x(n, n + 3) - 5 * dyadic(n + 3),
                             name=f"strict({x.name})")


def overtake(a: SequenceEvaluator, c: SequenceEvaluator,
             horizon: int = DEFAULT_SEARCH_HORIZON) -> tuple[Probe, Probe]:
    """Probes ``s, t`` with ``a[s(n)] < c[t(n)] < a[s(n+1)]`` for all ``n``.

    ``a`` and ``c`` must be strictly increasing with the same limit.
    """
    s_vals: list[int] = [0]
    t_vals: list[int] = []
    lock = threading.RLock()

    def search(seq, start, bound):
        k = start
        while not seq(k) > bound:
            k += 1
            if k > horizon:
                raise HorizonExceeded("overtake", horizon)
        return k

    def extend_t(n):
        with lock:
            while len(t_vals) <= n:
                i = len(t_vals)
                if i == 0:
                    t_vals.append(search(c, 0, a(0)))
                    continue
                if len(s_vals) <= i:
                    s_vals.append(search(a, s_vals[-1] + 1, c(t_vals[i - 1])))
                t_vals.append(search(c, t_vals[-1] + 1, a(s_vals[i])))

    def s_fn(n):
        if n >= len(s_vals):
            extend_t(n)
        return s_vals[n]

    def t_fn(n):
        if n >= len(t_vals):
            extend_t(n)
        return t_vals[n]

    return Probe(s_fn, name="overtake-s"), Probe(t_fn, name="overtake-t")


def synchronize(a: SequenceEvaluator, b: SequenceEvaluator,
                horizon: int = DEFAULT_SEARCH_HORIZON) -> Probe:
    """Least strictly increasing ``s`` with ``|a[s(n)] - b[s(n)]| <= 2^-n``."""

    def step(n, prev):
        k = prev[-1] + 1 if prev else 0
        tol = dyadic(n)
        while abs(a(k) - b(k)) > tol:
            k += 1
            if k > horizon:
                raise HorizonExceeded("synchronize", horizon)
        return k

    return Probe(_Recurrence(step), name="sync")


def probe_compose(s: Probe, r: Probe) -> Probe:
    """``s`` after ``r``."""
    return Probe(lambda n: s(r(n)), name=f"{s.name}o{r.name}")


def subsequence(x: SequenceEvaluator, r) -> SequenceEvaluator:
    return SequenceEvaluator(lambda n: x(r(n)), name=f"{x.name}[{getattr(r, 'name', 'r')}]")


def inverse_floor(s: Probe, k: int) -> int:
    """Largest ``i`` with ``s(i) <= k`` (``-1`` if none); ``s`` strictly increasing."""
    if s(0) > k:
        return -1
    lo, hi = 0, 1
    while s(hi) <= k:
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if s(mid) <= k:
            lo = mid
        else:
            hi = mid
    return lo


__all__ = [
    "DEFAULT_CHECK_HORIZON", "DEFAULT_SEARCH_HORIZON", "SequenceEvaluator", "ModulusEvaluator",
    "Probe", "ModulusedReal", "RealSequenceGrid", "shift_modulus", "cauchy_from_convergence",
    "convergence_from_cauchy", "monotonize", "strict_monotonize", "sum_modulus",
    "bound_exponent", "scale_modulus", "close_transfer_modulus", "monotone_step_modulus",
    "modulus_from_limit", "strictify", "overtake", "synchronize", "probe_compose",
    "subsequence", "inverse_floor",
]
