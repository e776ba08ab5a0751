"""Compression of unbounded increasing sequences and the finite diagonal.

``compress(a, N, s)`` leaves ``a`` untouched up to the first probe point
where it reaches ``N`` and then squeezes it, block by block, so that in
block ``n`` every probed increment is at most ``2^-n`` while each block
still climbs by at least 1. The block starts form the modulus ``g``.

Inside a probe segment ``(s(i), s(i+1)]`` the recursion scales every step
of ``a`` by the same factor, so ``b_j = b_{s(i)} + (a_j - a_{s(i)}) * c_i``.
Only the per-segment data (level at ``s(i)`` and the probed step) is
stored; single values are recovered from it.
"""

from __future__ import annotations

import threading
from bisect import bisect_right
from dataclasses import dataclass, field

from gmpy2 import mpq

from .core import ONE, dyadic
from .errors import HorizonExceeded
from .sequences import (
    DEFAULT_SEARCH_HORIZON,
    ModulusEvaluator,
    Probe,
    SequenceEvaluator,
    inverse_floor,
)


class _Compressor:
    def __init__(self, a: SequenceEvaluator, N: int, s: Probe, horizon: int):
        self.a = a
        self.N = N
        self.s = s
        self.horizon = horizon
        self._lock = threading.RLock()
        k = 0
        while a(s(k)) < N:
            k += 1
            if k > horizon:
                raise HorizonExceeded("compress: first probe point above N", horizon)
        self.g = [k]
        self.g0 = k
        self.anchor = s(k)  # b_j = a_j for j <= anchor
        # per-segment data, list position i - g0
        self.base = [a(s(k))]  # b at s(i)
        self.steps: list[mpq] = []  # a[s(i+1)] - a[s(i)]

    def _extend_block(self):
        n = len(self.g) - 1
        cap = dyadic(n)
        i = self.g[n]
        # each probe point is visited once here, so skip the memo tables
        a, s, horizon = self.a.uncached, self.s.uncached, self.horizon
        base, steps = self.base, self.steps
        level = base[-1]
        target = level + 1
        prev = a(s(i))
        while level < target:
            i += 1
            if i > horizon:
                raise HorizonExceeded(f"compress: block {n} (input bounded?)", horizon)
            nxt = a(s(i))
            delta = nxt - prev
            steps.append(delta)
            # ties take the plain branch
            level = level + (delta if delta <= cap else cap)
            base.append(level)
            prev = nxt
        self.g.append(i)

    def modulus(self, n: int) -> int:
        if n >= len(self.g):
            with self._lock:
                while n >= len(self.g):
                    self._extend_block()
        return self.g[n]

    def _ensure_segment(self, i: int):
        if i - self.g0 >= len(self.steps):
            with self._lock:
                while i >= self.g[-1]:
                    self._extend_block()

    def at_probe(self, i: int) -> mpq:
        """``b_{s(i)}`` for ``i >= g(0)``."""
        self._ensure_segment(i)
        return self.base[i - self.g0]

    def value(self, j: int) -> mpq:
        if j <= self.anchor:
            return self.a(j)
        i = inverse_floor(self.s, j - 1)
        self._ensure_segment(i)
        pos = i - self.g0
        return self.base[pos] + (self.a(j) - self.a(self.s(i))) * self.factor(i)

    def factor(self, i: int) -> mpq:
        """Scale applied on the segment ``(s(i), s(i+1)]``; ``i`` must be computed."""
        cap = dyadic(bisect_right(self.g, i) - 1)
        delta = self.steps[i - self.g0]
        return ONE if delta <= cap else cap / delta


@dataclass
class CompressionResult:
    compressed: SequenceEvaluator
    modulus: ModulusEvaluator
    N: int
    probe: Probe
    _engine: _Compressor = field(repr=False)

    @property
    def params(self):
        return self.N, self.probe

    def blocks_computed(self) -> int:
        return len(self._engine.g) - 1


def compress(a: SequenceEvaluator, N: int, s: Probe,
             horizon: int = DEFAULT_SEARCH_HORIZON) -> CompressionResult:
    """Squeeze strictly increasing unbounded ``a`` above ``N`` along probe ``s``.

    Returns ``b`` and ``g`` where ``b`` agrees with ``a`` wherever
    ``a_k <= N``, never widens a gap of ``a``, stays strictly increasing and
    unbounded, and ``g`` is a modulus of ``b[s(k+1)] - b[s(k)] -> 0``.
    Evaluation is lazy; ``HorizonExceeded`` signals a block that does not
    close within ``horizon`` probe steps, which is what a bounded ``a`` does.
    """
    eng = _Compressor(a, N, s, horizon)
    b = SequenceEvaluator(eng.value, name=f"F({a.name},{N},{s.name})")
    g = ModulusEvaluator(eng.modulus, declared_monotone=True, name=f"G({a.name},{N},{s.name})")
    return CompressionResult(b, g, N, s, eng)


@dataclass
class Diagonal:
    """The finite-stage diagonal: ``stages[0]`` is ``n -> n``, ``stages[-1]`` is ``q``."""

    stages: list[SequenceEvaluator]
    results: list[CompressionResult]

    @property
    def q(self) -> SequenceEvaluator:
        return self.stages[-1]

    @property
    def moduli(self) -> list[ModulusEvaluator]:
        return [r.modulus for r in self.results]


def diagonal(probes: list[Probe], horizon: int = DEFAULT_SEARCH_HORIZON) -> Diagonal:
    stage = SequenceEvaluator(lambda n: n, name="a0")
    stages = [stage]
    results = []
    for i, probe in enumerate(probes):
        res = compress(stage, i + 1, probe, horizon)
        res.compressed.name = f"a{i + 1}"
        results.append(res)
        stage = res.compressed
        stages.append(stage)
    return Diagonal(stages, results)


def anti_cauchy(probes: list[Probe], horizon: int = DEFAULT_SEARCH_HORIZON
                ) -> tuple[SequenceEvaluator, list[ModulusEvaluator]]:
    """Strictly increasing unbounded ``q`` whose probed increments have moduli for every given probe."""
    d = diagonal(probes, horizon)
    return d.q, d.moduli
