"""Instance builders and independent oracles shared by the test modules."""

from __future__ import annotations

import random

from gmpy2 import mpq

from nearcomp.core import BallCode, dyadic
from nearcomp.extraction import quaternary_value
from nearcomp.sequences import ModulusEvaluator, SequenceEvaluator


def random_increasing(rng: random.Random, name: str = "rand") -> SequenceEvaluator:
    """Closed-form strictly increasing unbounded rationals, cheap at any index.

    ``a_j = (c0 + c1*j + c2*(j mod p) + c3*(j div q) + c4*j^2) / D`` with
    integer coefficients and ``c1 > c2*(p-1)``, so the sawtooth never makes
    a step non-positive. Only one fraction is built per index, which keeps
    probes like ``n^2`` (indices near 10^9) cheap.
    """
    p, q = rng.randint(2, 5), rng.randint(2, 7)
    c2 = rng.randint(0, 6)
    c1 = c2 * (p - 1) + rng.randint(1, 20)
    c0 = rng.randint(-40, 40)
    c3 = rng.randint(0, 30)
    c4 = rng.choice([0, 0, 1])
    D = rng.randint(1, 60)

    def a(j):
        return mpq(c0 + c1 * j + c2 * (j % p) + c3 * (j // q) + c4 * j * j, D)

    return SequenceEvaluator(a, name=name)


def compress_oracle(a, N, s, blocks):
    """Straight-line index-by-index evaluation of the compression recursion.

    Returns ``(g, b)`` with ``g[0..blocks]`` and ``b`` a dict over
    ``0..s(g[blocks])``.
    """
    k = 0
    while a(s(k)) < N:
        k += 1
    g = [k]
    b = {j: a(j) for j in range(s(k) + 1)}
    for n in range(blocks):
        cap = dyadic(n)
        i = g[n]
        climbed = mpq(0)
        while climbed < 1:
            d = a(s(i + 1)) - a(s(i))
            for j in range(s(i) + 1, s(i + 1) + 1):
                step = a(j) - a(j - 1)
                b[j] = b[j - 1] + (step if d <= cap else step * cap / d)
            climbed += min(cap, d)
            i += 1
        g.append(i)
    return g, b


def truncation_instance(A) -> SequenceEvaluator:
    """``a_k = 4^-(A intersected with 0..k)``."""
    A = sorted(set(A))
    return SequenceEvaluator(lambda k: quaternary_value(x for x in A if x <= k), name=f"4^-{A}")


def planted_locator(y, K: int = 40, stages: int = 10):
    """Sequence, modulus and ball list for a planted limit ``y``.

    ``z_m = y + 2^-(m+1+K)`` has increments ``2^-(m+2+K)``, so
    ``max(0, n-K-1)`` is a modulus of them. Balls are dyadic centers
    ``k/2^j`` in ``[0, 1]`` with radius ``2^-(j+1)``, stage by stage,
    dropping any whose closure holds ``y``.
    """
    y = mpq(y)
    z = SequenceEvaluator(lambda m: y + dyadic(m + 1 + K), name="planted")
    g = ModulusEvaluator(lambda n: max(0, n - K - 1), declared_monotone=True, name="planted-g")
    balls = []
    for j in range(stages + 1):
        for k in range((1 << j) + 1):
            b = BallCode.from_parts(mpq(k, 1 << j), j + 1)
            if not b.closed_contains(y):
                balls.append(b)
    return z, g, balls


def planted_value(rng: random.Random) -> mpq:
    """A point in [1/16, 15/16] off every dyadic grid of small denominator."""
    return mpq(rng.randint(64, 960), 1024) + mpq(1, 3 << 30)
