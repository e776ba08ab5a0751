"""Recover a set from base-4 approximants, and locate a point from balls that avoid it."""

from gmpy2 import mpq

from nearcomp import (BallCode, ModulusEvaluator, SequenceEvaluator, decode_quaternary,
                      dyadic, format_rational, locate, quaternary_value)

A = {0, 3, 4, 9}
a = SequenceEvaluator(lambda k: quaternary_value(x for x in A if x <= k))
g = ModulusEvaluator.identity()
print("decoded bits 0..11:", [decode_quaternary(a, g, n) for n in range(12)])

y = mpq(5, 7)
z = SequenceEvaluator(lambda m: y + dyadic(m + 30))
gz = ModulusEvaluator(lambda n: max(0, n - 30), declared_monotone=True)
balls = [BallCode.from_parts(mpq(k, 1 << j), j + 1)
         for j in range(10) for k in range((1 << j) + 1)]
balls = [b for b in balls if not b.closed_contains(y)]
x = locate(z, gz, balls, 8)
print(f"located {format_rational(x)}, off by {float(abs(x - y)):.2e} from 5/7")
