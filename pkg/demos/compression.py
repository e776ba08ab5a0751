"""Squeeze a_n = n above N = 1 so the doubled-index increments get a modulus."""

from gmpy2 import mpq

from nearcomp import Probe, SequenceEvaluator, check_modulus, compress, format_rational

a = SequenceEvaluator(lambda n: mpq(n), name="n")
probe = Probe(lambda n: 2 * n, name="double")
res = compress(a, 1, probe)

print("first values:", " ".join(format_rational(v) for v in res.compressed.take(12)))
print("modulus g(0..6):", [res.modulus(n) for n in range(7)])
for n in range(7):
    j = probe(res.modulus(n))
    print(f"  level at s(g({n})) = {format_rational(res.compressed(j))}")
print("violations on window 64:", check_modulus(res.compressed, probe, res.modulus, 64))
