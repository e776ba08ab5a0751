"""Stack compressions for several probes; the result still grows without bound."""

from nearcomp import Probe, anti_cauchy, check_modulus, falsify_cauchy, format_rational

probes = [Probe.identity(), Probe(lambda n: 2 * n, name="double"),
          Probe(lambda n: n * (n + 1) // 2, name="triangular")]
q, moduli = anti_cauchy(probes)

print("q_0..q_9:", " ".join(format_rational(v) for v in q.take(10)))
for p, g in zip(probes, moduli):
    print(f"{p.name:>10}: g(0..5) = {[g(n) for n in range(6)]}, "
          f"violations = {len(check_modulus(q, p, g, 64))}")
print("a pair farther apart than 1 within 400 indices:", falsify_cauchy(q, 0, 400))
