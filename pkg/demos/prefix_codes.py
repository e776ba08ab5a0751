"""Online prefix-free codes from requested lengths and from weights."""

from gmpy2 import mpq

from nearcomp import KraftOverflow, SequenceEvaluator, kc_assign, lengths_from_weights

print("lengths 3 1 4 2 4 ->", list(kc_assign([3, 1, 4, 2, 4])))
try:
    for w in kc_assign([1, 2, 2, 3]):
        print("  assigned", w)
except KraftOverflow as exc:
    print("  overflow:", exc)

b = SequenceEvaluator(lambda n: mpq(6, 10 * (n + 1) * (n + 2)), name="weights")
f = lengths_from_weights(b)
print("lengths for b_n = 0.6/((n+1)(n+2)):", f.table(10))
print("codes:", list(kc_assign(f(n) for n in range(10))))
