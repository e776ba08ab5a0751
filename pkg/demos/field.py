"""Exact real arithmetic on moduli-carrying reals, and a certified square root of 2."""

from nearcomp import (Polynomial, SignedInterval, creal_add, creal_inv, creal_mul,
                      format_rational, refine_root, sqrt_real)

s2, s3 = sqrt_real(2), sqrt_real(3)
x = creal_mul(creal_add(s2, s3), creal_inv(s2))
print("(sqrt2 + sqrt3) / sqrt2 to 2^-30:", float(x.approx(30)), format_rational(x.approx(30)))

p = Polynomial.from_rationals([-2, 0, 1])
trace = []
r = refine_root(p, SignedInterval.for_polynomial(p, 1, 2), 30, trace=trace)
print(f"root of x^2 - 2 in [1, 2]: {float(r):.12f} after {len(trace)} narrowing steps")
