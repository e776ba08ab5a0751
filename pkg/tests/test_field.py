import random

import pytest
from gmpy2 import mpq

from nearcomp.core import dyadic
from nearcomp.errors import SignUndecidable, ZeroWitnessNotFound
from nearcomp.field import (
    Polynomial,
    SignedInterval,
    creal_add,
    creal_inv,
    creal_mul,
    creal_neg,
    creal_sub,
    magnitude_exponent,
    poly_eval,
    refine_root,
    sign_of,
    sqrt_real,
)
from nearcomp.harness import check_real
from nearcomp.sequences import ModulusedReal

SQRT2 = sqrt_real(2)


def wobbly(q, seed):
    """A rational given by approximants that alternate around it within 2^-(n+1)."""
    rng = random.Random(seed)
    signs = [rng.choice([-1, 1]) for _ in range(1024)]
    return ModulusedReal.from_fast(lambda n: q + signs[n % 1024] * dyadic(n + 1),
                                   name=f"wobbly({q})")


def close_to(x: ModulusedReal, value, n: int) -> bool:
    """|x - value| <= 2^-n, certified by one refinement."""
    return abs(x.approx(n + 1) - value) + dyadic(n + 1) <= dyadic(n)


def test_sqrt_approximants():
    for n in range(60):
        a = SQRT2.approximant(n)
        assert a * a <= 2 < (a + dyadic(n + 1)) ** 2
    assert check_real(SQRT2) == []
    with pytest.raises(ValueError):
        sqrt_real(-1)


def test_neg():
    assert creal_neg(ModulusedReal.from_rational(0)).approx(10) == 0
    x = wobbly(mpq(2, 3), 1)
    nn = creal_neg(creal_neg(x))
    assert all(nn.approximant(i) == x.approximant(i) for i in range(50))
    s = creal_neg(SQRT2)
    assert abs(s.approx(20) + SQRT2.approx(20)) <= dyadic(19)


def test_add():
    x = wobbly(mpq(5, 7), 2)
    zero = ModulusedReal.from_rational(0)
    for n in range(40):
        assert close_to(creal_add(x, zero), mpq(5, 7), n)
    third = creal_add(mpq(1, 3), mpq(2, 3))
    assert all(close_to(third, 1, n) for n in range(65))
    cancel = creal_add(SQRT2, creal_neg(SQRT2))
    assert all(close_to(cancel, 0, n) for n in range(60))


def test_mul():
    x = wobbly(mpq(-9, 4), 3)
    one = ModulusedReal.from_rational(1)
    assert all(close_to(creal_mul(x, one), mpq(-9, 4), n) for n in range(40))
    assert close_to(creal_mul(mpq(1, 3), 3), 1, 64)
    assert close_to(creal_mul(SQRT2, SQRT2), 2, 40)


def test_mul_records_bound_exponent():
    x = creal_mul(ModulusedReal.from_rational(5), SQRT2)
    k = x.bound_exponent
    assert 2**k > 5 + 1 and 2**k > 2 ** 0.5 + 1
    assert k == magnitude_exponent(ModulusedReal.from_rational(5))


def test_inv():
    half = creal_inv(2)
    assert all(half.approx(n) == mpq(1, 2) for n in range(20))
    x = wobbly(mpq(7, 5), 4)
    back = creal_inv(creal_inv(x))
    assert all(close_to(back, mpq(7, 5), n) for n in range(40))
    with pytest.raises(ZeroWitnessNotFound):
        creal_inv(0, budget=64)


def test_inv_of_small_value():
    x = wobbly(mpq(-1, 1000), 5)
    r = creal_inv(x)
    assert all(close_to(r, -1000, n) for n in range(30))
    assert check_real(r, 96) == []


def test_poly_eval():
    p = Polynomial.from_rationals([-2, 0, 1])
    assert close_to(poly_eval(p, 1), -1, 50)
    c = Polynomial.from_rationals([mpq(3, 4)])
    assert poly_eval(c, SQRT2).approx(30) == mpq(3, 4)
    assert close_to(poly_eval(p, SQRT2), 0, 40)


def test_derivative():
    p = Polynomial.from_rationals([5, -2, 0, 1])  # x^3 - 2x + 5
    d = p.derivative()
    assert d.degree == 2
    assert [c.approx(10) for c in d.coefficients] == [-2, 0, 3]
    assert Polynomial.from_rationals([7]).derivative().coefficients[0].approx(0) == 0


def test_signed_interval_invariants():
    with pytest.raises(ValueError):
        SignedInterval(mpq(1), mpq(1), -1, 1)
    with pytest.raises(ValueError):
        SignedInterval(mpq(0), mpq(1), 1, 1)
    p = Polynomial.from_rationals([-2, 0, 1])
    with pytest.raises(ValueError):
        SignedInterval.for_polynomial(p, 2, 3)


def test_refine_root_sqrt2():
    p = Polynomial.from_rationals([-2, 0, 1])
    r = refine_root(p, SignedInterval.for_polynomial(p, 1, 2), 20)
    assert abs(r * r - 2) <= dyadic(17)


def test_refine_root_linear():
    p = Polynomial.from_rationals([mpq(-1, 2), 1])
    r = refine_root(p, SignedInterval.for_polynomial(p, 0, 1), 10)
    assert abs(r - mpq(1, 2)) <= dyadic(10)


def test_refine_root_trisection_fallback():
    # root exactly at the first midpoint: its sign is undecidable
    p = Polynomial.from_rationals([mpq(-1, 2), 1])
    trace = []
    r = refine_root(p, SignedInterval.for_polynomial(p, 0, 1), 12, budget=20, trace=trace)
    assert abs(r - mpq(1, 2)) <= dyadic(12)
    widths = [mpq(1)] + [hi - lo for lo, hi in trace]
    for before, after in zip(widths, widths[1:]):
        assert after <= before * mpq(2, 3)


def test_refine_root_residual_bound():
    # Lipschitz bound of x^3 - 2x - 5 on [2, 3] is 3*9 + 2 = 29 < 2^5
    p = Polynomial.from_rationals([-5, -2, 0, 1])
    for n in (10, 20, 30):
        r = refine_root(p, SignedInterval.for_polynomial(p, 2, 3), n)
        residual = r**3 - 2 * r - 5
        assert abs(residual) <= 32 * dyadic(n)


def test_refine_root_sign_undecidable():
    # the zero polynomial has no decidable sign at any trial point
    p = Polynomial.from_rationals([0, 0, 0, 0])
    with pytest.raises(SignUndecidable):
        refine_root(p, SignedInterval(mpq(0), mpq(1), -1, 1), 5, budget=8)


def test_sign_of():
    assert sign_of(SQRT2) == 1
    assert sign_of(creal_neg(SQRT2)) == -1
    assert sign_of(ModulusedReal.from_rational(0), budget=16) is None


def _random_real(rng):
    return wobbly(mpq(rng.randint(-1000, 1000), rng.randint(1, 300)), rng.randint(0, 10**6))


def test_field_laws():
    rng = random.Random(17)
    for _ in range(15):
        a, b, c = (_random_real(rng) for _ in range(3))
        assoc = creal_sub(creal_add(creal_add(a, b), c), creal_add(a, creal_add(b, c)))
        dist = creal_sub(creal_mul(a, creal_add(b, c)),
                         creal_add(creal_mul(a, b), creal_mul(a, c)))
        for n in (0, 10, 25, 40):
            assert close_to(assoc, 0, n)
            assert close_to(dist, 0, n)


def test_result_moduli_pass_invariant_check():
    rng = random.Random(23)
    a, b = _random_real(rng), _random_real(rng)
    for r in (creal_neg(a), creal_add(a, b), creal_mul(a, b), creal_inv(a),
              poly_eval(Polynomial.from_rationals([1, -3, 2]), SQRT2)):
        assert check_real(r, 128) == []
