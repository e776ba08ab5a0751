import random

from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from nearcomp.compression import compress
from nearcomp.core import dyadic
from nearcomp.harness import (
    brute_min_modulus,
    check_cauchy_modulus,
    check_modulus,
    check_real,
    falsify_cauchy,
    probe_suite,
)
from nearcomp.sequences import ModulusedReal, ModulusEvaluator, Probe, SequenceEvaluator

GEOM = SequenceEvaluator(lambda n: dyadic(n), name="2^-n")
LINEAR = SequenceEvaluator(lambda n: mpq(n), name="n")


def test_check_geometric_identity_modulus():
    assert check_modulus(GEOM, Probe.identity(), ModulusEvaluator.identity(), 64) == []


def test_check_unbounded_sequence_fails_every_positive_n():
    bad = check_modulus(LINEAR, None, ModulusEvaluator.constant(0), 20)
    assert {v.n for v in bad} == set(range(1, 21))
    for v in bad:
        assert v.observed > v.bound == dyadic(v.n)


def test_check_compression_output():
    res = compress(LINEAR, 0, Probe.identity())
    assert check_modulus(res.compressed, res.probe, res.modulus, 64) == []


def test_violation_format():
    v = check_modulus(LINEAR, None, ModulusEvaluator.constant(0), 1)[0]
    assert v.format() == "m=0 n=1 observed=1 bound=1/2"


def test_brute_min_geometric():
    table = brute_min_modulus(GEOM, None, 64)
    assert table[0] == 0
    assert all(table[n] == n - 1 for n in range(1, 64))


def test_brute_min_constant():
    table = brute_min_modulus(SequenceEvaluator.constant(mpq(5)), None, 30)
    assert table.entries == [0] * 31


def test_brute_min_table_format():
    table = brute_min_modulus(GEOM, None, 3)
    assert table.format() == "0 0\n1 0\n2 1\n3 2\n"


def _random_sequence(rng):
    vals = [mpq(rng.randint(-50, 50), rng.randint(1, 50)) * dyadic(i // 4) for i in range(40)]
    return SequenceEvaluator(lambda n: vals[n] if n < 40 else vals[-1])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.lists(st.integers(0, 30), min_size=31, max_size=31))
def test_check_empty_iff_dominates_oracle(seed, raw):
    x = _random_sequence(random.Random(seed))
    H = 30
    table = brute_min_modulus(x, None, H)
    g = ModulusEvaluator(lambda n: raw[n])
    dominated = all(g(n) >= table[n] for n in range(H + 1) if g(n) <= H)
    assert (check_modulus(x, None, g, H) == []) == dominated


def test_oracle_table_is_nondecreasing_and_minimal():
    x = _random_sequence(random.Random(7))
    H = 30
    table = brute_min_modulus(x, None, H)
    assert all(a <= b for a, b in zip(table.entries, table.entries[1:]))
    assert check_modulus(x, None, table.as_modulus(), H) == []
    for n in range(H + 1):
        if table[n] > 0:
            tighter = ModulusEvaluator(lambda k, n=n: table[k] - 1 if k == n else table[k])
            assert check_modulus(x, None, tighter, H) != []


def test_probe_suite_members():
    suite = probe_suite()
    names = [p.name for p in suite]
    assert "identity" in names and "triangular" in names
    tri = suite[names.index("triangular")]
    assert [tri(n) for n in range(5)] == [0, 1, 3, 6, 10]
    for p in suite:
        p.validate(1000)


def test_falsify_cauchy_examples():
    assert falsify_cauchy(LINEAR, 1, 10) == (0, 1)
    assert falsify_cauchy(GEOM, 0, 64) is None
    assert falsify_cauchy(GEOM, 3, 64) == (0, 1)
    shifted = SequenceEvaluator(lambda n: dyadic(n + 3))
    assert falsify_cauchy(shifted, 4, 64) == (0, 2)
    assert falsify_cauchy(shifted, 3, 64) is None


def test_check_cauchy_and_real():
    x = SequenceEvaluator(lambda m: (-1) ** m * dyadic(m))
    assert check_cauchy_modulus(x, ModulusEvaluator(lambda n: n + 1), 64) == []
    assert check_cauchy_modulus(x, ModulusEvaluator.identity(), 64) != []
    assert check_real(ModulusedReal.from_rational(mpq(1, 3))) == []
