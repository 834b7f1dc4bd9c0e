"""Tests for the exact Gauss-Kuzmin measure machinery.

Oracle: chi via a literal matrix product, probabilities via the exact
interval integral log2((1+hi)/(1+lo)) computed with Fractions.
"""

import math
import random
from fractions import Fraction
from itertools import product

import mpmath
import pytest

from cfsym import (
    LogRatio,
    chi,
    evaluate,
    fundamental_interval,
    gk_measure_of_interval,
    measure_equal,
    pgk_exact,
    pgk_float,
)
from cfsym.errors import DomainError


def matmul(a, b):
    return (
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    )


def chi_oracle(digits):
    m = (1, 0, 0, 1)
    for d in digits:
        m = matmul(m, (0, 1, 1, d))
    p_prev, p, q_prev, q = m
    return (p + q) * (q_prev + q)


def random_string(rng, max_len=10, max_digit=10 ** 6):
    return tuple(rng.randint(1, max_digit) for _ in range(rng.randint(1, max_len)))


# ---------------------------------------------------------------------------
# characteristic numbers

def test_chi_single_digit():
    for a in range(1, 30):
        c = chi((a,))
        assert c.value == (a + 1) ** 2
        assert c.parity == 1 and c.odd_length


def test_chi_table1_values():
    assert chi((3, 1, 4)).value == 552
    assert chi((4, 1, 3)).value == 552
    assert chi((1, 3, 4)).value == 630
    assert chi((1, 4, 3)).value == 609


def test_chi_matches_oracle():
    rng = random.Random(201)
    for _ in range(500):
        a = random_string(rng)
        assert chi(a).value == chi_oracle(a)


def test_chi_reversal_invariance():
    rng = random.Random(202)
    for _ in range(500):
        a = random_string(rng)
        assert chi(a).value == chi(a[::-1]).value
        assert measure_equal(a, a[::-1])


def test_chi_minimum():
    assert chi((1,)).value == 4
    rng = random.Random(203)
    for _ in range(200):
        assert chi(random_string(rng)).value >= 4


# ---------------------------------------------------------------------------
# LogRatio

def test_logratio_validation():
    with pytest.raises(DomainError):
        LogRatio(3, 4)  # below 1
    with pytest.raises(DomainError):
        LogRatio(4, 2)  # not reduced
    with pytest.raises(DomainError):
        LogRatio(1, 0)
    assert LogRatio(1, 1).ratio == 1


def test_logratio_addition_multiplies_ratios():
    a = LogRatio(4, 3)
    b = LogRatio(9, 8)
    assert (a + b).ratio == Fraction(4, 3) * Fraction(9, 8)


def test_logratio_ordering():
    assert LogRatio(9, 8) < LogRatio(4, 3)
    assert LogRatio(552, 551) < LogRatio(9, 8)
    assert max(LogRatio(4, 3), LogRatio(2, 1)) == LogRatio(2, 1)


def test_logratio_float_roundtrip():
    assert float(LogRatio(2, 1)) == 1.0
    assert float(LogRatio(1, 1)) == 0.0
    assert abs(float(LogRatio(4, 3)) - math.log2(4 / 3)) < 1e-15


# ---------------------------------------------------------------------------
# exact probabilities

def test_pgk_exact_examples():
    assert pgk_exact((1,)) == LogRatio(4, 3)
    assert pgk_exact((2,)) == LogRatio(9, 8)
    assert pgk_exact((3, 1, 4)) == LogRatio(552, 551)


def test_pgk_exact_even_length():
    # (1,1): chi = 9, even length -> log2(10/9)
    assert chi((1, 1)).value == 9
    assert pgk_exact((1, 1)) == LogRatio(10, 9)


def test_pgk_float_values():
    assert abs(pgk_float((1,)) - 0.415037) < 5e-7
    assert abs(pgk_float((2,)) - 0.169925) < 5e-7
    assert abs(pgk_float((3, 1, 4)) - 0.0026159) < 5e-8


def test_pgk_float_high_precision():
    value = pgk_float((3, 1, 4), precision_bits=200)
    with mpmath.workprec(260):
        reference = mpmath.log(mpmath.mpf(552) / 551) / mpmath.log(2)
        assert abs(value - reference) < mpmath.mpf(2) ** -195


def test_pgk_float_single_digit_closed_form():
    # matches log2(1 + 1/(a(a+2))) for the single-digit distribution
    for a in range(1, 50):
        assert abs(pgk_float((a,)) - math.log2(1 + 1 / (a * (a + 2)))) < 1e-14


# ---------------------------------------------------------------------------
# interval measure

def test_interval_measure_whole_space():
    assert gk_measure_of_interval(0, 1) == LogRatio(2, 1)
    assert float(gk_measure_of_interval(0, 1)) == 1.0


def test_interval_measure_examples():
    assert gk_measure_of_interval(Fraction(1, 2), 1) == pgk_exact((1,))
    assert gk_measure_of_interval(Fraction(6, 23), Fraction(5, 19)) == pgk_exact((3, 1, 4))


def test_interval_measure_degenerate():
    assert gk_measure_of_interval(Fraction(1, 3), Fraction(1, 3)) == LogRatio(1, 1)


def test_interval_measure_rejects_bad_endpoints():
    with pytest.raises(DomainError):
        gk_measure_of_interval(Fraction(-1, 2), Fraction(1, 2))
    with pytest.raises(DomainError):
        gk_measure_of_interval(Fraction(1, 2), Fraction(3, 2))
    with pytest.raises(DomainError):
        gk_measure_of_interval(Fraction(2, 3), Fraction(1, 3))


def test_integral_consistency_exhaustive():
    """pgk_exact equals the exact interval integral for every string with
    digits <= 20 and length <= 4."""
    for n in (1, 2, 3, 4):
        for digs in product(range(1, 21), repeat=n):
            iv = fundamental_interval(digs)
            assert pgk_exact(digs) == gk_measure_of_interval(iv.lo, iv.hi)


def test_integral_consistency_randomized():
    rng = random.Random(204)
    for _ in range(2000):
        a = random_string(rng, max_len=9, max_digit=10 ** 4)
        iv = fundamental_interval(a)
        assert pgk_exact(a) == gk_measure_of_interval(iv.lo, iv.hi)


# ---------------------------------------------------------------------------
# structure of the measure

def test_normalization_small():
    """Telescoping identity: sum of P((a)) for a <= A is log2(2(A+1)/(A+2))."""
    total = LogRatio(1, 1)
    for a in range(1, 301):
        total = total + pgk_exact((a,))
        assert total.ratio == Fraction(2 * (a + 1), a + 2)


def test_child_additivity():
    rng = random.Random(205)
    for _ in range(25):
        a = random_string(rng, max_len=5, max_digit=30)
        T = rng.randint(1, 100)
        total = LogRatio(1, 1)
        for t in range(1, T + 1):
            total = total + pgk_exact(a + (t,))
        tail_endpoint = fundamental_interval(a + (T,)).excluded
        value = evaluate(a)
        tail = gk_measure_of_interval(min(value, tail_endpoint), max(value, tail_endpoint))
        assert total + tail == pgk_exact(a)


def test_monotonicity_within_parity():
    rng = random.Random(206)
    strings = [random_string(rng, max_len=6, max_digit=40) for _ in range(300)]
    for a in strings:
        for b in strings:
            if len(a) % 2 == len(b) % 2 and chi(a).value > chi(b).value:
                assert pgk_exact(a) < pgk_exact(b)
                break


def test_measure_equal_examples():
    assert measure_equal((3, 1, 4), (4, 1, 3))
    assert not measure_equal((3, 1, 4), (3, 4, 1))
    assert measure_equal((2, 1, 1, 3), (2, 3, 1, 1))
    assert chi((2, 1, 1, 3)).value == 575 == chi((2, 3, 1, 1)).value


def test_measure_equal_cross_parity_is_exact():
    # different parities compare through the exact ratios, not through chi
    assert not measure_equal((1,), (1, 1))  # 4/3 vs 10/9
    assert pgk_exact((1,)).ratio != pgk_exact((1, 1)).ratio
