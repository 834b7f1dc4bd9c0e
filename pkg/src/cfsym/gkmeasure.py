"""Exact Gauss-Kuzmin measure of digit strings and intervals.

The probability of a string is |log2(1 + (-1)^n / chi)| where chi is the
characteristic number (p+q)(q'+q) of its convergent matrix.  Probabilities
are kept as exact ratios inside a base-2 logarithm so that equality (the
heart of symmetry detection) is decidable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

import mpmath

from .core import Digits, as_digits, convergent_matrix
from .errors import DomainError

DEFAULT_PRECISION_BITS = 53


@dataclass(frozen=True)
class CharacteristicNumber:
    """(p+q)(q'+q) of a string's convergent matrix, plus the length parity.

    Together with the parity it determines the Gauss-Kuzmin probability
    exactly; it is invariant under string reversal.
    """

    value: int
    parity: int  # length mod 2

    @property
    def odd_length(self) -> bool:
        return self.parity == 1


def chi(a: Digits) -> CharacteristicNumber:
    """Characteristic number of a digit string."""
    a = as_digits(a)
    c = convergent_matrix(a)
    return CharacteristicNumber((c.p + c.q) * (c.q_prev + c.q), len(a) % 2)


@total_ordering
@dataclass(frozen=True)
class LogRatio:
    """An exact probability log2(num/den) with num >= den >= 1 coprime.

    Probabilities of nonempty strings always have num > den; num == den
    (measure zero) only arises for degenerate intervals.  Addition
    multiplies the ratios, so sums of measures stay exact.
    """

    num: int
    den: int

    def __post_init__(self):
        if self.den < 1 or self.num < self.den:
            raise DomainError(f"log ratio must be >= 1, got {self.num}/{self.den}")
        if math.gcd(self.num, self.den) != 1:
            raise DomainError(f"log ratio must be reduced, got {self.num}/{self.den}")

    @classmethod
    def from_ratio(cls, ratio: Fraction) -> "LogRatio":
        ratio = Fraction(ratio)
        return cls(ratio.numerator, ratio.denominator)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __add__(self, other: "LogRatio") -> "LogRatio":
        if not isinstance(other, LogRatio):
            return NotImplemented
        return LogRatio.from_ratio(self.ratio * other.ratio)

    def __lt__(self, other: "LogRatio") -> bool:
        if not isinstance(other, LogRatio):
            return NotImplemented
        return self.ratio < other.ratio

    def log2(self, precision_bits: int = DEFAULT_PRECISION_BITS) -> mpmath.mpf:
        """Correctly rounded log2(num/den) at the requested precision."""
        return _round_log2(self.num, self.den, precision_bits)

    def __float__(self) -> float:
        return float(self.log2(53))

    def __str__(self) -> str:
        return f"log2({self.num}/{self.den})"


def _round_log2(num: int, den: int, bits: int) -> mpmath.mpf:
    """Ziv-style rounding: raise the working precision until the rounded
    value is stable at the target."""
    if bits < 1:
        raise DomainError(f"precision_bits must be >= 1, got {bits}")
    if num == den:
        return mpmath.mpf(0)
    guard = 16
    rounded = None
    while guard <= 4096:
        with mpmath.workprec(bits + guard):
            raw = (mpmath.log(num) - mpmath.log(den)) / mpmath.ln2
        with mpmath.workprec(bits + 2 * guard):
            raw2 = (mpmath.log(num) - mpmath.log(den)) / mpmath.ln2
        with mpmath.workprec(bits):
            rounded, rounded2 = +raw, +raw2
        if rounded == rounded2:
            return rounded
        guard *= 2
    return rounded


def pgk_exact(a: Digits) -> LogRatio:
    """Exact Gauss-Kuzmin probability of a string.

    Even length: log2((chi+1)/chi).  Odd length: log2(chi/(chi-1)).
    """
    c = chi(a)
    if c.odd_length:
        return LogRatio.from_ratio(Fraction(c.value, c.value - 1))
    return LogRatio.from_ratio(Fraction(c.value + 1, c.value))


def pgk_float(a: Digits, precision_bits: int = DEFAULT_PRECISION_BITS):
    """Gauss-Kuzmin probability as a correctly rounded float.

    Returns a Python float for precision_bits <= 53, an mpmath.mpf above.
    """
    value = pgk_exact(a).log2(precision_bits)
    return float(value) if precision_bits <= 53 else value


def gk_measure_of_interval(lo, hi) -> LogRatio:
    """Exact Gauss-Kuzmin measure log2((1+hi)/(1+lo)) of [lo, hi] in [0,1]."""
    lo, hi = Fraction(lo), Fraction(hi)
    if not (0 <= lo <= hi <= 1):
        raise DomainError(f"need 0 <= lo <= hi <= 1, got lo={lo}, hi={hi}")
    return LogRatio.from_ratio((1 + hi) / (1 + lo))


def measure_equal(a: Digits, b: Digits) -> bool:
    """Whether two strings have exactly the same Gauss-Kuzmin probability."""
    return pgk_exact(a) == pgk_exact(b)
