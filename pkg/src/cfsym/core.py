"""Continued-fraction fundamentals.

Digit strings, convergent matrices, exact evaluation, fundamental
intervals, and digit extraction for rationals (Euclid) and reals
(iterated Gauss map).  All arithmetic is exact except for the float
input path of :func:`digits_of_real`.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import DomainError

# Below this residual the Gauss map on a double is noise; stop extracting.
REAL_RESIDUAL_FLOOR = 2.0 ** -45

# Default digit budget for double-precision input.
REAL_DEFAULT_MAX_DIGITS = 25


class DigitString(tuple):
    """Nonempty tuple of positive integers, e.g. the digits of [0;3,1,4].

    Immutable and hashable; safe to share across threads.
    """

    __slots__ = ()

    def __new__(cls, digits: Iterable[int]) -> "DigitString":
        if isinstance(digits, DigitString):
            return digits
        t = tuple.__new__(cls, tuple(int(d) for d in digits))
        if not t:
            raise DomainError("digit string must be nonempty")
        for d in t:
            if d < 1:
                raise DomainError(f"digits must be positive integers, got {d}")
        return t

    @classmethod
    def parse(cls, text: str) -> "DigitString":
        """Parse a comma-separated list like ``"3,1,4"``."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if not parts:
            raise DomainError(f"cannot parse digit string from {text!r}")
        try:
            return cls(int(p) for p in parts)
        except ValueError as exc:
            raise DomainError(f"cannot parse digit string from {text!r}") from exc

    @property
    def reverse(self) -> "DigitString":
        return DigitString(self[::-1])

    def __repr__(self) -> str:
        return f"DigitString({','.join(map(str, self))})"

    def __str__(self) -> str:
        return ",".join(map(str, self))


Digits = Union[DigitString, Iterable[int]]


def as_digits(a: Digits) -> DigitString:
    return a if isinstance(a, DigitString) else DigitString(a)


def canonicalize(a: Digits) -> DigitString:
    """Merge a trailing digit 1 into its predecessor: (...,k,1) -> (...,k+1).

    This is the canonical form with last digit > 1; the single string (1)
    is left unchanged.
    """
    a = as_digits(a)
    if len(a) >= 2 and a[-1] == 1:
        return DigitString(a[:-2] + (a[-2] + 1,))
    return a


@dataclass(frozen=True)
class ConvergentMatrix:
    """The 2x2 matrix (p_prev, p; q_prev, q) holding the last two convergents.

    For a string of length n, p_prev/q_prev is the (n-1)th convergent and
    p/q the nth, with the convention p0 = 0, q0 = 1.
    """

    p_prev: int
    p: int
    q_prev: int
    q: int

    def __post_init__(self):
        if self.determinant not in (1, -1):
            raise DomainError(f"invalid convergent matrix (det={self.determinant})")

    @property
    def determinant(self) -> int:
        """p*q_prev - q*p_prev; equals (-1)^(n-1) for a length-n string."""
        return self.p * self.q_prev - self.q * self.p_prev

    @property
    def value(self) -> Fraction:
        """The rational value p/q of the generating string."""
        return Fraction(self.p, self.q)

    @property
    def transposed(self) -> "ConvergentMatrix":
        """Matrix of the reversed string: p and q_prev swapped."""
        return ConvergentMatrix(self.p_prev, self.q_prev, self.p, self.q)

    def append(self, t: int) -> "ConvergentMatrix":
        """Matrix of (a, t) given the matrix of a."""
        return ConvergentMatrix(self.p, self.p_prev + t * self.p,
                                self.q, self.q_prev + t * self.q)

    def prepend(self, t: int) -> "ConvergentMatrix":
        """Matrix of (t, a) given the matrix of a."""
        return ConvergentMatrix(self.q_prev, self.q,
                                self.p_prev + t * self.q_prev, self.p + t * self.q)

    def prepend_to_reverse(self, t: int) -> "ConvergentMatrix":
        """Matrix of (t, reverse(a)) given the matrix of a."""
        return ConvergentMatrix(self.p, self.q,
                                self.p_prev + t * self.p, self.q_prev + t * self.q)


def convergent_matrix(a: Digits) -> ConvergentMatrix:
    """Product of the factors (0 1; 1 d) over the digits d of a."""
    a = as_digits(a)
    p_prev, p, q_prev, q = 1, 0, 0, 1
    for d in a:
        p_prev, p = p, d * p + p_prev
        q_prev, q = q, d * q + q_prev
    return ConvergentMatrix(p_prev, p, q_prev, q)


def evaluate(a: Digits) -> Fraction:
    """Exact value of the continued fraction [0; a1, ..., an] in (0, 1]."""
    return convergent_matrix(a).value


def extend_matrix(c: ConvergentMatrix, t: int, mode: str) -> ConvergentMatrix:
    """Extend a convergent matrix by one digit t without recomputing the product.

    mode is one of "append", "prepend", "prepend_to_reverse", matching the
    strings (a,t), (t,a) and (t,reverse(a)).
    """
    if t < 1:
        raise DomainError(f"extension digit must be >= 1, got {t}")
    if mode == "append":
        return c.append(t)
    if mode == "prepend":
        return c.prepend(t)
    if mode == "prepend_to_reverse":
        return c.prepend_to_reverse(t)
    raise DomainError(f"unknown extension mode {mode!r}")


@dataclass(frozen=True)
class FundamentalInterval:
    """Half-open interval of reals whose expansion starts with a given string.

    The included endpoint is the value p/q of the string; the excluded
    endpoint is (p_prev+p)/(q_prev+q).  orientation is +1 when the
    included endpoint is the left one (even length) and -1 otherwise.
    """

    included: Fraction
    excluded: Fraction
    orientation: int

    def __post_init__(self):
        expected = 1 if self.included < self.excluded else -1
        if self.orientation != expected:
            raise DomainError("interval orientation inconsistent with endpoints")

    @property
    def lo(self) -> Fraction:
        return min(self.included, self.excluded)

    @property
    def hi(self) -> Fraction:
        return max(self.included, self.excluded)

    @property
    def width(self) -> Fraction:
        return abs(self.excluded - self.included)

    def contains(self, x) -> bool:
        """Membership with the included endpoint in, the excluded one out."""
        if self.orientation > 0:
            return self.included <= x < self.excluded
        return self.excluded < x <= self.included


def fundamental_interval(a: Digits) -> FundamentalInterval:
    """Interval I(a) with endpoints p/q (included) and (p'+p)/(q'+q) (excluded)."""
    c = convergent_matrix(a)
    included = Fraction(c.p, c.q)
    excluded = Fraction(c.p_prev + c.p, c.q_prev + c.q)
    return FundamentalInterval(included, excluded,
                               1 if included < excluded else -1)


def digits_of_rational(x) -> DigitString:
    """Digits of a rational in (0,1), canonical form (last digit > 1).

    Runs the Euclidean algorithm on numerator and denominator; the
    canonical form falls out automatically because an exact final step
    always has quotient >= 2.
    """
    x = Fraction(x)
    if not 0 < x < 1:
        raise DomainError(f"digits_of_rational requires 0 < x < 1, got {x}")
    p, q = x.numerator, x.denominator
    out = []
    while p:
        d, r = divmod(q, p)
        out.append(d)
        p, q = r, p
    return DigitString(out)


def digits_of_real(x, max_digits: int = REAL_DEFAULT_MAX_DIGITS) -> DigitString:
    """Up to max_digits digits of a real in (0,1) via the Gauss map.

    Exact rationals (e.g. Fraction) take an exact path.  Floats iterate
    x -> 1/x - floor(1/x) and stop early once the residual falls below
    REAL_RESIDUAL_FLOOR, past which double precision carries no digit
    information.
    """
    if max_digits < 1:
        raise DomainError(f"max_digits must be >= 1, got {max_digits}")
    if isinstance(x, numbers.Rational) and not isinstance(x, float):
        full = digits_of_rational(x)
        return DigitString(full[:max_digits]) if len(full) > max_digits else full
    r = float(x)
    if not 0.0 < r < 1.0:
        raise DomainError(f"digits_of_real requires 0 < x < 1, got {x}")
    out = []
    while True:
        inv = 1.0 / r
        d = int(inv)
        out.append(d)
        r = inv - d
        if len(out) >= max_digits or r <= REAL_RESIDUAL_FLOOR:
            break
    return DigitString(out)
