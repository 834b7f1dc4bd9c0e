"""Permutation symmetries of digit strings.

A string has a nontrivial symmetry when some permutation other than the
identity and the reversal has the same Gauss-Kuzmin probability.  For
permutations of a fixed string the lengths (hence parities) agree, so
equal probability is exactly equal characteristic number.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterator, Optional

from .core import Digits, DigitString, as_digits
from .errors import DomainError, SizeError
from .gkmeasure import chi, measure_equal

# n! permutations per call is the cost; 10! ~ 3.6M is the default ceiling.
DEFAULT_PERMUTATION_BOUND = 10


def distinct_permutations(items) -> Iterator[tuple]:
    """All distinct permutations of a multiset, in lexicographic order."""
    seq = sorted(items)
    n = len(seq)
    yield tuple(seq)
    while True:
        # next-permutation: rightmost ascent, swap with rightmost larger, reverse tail
        i = n - 2
        while i >= 0 and seq[i] >= seq[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while seq[j] <= seq[i]:
            j -= 1
        seq[i], seq[j] = seq[j], seq[i]
        seq[i + 1:] = reversed(seq[i + 1:])
        yield tuple(seq)


def _check_bound(n: int, bound: Optional[int]) -> int:
    bound = DEFAULT_PERMUTATION_BOUND if bound is None else bound
    if n > bound:
        raise SizeError(
            f"length {n} exceeds permutation bound {bound}; raise the bound explicitly"
        )
    return bound


def nontrivial_symmetries(a: Digits, bound: Optional[int] = None) -> list[DigitString]:
    """Permutations of a, other than a and reverse(a), with equal probability.

    Multiset permutations are deduplicated before testing; the result is in
    lexicographic order.
    """
    a = as_digits(a)
    _check_bound(len(a), bound)
    rev = a.reverse
    partners = []
    for perm in distinct_permutations(a):
        if perm == tuple(a) or perm == tuple(rev):
            continue
        if measure_equal(perm, a):
            partners.append(DigitString(perm))
    return partners


@dataclass(frozen=True)
class SymmetryReport:
    """Full symmetry classification of one string."""

    subject: DigitString
    nontrivial_partners: tuple[DigitString, ...]
    nu: Optional[int]  # distinct probabilities over all orderings; None if digits repeat
    half_factorial_bound: int
    is_exceptional: bool


def symmetry_report(a: Digits, bound: Optional[int] = None) -> SymmetryReport:
    a = as_digits(a)
    partners = nontrivial_symmetries(a, bound)
    distinct = len(set(a)) == len(a)
    return SymmetryReport(
        subject=a,
        nontrivial_partners=tuple(partners),
        nu=nu(a, bound) if distinct else None,
        half_factorial_bound=factorial(len(a)) // 2,
        is_exceptional=bool(partners),
    )


def nu(digit_set, bound: Optional[int] = None) -> int:
    """Number of distinct Gauss-Kuzmin probabilities over all orderings
    of a set of distinct digits.

    Depends only on the set; reversal pairs share a value, so the count is
    taken over one representative per reversal class.
    """
    digits = sorted(int(d) for d in digit_set)
    n = len(digits)
    if n < 2:
        raise DomainError("nu requires at least 2 digits")
    if len(set(digits)) != n:
        raise DomainError(f"nu requires pairwise distinct digits, got {digits}")
    if any(d < 1 for d in digits):
        raise DomainError(f"digits must be positive, got {digits}")
    _check_bound(n, bound)
    values = set()
    for perm in distinct_permutations(digits):
        if perm[0] < perm[-1]:
            values.add(chi(perm).value)
    return len(values)


def is_exceptional_set(digit_set, bound: Optional[int] = None) -> bool:
    """True when some ordering of the set has a nontrivial symmetry
    (equivalently nu < n!/2)."""
    digits = sorted(int(d) for d in digit_set)
    return nu(digits, bound) < factorial(len(digits)) // 2


def epsilon_defect(digit_set, bound: Optional[int] = None) -> Fraction:
    """Defect 1 - nu/(n!/2), an exact rational in [0, 1)."""
    digits = sorted(int(d) for d in digit_set)
    half = factorial(len(digits)) // 2
    return 1 - Fraction(nu(digits, bound), half)


def scan_length3(max_digit: int = 40) -> int:
    """Exhaustively scan all length-3 strings with digits <= max_digit and
    return how many have a nontrivial symmetry (expected: 0).

    Uses raw characteristic numbers; equal length means equal parity, so
    chi equality is exactly probability equality.
    """
    if max_digit < 1:
        raise DomainError("max_digit must be >= 1")

    def chi3(a, b, c):
        # (p+q)(q'+q) for C(a,b,c) = (b, bc+1; ab+1, abc+a+c)
        q = a * b * c + a + c
        return (b * c + 1 + q) * (a * b + 1 + q)

    exceptional = 0
    for a in range(1, max_digit + 1):
        for b in range(1, max_digit + 1):
            for c in range(1, max_digit + 1):
                subject = (a, b, c)
                target = chi3(a, b, c)
                for perm in distinct_permutations(subject):
                    if perm == subject or perm == (c, b, a):
                        continue
                    if chi3(*perm) == target:
                        exceptional += 1
                        break
    return exceptional
