"""Constructive families of strings with provable structure.

Stable strings (p = 2q'), their s-stable generalization (p = (s^2+s)q'),
the a+ construction that turns a stable string into one with a nontrivial
symmetry, and the concluding four-digit family that lies outside those
constructions.  Constructed pairs are verified at build time, so any
misreading of the sketch-level inductive rules fails loudly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .core import Digits, DigitString, as_digits, convergent_matrix
from .errors import DomainError
from .gkmeasure import chi

FamilyKind = Literal["stable", "s_stable", "a_plus", "concluding"]


def is_stable(a: Digits) -> bool:
    """True when the convergent matrix satisfies p = 2*q_prev."""
    c = convergent_matrix(a)
    return c.p == 2 * c.q_prev


def is_s_stable(a: Digits, s: int) -> bool:
    """True when the convergent matrix satisfies p = (s^2+s)*q_prev.

    s = 1 coincides with is_stable.
    """
    if s < 1:
        raise DomainError(f"s must be >= 1, got {s}")
    c = convergent_matrix(a)
    return c.p == (s * s + s) * c.q_prev


@dataclass(frozen=True)
class FamilySpec:
    """Description of one family member: kind, length, and parameters.

    stable/s_stable take floor(length/2) parameters; a_plus takes the
    parameters of the underlying stable string of length length-2;
    concluding takes a single parameter and has length 4.
    """

    kind: FamilyKind
    length: int
    params: tuple[int, ...]
    s: int = 1

    def __post_init__(self):
        if any(t < 1 for t in self.params):
            raise DomainError(f"family parameters must be >= 1, got {self.params}")
        if self.s < 1:
            raise DomainError(f"s must be >= 1, got {self.s}")
        if self.kind in ("stable", "s_stable"):
            expected = self.length // 2
            if self.length < 2 or len(self.params) != expected:
                raise DomainError(
                    f"{self.kind} family of length {self.length} takes "
                    f"{expected} parameters, got {len(self.params)}"
                )
        elif self.kind == "a_plus":
            expected = (self.length - 2) // 2
            if self.length < 4 or len(self.params) != expected:
                raise DomainError(
                    f"a_plus family of length {self.length} takes "
                    f"{expected} parameters, got {len(self.params)}"
                )
        elif self.kind == "concluding":
            if self.length != 4 or len(self.params) != 1:
                raise DomainError("concluding family has length 4 and one parameter")
        else:
            raise DomainError(f"unknown family kind {self.kind!r}")


def _grow(length: int, params: tuple[int, ...], s: int) -> DigitString:
    """Seed of length 2 or 3, then wrap (t, reverse(a), (s^2+s)t) per parameter."""
    k = s * s + s
    if length % 2 == 0:
        a: tuple[int, ...] = (params[0], k * params[0])
    else:
        a = (params[0], k - 1, k * params[0] + 1)
    for t in params[1:]:
        a = (t, *a[::-1], k * t)
    return DigitString(a)


def stable_family(spec: FamilySpec) -> DigitString:
    """Build a stable (or s-stable) string from its family parameters.

    The result is checked against the defining matrix condition and the
    construction fails loudly if it does not hold.
    """
    if spec.kind not in ("stable", "s_stable"):
        raise DomainError(f"stable_family does not build kind {spec.kind!r}")
    s = spec.s if spec.kind == "s_stable" else 1
    a = _grow(spec.length, spec.params, s)
    if not is_s_stable(a, s):
        raise DomainError(f"construction produced a non-{s}-stable string {a}")
    return a


def a_plus(a: Digits) -> tuple[DigitString, DigitString]:
    """From a stable string a, build (a+, sigma(a+)): prepend 2,1 and bump the
    last digit, versus reversing everything after the leading 2.

    The two strings always share a characteristic number and differ from
    each other and from each other's reversal, so a+ has a nontrivial
    symmetry; this is asserted at construction.
    """
    a = as_digits(a)
    if not is_stable(a):
        raise DomainError(f"a_plus requires a stable string, got {a}")
    plus = DigitString((2, 1) + a[:-1] + (a[-1] + 1,))
    sigma = DigitString((2, a[-1] + 1) + a[:-1][::-1] + (1,))
    _assert_nontrivial_pair(plus, sigma)
    return plus, sigma


def s_stable_a_plus_candidate(a: Digits, s: int) -> DigitString:
    """Candidate symmetry carrier built from an s-stable string for s >= 2:
    prepend the digits 2s, 2, s and raise the last digit by s.

    Unlike a_plus, no symmetry formula is assumed here; callers confirm the
    candidate through a permutation search (nontrivial_symmetries).  The
    digit inventory is 2, s, 2s plus the base digits, so for s > 2 and
    suitably spread parameters the candidate has pairwise distinct digits
    at odd lengths, which the plain stable construction cannot deliver.
    """
    a = as_digits(a)
    if s < 2:
        raise DomainError("candidates are for s >= 2; use a_plus for stable strings")
    if not is_s_stable(a, s):
        raise DomainError(f"requires an {s}-stable string, got {a}")
    return DigitString((2 * s, 2, s) + a[:-1] + (a[-1] + s,))


def concluding_family(t: int) -> tuple[DigitString, DigitString]:
    """The pair ((t+1,1,t+3,t+2), (t+2,1,t+1,t+3)), verified per instance."""
    if t < 1:
        raise DomainError(f"t must be >= 1, got {t}")
    a = DigitString((t + 1, 1, t + 3, t + 2))
    b = DigitString((t + 2, 1, t + 1, t + 3))
    _assert_nontrivial_pair(a, b)
    return a, b


def _assert_nontrivial_pair(a: DigitString, b: DigitString) -> None:
    if sorted(a) != sorted(b):
        raise DomainError(f"{b} is not a permutation of {a}")
    if b == a or b == a.reverse:
        raise DomainError(f"{b} is a trivial permutation of {a}")
    if chi(a).value != chi(b).value:
        raise DomainError(f"characteristic numbers differ: {a} vs {b}")
