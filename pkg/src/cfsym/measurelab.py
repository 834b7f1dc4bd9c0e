"""Numerical measure experiments.

A small lab around densities on [0,1]: adaptive-Simpson measures of
fundamental intervals, the perturbed density that matches Gauss-Kuzmin on
every interval of a fixed depth yet differs from it, the exact interval
ratios behind the characterization argument, and a seeded Monte Carlo
check of the limiting string frequencies.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .census import resolve_workers
from .core import (
    REAL_RESIDUAL_FLOOR,
    Digits,
    DigitString,
    FundamentalInterval,
    as_digits,
    convergent_matrix,
    evaluate,
    fundamental_interval,
)
from .errors import DomainError, QuadratureError
from .gkmeasure import gk_measure_of_interval, pgk_float

LN2 = math.log(2.0)

DEFAULT_TOL = 1e-10
MAX_DEPTH = 20  # at most 2**20 leaf subdivisions per integral

MONTECARLO_BLOCK = 8192
MONTECARLO_MAX_DIGITS = 20  # precision floor of double-precision digit extraction


def _f_gk(x: float) -> float:
    return 1.0 / (LN2 * (1.0 + x))


@dataclass(frozen=True)
class Density:
    """A probability density on [0,1], evaluable at any point.

    splits lists interior points where the integrand is only piecewise
    smooth; quadrature never straddles them.
    """

    kind: str
    fn: Callable[[float], float]
    splits: tuple[Fraction, ...] = ()

    def __call__(self, x: float) -> float:
        return self.fn(float(x))


GAUSS_KUZMIN = Density(kind="gauss_kuzmin", fn=_f_gk)


def epsilon_max(a0: Digits) -> float:
    """Largest allowed bump amplitude: half the minimum of the
    Gauss-Kuzmin density on I(a0)."""
    hi = fundamental_interval(a0).hi
    return 1.0 / (2.0 * LN2 * (1.0 + float(hi)))


def perturbed_density(a0: Digits, epsilon: float) -> Density:
    """Gauss-Kuzmin plus a sine bump supported on I(a0).

    The bump vanishes at the endpoints, integrates to zero, and keeps the
    density positive, so the result is a continuous probability density
    that agrees with Gauss-Kuzmin on every fundamental interval of depth
    up to len(a0) yet differs from it inside I(a0).
    """
    a0 = as_digits(a0)
    cap = epsilon_max(a0)
    if not 0.0 < float(epsilon) <= cap:
        raise DomainError(
            f"epsilon must be in (0, {cap:.6g}] for a0={a0}, got {epsilon}"
        )
    interval = fundamental_interval(a0)
    lo, hi = float(interval.lo), float(interval.hi)
    eps = float(epsilon)
    scale = 2.0 * math.pi / (hi - lo)

    def fn(x: float) -> float:
        if lo < x < hi:
            return _f_gk(x) + eps * math.sin(scale * (x - lo))
        return _f_gk(x)

    return Density(kind="perturbed", fn=fn, splits=(interval.lo, interval.hi))


def tabulated_density(xs: Sequence[float], ys: Sequence[float]) -> Density:
    """Piecewise-linear density through sample points on [0,1]."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
        raise DomainError("tabulated density needs matching 1-d grids of size >= 2")
    if np.any(np.diff(xs) <= 0):
        raise DomainError("tabulated density grid must be strictly increasing")
    if np.any(ys < 0):
        raise DomainError("tabulated density must be nonnegative")
    return Density(
        kind="tabulated",
        fn=lambda x: float(np.interp(x, xs, ys)),
        splits=tuple(Fraction(x).limit_denominator(10 ** 12) for x in xs[1:-1]),
    )


# ---------------------------------------------------------------------------
# quadrature

def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return h / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive(fn, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = fn(lm)
    frm = fn(rm)
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    if abs(left + right - whole) <= 15.0 * tol:
        return left + right + (left + right - whole) / 15.0
    if depth >= MAX_DEPTH:
        raise QuadratureError(
            f"adaptive Simpson did not converge on [{a}, {b}] within 2^{MAX_DEPTH} subdivisions"
        )
    half = 0.5 * tol
    return _adaptive(fn, a, m, fa, flm, fm, left, half, depth + 1) + _adaptive(
        fn, m, b, fm, frm, fb, right, half, depth + 1
    )


def _integrate_panel(fn, a: float, b: float, tol: float) -> float:
    if a == b:
        return 0.0
    fa, fm, fb = fn(a), fn(0.5 * (a + b)), fn(b)
    whole = _simpson(fa, fm, fb, b - a)
    return _adaptive(fn, a, b, fa, fm, fb, whole, tol, 0)


def _integrate(density: Density, lo: Fraction, hi: Fraction, rel_tol: float) -> float:
    if rel_tol <= 0:
        raise DomainError(f"tolerance must be positive, got {rel_tol}")
    cuts = [lo] + [s for s in density.splits if lo < s < hi] + [hi]
    cuts = sorted(set(cuts))
    rough = sum(
        abs(_simpson(density(a), density((a + b) / 2), density(b), float(b - a)))
        for a, b in zip(cuts, cuts[1:])
    )
    # absolute budget per panel that keeps the total relative error <= rel_tol
    budget = rel_tol * max(rough, 1e-300) / (len(cuts) - 1)
    return sum(
        _integrate_panel(density.fn, float(a), float(b), budget)
        for a, b in zip(cuts, cuts[1:])
    )


def measure_of(
    density: Density,
    interval: FundamentalInterval,
    tol: float = DEFAULT_TOL,
    method: str = "auto",
) -> float:
    """mu(interval) under the given density.

    The Gauss-Kuzmin density takes the exact logarithmic path unless
    method="quadrature" forces the numerical one.
    """
    if method not in ("auto", "quadrature"):
        raise DomainError(f"unknown method {method!r}")
    if method == "auto" and density.kind == "gauss_kuzmin":
        return float(gk_measure_of_interval(interval.lo, interval.hi))
    return _integrate(density, interval.lo, interval.hi, tol)


def total_mass(density: Density, tol: float = DEFAULT_TOL) -> float:
    """Integral of the density over [0,1]; ~1 for a probability density."""
    return _integrate(density, Fraction(0), Fraction(1), tol)


def symmetry_defect(density: Density, a: Digits, tol: float = DEFAULT_TOL) -> float:
    """mu(I(a)) - mu(I(reverse(a))) by quadrature."""
    a = as_digits(a)
    forward = fundamental_interval(a)
    backward = fundamental_interval(a.reverse)
    return _integrate(density, forward.lo, forward.hi, tol) - _integrate(
        density, backward.lo, backward.hi, tol
    )


# ---------------------------------------------------------------------------
# the exact interval ratios behind the characterization argument

@dataclass(frozen=True)
class RatioTrace:
    """Exact widths delta(t) of I((a,t)) and eps(t) of I((t,reverse(a))),
    with their ratio converging to 1/(1+r) where r is the value of a."""

    base: DigitString
    r: Fraction
    samples: tuple[tuple[int, Fraction, Fraction, Fraction], ...]
    limit: Fraction


def lemma5_trace(a: Digits, t_values: Sequence[int]) -> RatioTrace:
    a = as_digits(a)
    c = convergent_matrix(a)
    p_, q_ = c.p_prev, c.q_prev
    p, q = c.p, c.q
    samples = []
    for t in t_values:
        if t < 1:
            raise DomainError(f"t values must be >= 1, got {t}")
        delta = Fraction(1, (q_ + t * q) * (q_ + (t + 1) * q))
        eps = Fraction(1, (q_ + t * q) * (p_ + q_ + t * (p + q)))
        samples.append((t, delta, eps, eps / delta))
    return RatioTrace(
        base=a,
        r=evaluate(a),
        samples=tuple(samples),
        limit=Fraction(q, p + q),
    )


# ---------------------------------------------------------------------------
# Monte Carlo frequencies

@dataclass(frozen=True)
class MonteCarloResult:
    target: DigitString
    empirical: float
    expected: float
    occurrences: int
    windows: int
    samples: int
    digits_per_sample: int
    seed: int


def _digit_block(x: np.ndarray, max_digits: int) -> np.ndarray:
    """Vectorized Gauss map: digit streams for a block of samples.

    Matches digits_of_real on every sample, including its residual floor;
    exhausted positions hold the sentinel 0.
    """
    m = x.shape[0]
    digits = np.zeros((m, max_digits), dtype=np.int64)
    r = x.astype(float).copy()
    alive = (r > 0.0) & (r < 1.0)
    for j in range(max_digits):
        inv = np.zeros_like(r)
        np.divide(1.0, r, out=inv, where=alive)
        d = inv.astype(np.int64)  # truncation == floor for positive values
        digits[:, j] = np.where(alive, d, 0)
        r = np.where(alive, inv - d, 0.0)
        alive = alive & (r > REAL_RESIDUAL_FLOOR)
    return digits


def _count_occurrences(digits: np.ndarray, target: Sequence[int]) -> int:
    length = len(target)
    span = digits.shape[1] - length + 1
    acc = np.ones((digits.shape[0], span), dtype=bool)
    for j, d in enumerate(target):
        acc &= digits[:, j:j + span] == d
    return int(acc.sum())


def montecarlo_frequency(
    target: Digits,
    sample_count: int,
    digits_per_sample: int = MONTECARLO_MAX_DIGITS,
    seed: int = 0,
    workers: Optional[int] = None,
) -> MonteCarloResult:
    """Empirical sliding-window frequency of a digit string in the
    expansions of uniform random reals, next to its exact expectation.

    Sample blocks draw from streams spawned per block index, so results
    are identical for any worker count and reproducible for a seed.
    """
    target = as_digits(target)
    if sample_count < 1:
        raise DomainError(f"sample_count must be >= 1, got {sample_count}")
    if digits_per_sample < len(target):
        raise DomainError(
            f"digits_per_sample must be >= len(target)={len(target)}"
        )
    blocks = (sample_count + MONTECARLO_BLOCK - 1) // MONTECARLO_BLOCK
    streams = np.random.SeedSequence(seed).spawn(blocks)

    def run_block(index: int) -> int:
        size = min(MONTECARLO_BLOCK, sample_count - index * MONTECARLO_BLOCK)
        rng = np.random.default_rng(streams[index])
        x = rng.random(size)
        return _count_occurrences(_digit_block(x, digits_per_sample), target)

    n_workers = resolve_workers(workers)
    if n_workers > 1 and blocks > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            occurrences = sum(pool.map(run_block, range(blocks)))
    else:
        occurrences = sum(run_block(i) for i in range(blocks))
    windows = sample_count * (digits_per_sample - len(target) + 1)
    return MonteCarloResult(
        target=target,
        empirical=occurrences / windows,
        expected=pgk_float(target),
        occurrences=occurrences,
        windows=windows,
        samples=sample_count,
        digits_per_sample=digits_per_sample,
        seed=seed,
    )
