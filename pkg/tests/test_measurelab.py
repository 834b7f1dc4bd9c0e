"""Tests for the measure lab: quadrature, the perturbed density, exact
interval ratios, and the Monte Carlo harness.

Oracles: the exact logarithmic measure for quadrature, an analytic sine
integral for the perturbation, closed-form interval widths for the ratio
trace, and the scalar digit extractor for the vectorized one.
"""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from cfsym import (
    GAUSS_KUZMIN,
    Density,
    convergent_matrix,
    digits_of_real,
    epsilon_max,
    fundamental_interval,
    gk_measure_of_interval,
    lemma5_trace,
    measure_of,
    montecarlo_frequency,
    perturbed_density,
    pgk_float,
    symmetry_defect,
    tabulated_density,
    total_mass,
)
from cfsym.errors import DomainError, QuadratureError
from cfsym.measurelab import _digit_block

LN2 = math.log(2.0)


def random_string(rng, max_len=6, max_digit=20):
    return tuple(rng.randint(1, max_digit) for _ in range(rng.randint(1, max_len)))


# ---------------------------------------------------------------------------
# measure_of

def test_gk_total_mass_is_one():
    assert abs(total_mass(GAUSS_KUZMIN, tol=1e-12) - 1.0) < 1e-11


def test_exact_path_whole_space():
    assert measure_of(GAUSS_KUZMIN, fundamental_interval((1,))) == float(
        gk_measure_of_interval(Fraction(1, 2), 1))


def test_exact_path_314():
    got = measure_of(GAUSS_KUZMIN, fundamental_interval((3, 1, 4)))
    assert got == float(gk_measure_of_interval(Fraction(6, 23), Fraction(5, 19)))


def test_quadrature_agrees_with_exact():
    rng = random.Random(501)
    for _ in range(100):
        a = random_string(rng)
        iv = fundamental_interval(a)
        exact = float(gk_measure_of_interval(iv.lo, iv.hi))
        quad = measure_of(GAUSS_KUZMIN, iv, tol=1e-10, method="quadrature")
        assert abs(quad - exact) <= 1e-10 * exact + 1e-15


def test_measure_of_validation():
    with pytest.raises(DomainError):
        measure_of(GAUSS_KUZMIN, fundamental_interval((2,)), tol=-1, method="quadrature")
    with pytest.raises(DomainError):
        measure_of(GAUSS_KUZMIN, fundamental_interval((2,)), method="montecarlo")


def test_quadrature_error_on_hidden_discontinuity():
    jump = Density(kind="tabulated", fn=lambda x: 1.0 if x < 0.7234 else 2.0)
    with pytest.raises(QuadratureError):
        measure_of(jump, fundamental_interval((1,)), tol=1e-13, method="quadrature")


# ---------------------------------------------------------------------------
# perturbed density

def test_epsilon_max_value():
    # I((1,1)) = [1/2, 2/3]: cap is 1/(2 ln2 (1+2/3))
    assert abs(epsilon_max((1, 1)) - 1.0 / (2 * LN2 * (5 / 3))) < 1e-15


def test_perturbed_rejects_bad_epsilon():
    cap = epsilon_max((1, 1))
    with pytest.raises(DomainError):
        perturbed_density((1, 1), 0.0)
    with pytest.raises(DomainError):
        perturbed_density((1, 1), cap * 1.01)
    assert perturbed_density((1, 1), cap) is not None


def test_perturbed_matches_gk_at_endpoints_and_outside():
    density = perturbed_density((1, 1), 0.05)
    iv = fundamental_interval((1, 1))
    lo, hi = float(iv.lo), float(iv.hi)
    for x in (lo, hi, 0.0, 0.1, float(iv.lo) - 1e-9, float(iv.hi) + 1e-9, 1.0):
        assert density(x) == GAUSS_KUZMIN(x)


def test_perturbed_differs_at_quarter_point():
    density = perturbed_density((1, 1), 0.05)
    iv = fundamental_interval((1, 1))
    quarter = float(iv.lo) + (float(iv.hi) - float(iv.lo)) / 4.0
    assert abs(density(quarter) - GAUSS_KUZMIN(quarter) - 0.05) < 1e-12


def test_perturbed_preserves_interval_mass():
    density = perturbed_density((1, 1), 0.05)
    iv = fundamental_interval((1, 1))
    bump = measure_of(density, iv, tol=1e-12)
    clean = measure_of(GAUSS_KUZMIN, iv, tol=1e-12, method="quadrature")
    assert abs(bump - clean) < 1e-12


def test_perturbed_total_mass_one():
    density = perturbed_density((1, 1), 0.05)
    assert abs(total_mass(density, tol=1e-11) - 1.0) < 1e-10


def test_perturbed_nonnegative():
    density = perturbed_density((1, 1), epsilon_max((1, 1)))
    for x in np.linspace(0.0, 1.0, 2001):
        assert density(float(x)) >= 0.0


# ---------------------------------------------------------------------------
# symmetry defect

def test_defect_zero_for_gk():
    rng = random.Random(502)
    for _ in range(20):
        a = random_string(rng, max_len=4, max_digit=9)
        assert abs(symmetry_defect(GAUSS_KUZMIN, a, tol=1e-10)) < 1e-9


def test_defect_zero_below_perturbation_depth():
    density = perturbed_density((1, 1), 0.05)
    for a in [(1,), (2,), (8,), (1, 1), (2, 1), (5, 8)]:
        assert abs(symmetry_defect(density, a, tol=1e-10)) < 1e-9


def test_defect_witness_matches_sine_integral():
    # I((1,1,2)) = (4/7, 3/5] sits inside the bump support [1/2, 2/3];
    # the defect is the analytic integral of the sine bump over it
    density = perturbed_density((1, 1), 0.05)
    got = symmetry_defect(density, (1, 1, 2), tol=1e-12)
    w = 12 * math.pi  # 2*pi / (2/3 - 1/2)
    oracle = (0.05 / w) * (math.cos(w * (4 / 7 - 0.5)) - math.cos(w * (3 / 5 - 0.5)))
    assert abs(got - oracle) < 1e-12
    assert abs(got) > 1e-6


def test_defect_antisymmetric():
    density = perturbed_density((1, 1), 0.05)
    assert abs(symmetry_defect(density, (1, 1, 2)) +
               symmetry_defect(density, (2, 1, 1))) < 1e-12


# ---------------------------------------------------------------------------
# tabulated density

def test_tabulated_density_tracks_gk():
    xs = np.linspace(0.0, 1.0, 4001)
    ys = [GAUSS_KUZMIN(float(x)) for x in xs]
    density = tabulated_density(xs, ys)
    iv = fundamental_interval((2,))
    exact = measure_of(GAUSS_KUZMIN, iv)
    assert abs(measure_of(density, iv, tol=1e-9) - exact) < 1e-6


def test_tabulated_density_validation():
    with pytest.raises(DomainError):
        tabulated_density([0.0], [1.0])
    with pytest.raises(DomainError):
        tabulated_density([0.0, 0.0, 1.0], [1.0, 1.0, 1.0])
    with pytest.raises(DomainError):
        tabulated_density([0.0, 1.0], [1.0, -1.0])


# ---------------------------------------------------------------------------
# exact interval ratios

def test_lemma5_first_example():
    trace = lemma5_trace((1,), [1])
    t, delta, eps, ratio = trace.samples[0]
    assert delta == Fraction(1, 6)
    assert delta == fundamental_interval((1, 1)).width


def test_lemma5_delta_eps_match_interval_widths():
    rng = random.Random(503)
    for _ in range(50):
        a = random_string(rng)
        trace = lemma5_trace(a, [1, 2, 7, 31])
        for t, delta, eps, ratio in trace.samples:
            assert delta == fundamental_interval(a + (t,)).width
            assert eps == fundamental_interval((t,) + a[::-1]).width
            assert ratio == eps / delta


def test_lemma5_ratio_closed_form():
    rng = random.Random(504)
    for _ in range(50):
        a = random_string(rng)
        c = convergent_matrix(a)
        trace = lemma5_trace(a, [1, 10, 100, 1000])
        for t, delta, eps, ratio in trace.samples:
            assert ratio == Fraction(c.q_prev + (t + 1) * c.q,
                                     c.p_prev + c.q_prev + t * (c.p + c.q))


def test_lemma5_limit_and_convergence():
    trace = lemma5_trace((3, 1, 4), [10, 1000])
    assert trace.r == Fraction(5, 19)
    assert trace.limit == Fraction(19, 24)  # q/(p+q) = 1/(1+r)
    r10, r1000 = trace.samples[0][3], trace.samples[1][3]
    assert abs(r1000 - trace.limit) < abs(r10 - trace.limit)


def test_lemma5_monotone_trend():
    rng = random.Random(505)
    for _ in range(20):
        a = random_string(rng)
        trace = lemma5_trace(a, [10, 100, 1000])
        errors = [abs(ratio - trace.limit) for _, _, _, ratio in trace.samples]
        assert errors[0] >= errors[1] >= errors[2]


def test_lemma5_rejects_bad_t():
    with pytest.raises(DomainError):
        lemma5_trace((3, 1, 4), [0])


# ---------------------------------------------------------------------------
# Monte Carlo

def test_digit_block_matches_scalar_extractor():
    rng = np.random.default_rng(506)
    x = rng.random(500)
    x = x[(x > 0) & (x < 1)]
    block = _digit_block(x, 20)
    for i, xi in enumerate(x):
        scalar = digits_of_real(float(xi), 20)
        vector = [d for d in block[i] if d != 0]
        assert tuple(vector) == tuple(scalar)


def test_montecarlo_deterministic():
    a = montecarlo_frequency((1,), 20_000, 20, seed=7)
    b = montecarlo_frequency((1,), 20_000, 20, seed=7)
    assert a == b


def test_montecarlo_worker_invariance():
    results = {montecarlo_frequency((2,), 30_000, 20, seed=3, workers=w).occurrences
               for w in (1, 2, 4, 8)}
    assert len(results) == 1


def test_montecarlo_seed_changes_stream():
    a = montecarlo_frequency((1,), 20_000, 20, seed=1)
    b = montecarlo_frequency((1,), 20_000, 20, seed=2)
    assert a.occurrences != b.occurrences


def test_montecarlo_frequencies_roughly_right():
    result = montecarlo_frequency((1,), 30_000, 20, seed=11)
    assert abs(result.empirical - result.expected) < 0.01
    assert result.expected == pgk_float((1,))
    assert result.windows == 30_000 * 20


def test_montecarlo_string_target_windows():
    result = montecarlo_frequency((3, 1, 4), 5_000, 20, seed=12)
    assert result.windows == 5_000 * 18
    assert 0 <= result.empirical < 0.05


def test_montecarlo_validation():
    with pytest.raises(DomainError):
        montecarlo_frequency((1, 2, 3), 100, digits_per_sample=2)
    with pytest.raises(DomainError):
        montecarlo_frequency((1,), 0)
