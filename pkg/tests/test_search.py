import math

import numpy as np
import pytest

from lacsum import (
    McConfig,
    SQRT_PI_OVER_2,
    StudyRow,
    anneal_sigma,
    canonicalize,
    convergence_study,
    exhaustive_sigma,
    fit_rate_constant,
    holder_lower_bound,
    lp_norm_quadrature,
    make_frequency_set,
)
from lacsum.errors import SearchSpaceTooLarge


def test_limit_constant():
    assert SQRT_PI_OVER_2 == math.sqrt(math.pi) / 2


def test_canonicalize_shift_and_gcd():
    assert canonicalize(make_frequency_set([10, 20])).freqs == (1, 2)
    assert canonicalize(make_frequency_set([3, 7, 11])).freqs == (1, 2, 3)
    assert canonicalize(make_frequency_set([5])).freqs == (1,)


def test_canonicalize_preserves_l1():
    fs = make_frequency_set([6, 21, 36, 51])
    canon = canonicalize(fs)
    a = lp_norm_quadrature(fs, p=1).value
    b = lp_norm_quadrature(canon, p=1).value
    assert abs(a - b) < 1e-8


def test_canonicalize_idempotent():
    fs = make_frequency_set([4, 9, 14, 100])
    once = canonicalize(fs)
    assert canonicalize(once).freqs == once.freqs


def test_exhaustive_trivial_sizes():
    r1 = exhaustive_sigma(1, 10)
    assert r1.best_set.freqs == (1,)
    assert abs(r1.best_value - 1.0) < 1e-10

    r2 = exhaustive_sigma(2, 10)
    assert r2.best_set.freqs == (1, 2)
    assert abs(r2.best_value - 4 / (math.pi * math.sqrt(2))) < 1e-8


def test_exhaustive_three_frequencies_regression():
    r = exhaustive_sigma(3, 12)
    assert r.best_set.freqs == (1, 2, 4)
    assert abs(r.best_value - 0.9236878858009567) < 1e-9
    # the maximizer must beat its own Holder certificate
    assert r.best_value >= holder_lower_bound(r.best_set).normalized_lower_bound


def test_exhaustive_monotone_in_max_freq():
    small = exhaustive_sigma(3, 8)
    large = exhaustive_sigma(3, 12)
    assert large.best_value >= small.best_value - 1e-12


def test_exhaustive_space_guard():
    with pytest.raises(SearchSpaceTooLarge):
        exhaustive_sigma(8, 2000)


def test_anneal_recovers_known_optimum():
    r = anneal_sigma(2, max_freq=100, budget=300, seed=1)
    assert r.best_set.freqs == (1, 2)
    assert abs(r.best_value - 4 / (math.pi * math.sqrt(2))) < 1e-7


def test_anneal_at_least_exhaustive():
    exact = exhaustive_sigma(3, 12)
    r = anneal_sigma(3, max_freq=30, budget=1500, seed=3)
    assert r.best_value >= exact.best_value - 1e-6


def test_anneal_deterministic_for_fixed_seed():
    a = anneal_sigma(3, max_freq=20, budget=200, seed=11)
    b = anneal_sigma(3, max_freq=20, budget=200, seed=11)
    assert a.best_set.freqs == b.best_set.freqs
    assert a.best_value == b.best_value


def test_convergence_study_rows():
    rows = convergence_study(8, [1, 2, 4], McConfig(samples=100_000, seed=2))
    assert [r.n for r in rows] == [1, 2, 4]
    assert rows[0].normalized_l1 == 1.0
    for r in rows:
        assert r.gap_to_limit == SQRT_PI_OVER_2 - r.normalized_l1
        assert r.std_error >= 0.0


def test_convergence_study_approaches_limit():
    rows = convergence_study(8, [2, 8], McConfig(samples=400_000, seed=2))
    assert abs(rows[-1].gap_to_limit) < abs(rows[0].gap_to_limit)


def test_fit_rate_constant_recovers_planted_slope():
    rows = [
        StudyRow(
            n=n,
            normalized_l1=0.0,
            std_error=0.0,
            gap_to_limit=0.37 * math.log(n) ** (-1 / 16),
        )
        for n in (4, 8, 16, 32, 64)
    ]
    c2, resid = fit_rate_constant(rows)
    assert abs(c2 - 0.37) < 1e-10
    assert resid < 1e-10
