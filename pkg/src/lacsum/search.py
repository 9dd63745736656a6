"""Search for the best normalized L1 value over n-element frequency sets.

The L1 norm is invariant under shifting all frequencies and under dilating
them by a positive integer, so the search runs over canonical
representatives: minimum element 1 and gcd of pairwise differences 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb, gcd
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, SearchSpaceTooLarge
from .frequency import FrequencySet, lacunary_set, make_frequency_set
from .norms import McConfig, l1_monte_carlo, lp_norm_quadrature
from .quadrature import QuadratureConfig

SQRT_PI_OVER_2 = math.sqrt(math.pi) / 2.0

# coarse rule during the scan, fine rule for the final re-measurement
_COARSE_CFG = QuadratureConfig(points_per_period=8)
_FINE_CFG = QuadratureConfig(points_per_period=64)


@dataclass(frozen=True)
class SearchResult:
    n: int
    best_set: FrequencySet
    best_value: float       # normalized L1 of best_set
    method: str             # "exhaustive" | "anneal"
    evaluations: int
    value_error: float      # quadrature/MC uncertainty of best_value
    seed: Optional[int] = None


@dataclass(frozen=True)
class StudyRow:
    n: int
    normalized_l1: float
    std_error: float
    gap_to_limit: float  # sqrt(pi)/2 - normalized_l1


def canonicalize(fs: FrequencySet) -> FrequencySet:
    """Shift the minimum to 1, then divide the differences by their gcd."""
    if fs.n == 1:
        return make_frequency_set([1])
    base = fs.freqs[0]
    diffs = [k - base for k in fs.freqs[1:]]
    g = 0
    for d in diffs:
        g = gcd(g, d)
    return make_frequency_set([1] + [1 + d // g for d in diffs])


def _normalized_l1(fs: FrequencySet, cfg: QuadratureConfig) -> float:
    est = lp_norm_quadrature(fs, 1, cfg)
    assert est.normalized is not None
    return est.normalized


def _canonical_candidates(n: int, max_freq: int):
    if n == 1:
        yield make_frequency_set([1])
        return
    for rest in combinations(range(2, max_freq + 1), n - 1):
        diffs = [k - 1 for k in rest]
        g = 0
        for d in diffs:
            g = gcd(g, d)
        if g == 1:
            yield make_frequency_set((1,) + rest)


def exhaustive_sigma(
    n: int,
    max_freq: int,
    cfg: QuadratureConfig | None = None,
    max_candidates: int = 200_000,
) -> SearchResult:
    """Enumerate every canonical n-set with entries <= max_freq and keep the maximizer.

    Ties break toward the lexicographically smallest set. The quoted
    value_error is the empirical accuracy level of the fine quadrature rule.
    """
    if n < 1 or max_freq < n:
        raise DomainError("need n >= 1 and max_freq >= n")
    if comb(max_freq - 1, n - 1) > max_candidates:
        raise SearchSpaceTooLarge(
            f"up to {comb(max_freq - 1, n - 1)} candidate sets (guard {max_candidates})"
        )
    cfg = cfg or _FINE_CFG
    best_set = None
    best_value = -math.inf
    evaluations = 0
    for fs in _canonical_candidates(n, max_freq):
        value = _normalized_l1(fs, cfg)
        evaluations += 1
        # candidates arrive in lexicographic order, so a strict improvement
        # test keeps the lexicographically smallest maximizer on ties
        if value > best_value + 1e-12:
            best_set, best_value = fs, value
    assert best_set is not None
    return SearchResult(
        n=n,
        best_set=best_set,
        best_value=best_value,
        method="exhaustive",
        evaluations=evaluations,
        value_error=1e-8,
    )


def anneal_sigma(
    n: int,
    max_freq: int,
    budget: int,
    seed: int,
    max_freq_cap: int = 10**6,
) -> SearchResult:
    """Simulated annealing over canonical sets; geometric cooling, seeded moves.

    Candidates are scored with a coarse quadrature rule; the best few are
    re-measured with the fine rule and the winner of that re-measurement is
    returned.
    """
    if budget < 1:
        raise DomainError("budget must be >= 1")
    if n < 1 or max_freq < n or max_freq > max_freq_cap:
        raise DomainError("need 1 <= n <= max_freq <= cap")
    if n == 1:
        return SearchResult(
            n=1, best_set=make_frequency_set([1]), best_value=1.0,
            method="anneal", evaluations=1, value_error=0.0, seed=seed,
        )

    rg = np.random.default_rng(seed)
    cache: dict[tuple, float] = {}

    def score(fs: FrequencySet) -> float:
        if fs.freqs not in cache:
            cache[fs.freqs] = _normalized_l1(fs, _COARSE_CFG)
        return cache[fs.freqs]

    def random_set() -> FrequencySet:
        vals = 1 + rg.choice(max_freq, size=n, replace=False)
        return canonicalize(make_frequency_set(vals.tolist()))

    # initial temperature from the spread over a small random sample
    probe = [score(random_set()) for _ in range(min(100, budget))]
    temperature = max(float(np.std(probe)), 1e-4)
    cooling = (1e-3) ** (1.0 / max(budget, 2))

    current = random_set()
    current_value = score(current)
    for _ in range(budget):
        idx = int(rg.integers(n))
        vals = list(current.freqs)
        vals[idx] = int(1 + rg.integers(max_freq))
        if len(set(vals)) < n:
            temperature *= cooling
            continue
        proposal = canonicalize(make_frequency_set(vals))
        value = score(proposal)
        if value >= current_value or rg.random() < math.exp((value - current_value) / temperature):
            current, current_value = proposal, value
        temperature *= cooling

    top = sorted(cache.items(), key=lambda kv: (-kv[1], kv[0]))[:10]
    best_set, best_value = None, -math.inf
    for freqs, _ in top:
        value = _normalized_l1(FrequencySet(freqs), _FINE_CFG)
        if value > best_value:
            best_set, best_value = FrequencySet(freqs), value
    assert best_set is not None
    return SearchResult(
        n=n,
        best_set=best_set,
        best_value=best_value,
        method="anneal",
        evaluations=len(cache),
        value_error=1e-8,
        seed=seed,
    )


def convergence_study(
    q: int, n_list: Sequence[int], mc: McConfig
) -> list[StudyRow]:
    """Normalized L1 of {q, ..., q^n} for each n, with the gap to sqrt(pi)/2."""
    rows = []
    for n in n_list:
        est = l1_monte_carlo(lacunary_set(q, n), mc)
        assert est.normalized is not None and est.std_error is not None
        rt = math.sqrt(n)
        rows.append(
            StudyRow(
                n=n,
                normalized_l1=est.normalized,
                std_error=est.std_error / rt,
                gap_to_limit=SQRT_PI_OVER_2 - est.normalized,
            )
        )
    return rows


def fit_rate_constant(rows: Sequence[StudyRow]) -> tuple[float, float]:
    """Least-squares c2 for gap ~ c2 (log n)^{-1/16}; diagnostic only.

    Returns (c2, rms residual). The underlying statement is an inequality,
    so the fit is descriptive, never asserted.
    """
    usable = [r for r in rows if r.n >= 2]
    if not usable:
        raise DomainError("need at least one row with n >= 2")
    x = np.array([math.log(r.n) ** -0.0625 for r in usable])
    y = np.array([r.gap_to_limit for r in usable])
    c2 = float((x @ y) / (x @ x))
    resid = float(np.sqrt(np.mean((y - c2 * x) ** 2)))
    return c2, resid
