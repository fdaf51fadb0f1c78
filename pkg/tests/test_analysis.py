"""Exact chain expectations, the two samplers, and the rate-equation root."""

import math
from fractions import Fraction

import numpy as np
import pytest

from matchlab.analysis import (EXACT_MODE_MAX_N, chain_step_probs,
                               expected_y_exact, ode_root, simulate_chain,
                               simulate_rhs_empirical, trial_stats)
from matchlab.rng import make_rng

SEED = 361


def _expected_pendants_by_enumeration(n):
    """Independent oracle: walk every trajectory with exact weights."""
    def walk(x, y):
        if x == 0:
            return Fraction(y)
        p = Fraction(x, 2 * x + y)
        return p * walk(x - 1, y + 1) + (1 - p) * walk(x - 1, y)
    return walk(n, 0)


def _rate_gap(n, z):
    """The solved drift balance whose positive root ode_root returns."""
    return math.log1p(z) - 1.0 / (1.0 + z) + 1.0 - math.log(n)


def test_trial_stats_basics():
    s = trial_stats([5, 5, 5, 5])
    assert s.mean == 5.0 and s.variance == 0.0 and s.ci == (5.0, 5.0)
    s = trial_stats([0, 1, 0, 1])
    assert s.mean == 0.5 and s.count == 4
    assert s.ci_low < 0.5 < s.ci_high
    one = trial_stats([2.5])
    assert one.variance == 0.0 and one.stderr == 0.0
    with pytest.raises(ValueError):
        trial_stats([])


def test_trial_stats_covers_the_uniform_mean():
    rng = make_rng(SEED)
    s = trial_stats(rng.random(10_000))
    assert abs(s.mean - 0.5) <= 3 * s.stderr


def test_step_probabilities_are_exact_fractions():
    assert chain_step_probs(1, 0) == (Fraction(1, 2), Fraction(1, 2))
    assert chain_step_probs(1, 1) == (Fraction(2, 3), Fraction(1, 3))
    assert chain_step_probs(3, 4) == (Fraction(7, 10), Fraction(3, 10))
    for x in range(1, 6):
        for y in range(0, 6):
            keep, inc = chain_step_probs(x, y)
            assert keep + inc == 1
            assert inc == Fraction(x, 2 * x + y)
    with pytest.raises(ValueError):
        chain_step_probs(0, 2)
    with pytest.raises(ValueError):
        chain_step_probs(1, -1)


def test_exact_expectation_small_values():
    assert expected_y_exact(1, exact=True) == Fraction(1, 2)
    assert expected_y_exact(2, exact=True) == Fraction(11, 12)
    assert expected_y_exact(1) == 0.5
    with pytest.raises(ValueError):
        expected_y_exact(0)


@pytest.mark.parametrize("n", range(1, 7))
def test_exact_expectation_matches_full_trajectory_enumeration(n):
    assert expected_y_exact(n, exact=True) == _expected_pendants_by_enumeration(n)


def test_float_path_agrees_with_rational_path():
    for n in (1, 2, 5, 10, 20, 30):
        exact = expected_y_exact(n, exact=True)
        assert abs(expected_y_exact(n) - float(exact)) < 1e-12


def test_exact_mode_guard():
    with pytest.raises(ValueError):
        expected_y_exact(EXACT_MODE_MAX_N + 1, exact=True)


def test_expectation_fraction_descends_toward_the_limit():
    target = 1.0 / math.e
    dists = [abs(expected_y_exact(n) / n - target)
             for n in (10, 100, 1000, 2000)]
    assert all(a >= b for a, b in zip(dists, dists[1:]))
    assert dists[-1] < 0.01


def test_chain_sampler_agrees_with_the_exact_value():
    s = simulate_chain(1, 100_000, SEED)
    assert abs(s.mean - 0.5) <= 3 * s.stderr
    s = simulate_chain(120, 4000, SEED)
    assert abs(s.mean - expected_y_exact(120)) <= 3 * s.stderr


def test_chain_sampler_bounds_and_determinism():
    s = simulate_chain(9, 500, 7)
    t = simulate_chain(9, 500, 7)
    assert s.mean == t.mean and s.variance == t.variance
    assert 0.0 <= s.mean <= 9.0
    with pytest.raises(ValueError):
        simulate_chain(0, 10, 1)
    with pytest.raises(ValueError):
        simulate_chain(5, 0, 1)


def test_graph_pass_sampler_agrees_with_the_exact_value():
    s = simulate_rhs_empirical(60, 2000, SEED)
    assert abs(s.mean - expected_y_exact(60)) <= 3 * s.stderr
    tiny = simulate_rhs_empirical(1, 3000, SEED)
    assert abs(tiny.mean - 0.5) <= 3 * tiny.stderr


def test_graph_pass_sampler_is_seed_deterministic():
    a = simulate_rhs_empirical(12, 200, 31)
    b = simulate_rhs_empirical(12, 200, 31)
    assert a.mean == b.mean and a.ci == b.ci


def test_two_samplers_and_the_exact_value_pairwise_agree():
    n = 80
    exact = expected_y_exact(n)
    chain = simulate_chain(n, 4000, SEED + 1)
    graph = simulate_rhs_empirical(n, 1500, SEED + 2)
    assert abs(chain.mean - exact) <= 3 * chain.stderr
    assert abs(graph.mean - exact) <= 3 * graph.stderr
    joint = math.hypot(chain.stderr, graph.stderr)
    assert abs(chain.mean - graph.mean) <= 3 * joint


def test_rate_equation_root_location():
    root = ode_root(1000)
    assert 0.33 <= root / 1000 <= 0.37
    assert abs(ode_root(10 ** 6) / 10 ** 6 - 1 / math.e) < 0.002
    with pytest.raises(ValueError):
        ode_root(2)


def test_rate_equation_root_respects_tolerance():
    n = 500
    tol = 1e-9
    root = ode_root(n, tol)
    assert _rate_gap(n, root - 2 * tol) < 0 < _rate_gap(n, root + 2 * tol)


@pytest.mark.parametrize("n", [100, 1000, 10_000])
def test_rate_gap_signs_bracket_the_scaled_limit(n):
    # the root sits between 0.9 n/e and n/e for every tested size
    assert _rate_gap(n, n / math.e) > 0
    assert _rate_gap(n, 0.9 * n / math.e) < 0
