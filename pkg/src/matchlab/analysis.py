"""Exact and Monte Carlo analysis of the hub-pendant matching chain.

The offline-side pass over a hub-pendant graph with n online vertices and
n hubs reduces to a two-counter chain: with x online vertices still
unmatched and y pendants already used, the next effective arrival uses a
pendant with probability x / (2x + y) and a hub otherwise, and x always
drops by one.  This module computes the pendant count distribution both
exactly (dynamic program over y) and by simulation, simulates the real
graph process for cross-checking, and locates the root of the continuous
approximation whose value pins the pendant fraction near 1/e.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from matchlab.rng import derive_seed, make_rng

EXACT_MODE_MAX_N = 30


@dataclass
class TrialStats:
    """Summary of one batch of trial values."""

    mean: float
    variance: float
    ci_low: float
    ci_high: float
    count: int
    seed: int | None = None

    @property
    def ci(self) -> tuple[float, float]:
        return (self.ci_low, self.ci_high)

    @property
    def stderr(self) -> float:
        return math.sqrt(self.variance / self.count)


def trial_stats(values, seed: int | None = None) -> TrialStats:
    """Mean, sample variance and normal 95% CI of the trial values."""
    arr = np.asarray(values, dtype=np.float64)
    n = arr.size
    if n < 1:
        raise ValueError("need at least one value")
    mean = math.fsum(arr) / n
    if n > 1:
        variance = math.fsum((x - mean) ** 2 for x in arr) / (n - 1)
    else:
        variance = 0.0
    half = 1.96 * math.sqrt(variance / n)
    return TrialStats(mean=mean, variance=variance,
                      ci_low=mean - half, ci_high=mean + half,
                      count=n, seed=seed)


def chain_step_probs(x: int, y: int) -> tuple[Fraction, Fraction]:
    """Exact (keep-y, increment-y) step probabilities from state (x, y).

    y grows with probability x/(2x+y) and stays put otherwise.  Defined
    for x >= 1: the chain stops once every online vertex is matched, so
    there is no step out of x = 0.
    """
    if x < 1:
        raise ValueError("no step is taken from x = 0")
    if y < 0:
        raise ValueError("y must be non-negative")
    p_inc = Fraction(x, 2 * x + y)
    return 1 - p_inc, p_inc


def expected_y_exact(n: int, exact: bool = False):
    """Expected pendant count after the full n-step chain from (n, 0).

    Float path: vectorized dynamic program over the y-distribution, with
    compensated summation of the final expectation.  exact=True switches
    to rational arithmetic (guarded to n <= 30) and returns a Fraction.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if exact:
        if n > EXACT_MODE_MAX_N:
            raise ValueError(f"exact mode limited to n <= {EXACT_MODE_MAX_N}")
        dist = [Fraction(1)]
        for t in range(n):
            x = n - t
            new = [Fraction(0)] * (t + 2)
            for y, p in enumerate(dist):
                if p:
                    p_inc = Fraction(x, 2 * x + y)
                    new[y + 1] += p * p_inc
                    new[y] += p * (1 - p_inc)
            dist = new
        return sum(y * p for y, p in enumerate(dist))
    dist = np.zeros(n + 1, dtype=np.float64)
    dist[0] = 1.0
    for t in range(n):
        x = float(n - t)
        y = np.arange(t + 1, dtype=np.float64)
        p_inc = x / (2.0 * x + y)
        new = np.zeros(n + 1, dtype=np.float64)
        new[:t + 1] = dist[:t + 1] * (1.0 - p_inc)
        new[1:t + 2] += dist[:t + 1] * p_inc
        dist = new
    return math.fsum(y * p for y, p in enumerate(dist))


def simulate_chain(n: int, trials: int, seed: int) -> TrialStats:
    """Monte Carlo pendant counts of the chain, vectorized over trials."""
    if n < 1 or trials < 1:
        raise ValueError("n and trials must be positive")
    rng = make_rng(seed)
    y = np.zeros(trials, dtype=np.float64)
    for t in range(n):
        x = float(n - t)
        p_inc = x / (2.0 * x + y)
        y += rng.random(trials) < p_inc
    return trial_stats(y, seed=seed)


def simulate_rhs_empirical(n: int, trials: int, seed: int) -> TrialStats:
    """Pendant counts of the real offline-side pass on the (n, n) graph.

    Runs the actual graph algorithm over uniformly random offline orders;
    agreement with simulate_chain and the exact DP validates the chain
    reduction end to end.
    """
    from matchlab.families import gen_h_graph
    from matchlab.graphs import Permutation
    from matchlab.priority import run_rhs_greedy

    if n < 1 or trials < 1:
        raise ValueError("n and trials must be positive")
    g, desc = gen_h_graph(n, n)
    counts = np.empty(trials, dtype=np.int64)
    for t in range(trials):
        rng = make_rng(derive_seed(seed, t))
        order = Permutation.random(2 * n, rng)
        _, pendants = run_rhs_greedy(g, desc, order)
        counts[t] = pendants
    return trial_stats(counts, seed=seed)


def ode_root(n: int, tol: float = 1e-9) -> float:
    """Root of ln(1+z) - 1/(1+z) + 1 - ln(n) on (0, n), by bisection.

    The function is strictly increasing for z > 0, negative at 0 and
    positive at n, so the root exists and is unique; it sits just below
    n / e, which is the content of the 1/e pendant-fraction limit.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    if tol <= 0:
        raise ValueError("tol must be positive")

    def f(z: float) -> float:
        return math.log1p(z) - 1.0 / (1.0 + z) + 1.0 - math.log(n)

    lo, hi = 0.0, float(n)
    assert f(lo) < 0.0 < f(hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
