"""Single-pass and multipass online matching on a fixed arrival order.

Arrivals are processed once each; an arrival is matched immediately to a
free neighbor chosen by the tie-break policy, or left unmatched forever.
The multipass variant reruns the same arrival order while refining the
offline priority list from the categories collected in earlier passes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from matchlab.analysis import TrialStats, trial_stats
from matchlab.graphs import BipartiteGraph, Matching, Permutation
from matchlab.rng import derive_seed, make_rng

# Category value meaning "never matched so far"; strictly below every
# finite category, which are -1, -2, ... down to -(number of passes).
CATEGORY_NEG_INF = -(2 ** 62)

GREEDY_TIE_BREAKS = ("lowest-index", "offline-rank", "max-index", "random")


@dataclass
class RunConfig:
    """Bundle of run inputs used by the experiment layer."""

    arrival: Permutation | None = None
    sigma: Permutation | None = None
    tie_break: str = "lowest-index"
    seed: int | None = None


def _arrival_or_identity(g: BipartiteGraph, arrival: Permutation | None) -> Permutation:
    if arrival is None:
        return Permutation.identity(g.n_online)
    if len(arrival) != g.n_online:
        raise ValueError("arrival order size must equal n_online")
    return arrival


def run_greedy(g: BipartiteGraph, arrival: Permutation | None = None,
               tie_break: str = "lowest-index", sigma: Permutation | None = None,
               seed: int | None = None) -> Matching:
    """One greedy pass: match each arrival to a free neighbor if any.

    tie_break picks among free neighbors: "lowest-index", "max-index",
    "offline-rank" (minimize sigma's rank; equivalent to run_ranking),
    or "random" (uniform per decision, seeded).
    """
    if tie_break not in GREEDY_TIE_BREAKS:
        raise ValueError(f"unknown tie_break {tie_break!r}")
    arrival = _arrival_or_identity(g, arrival)
    if tie_break == "offline-rank":
        if sigma is None:
            raise ValueError("offline-rank tie break needs sigma")
        return run_ranking(g, arrival, sigma)
    rng = None
    if tie_break == "random":
        if seed is None:
            raise ValueError("random tie break needs a seed")
        rng = make_rng(seed)
    free = np.ones(g.n_offline, dtype=bool)
    m = Matching(g.n_online, g.n_offline)
    for u in arrival.order:
        nb = g.neighbors(u)
        if not nb.size:
            continue
        f = nb[free[nb]]
        if not f.size:
            continue
        if tie_break == "lowest-index":
            v = int(f[0])
        elif tie_break == "max-index":
            v = int(f[-1])
        else:
            v = int(f[rng.integers(f.size)])
        m.match(int(u), v)
        free[v] = False
    return m


def run_ranking(g: BipartiteGraph, arrival: Permutation | None,
                sigma: Permutation) -> Matching:
    """Greedy pass matching each arrival to its best-ranked free neighbor.

    sigma ranks the offline side; lower rank wins.
    """
    arrival = _arrival_or_identity(g, arrival)
    if len(sigma) != g.n_offline:
        raise ValueError("sigma size must equal n_offline")
    rank = sigma.rank
    free = np.ones(g.n_offline, dtype=bool)
    m = Matching(g.n_online, g.n_offline)
    for u in arrival.order:
        nb = g.neighbors(u)
        if not nb.size:
            continue
        f = nb[free[nb]]
        if not f.size:
            continue
        v = int(f[np.argmin(rank[f])])
        m.match(int(u), v)
        free[v] = False
    return m


def run_ranking_random(g: BipartiteGraph, arrival: Permutation | None,
                       trials: int, seed: int) -> TrialStats:
    """Matching sizes of run_ranking over uniformly drawn sigma.

    Per-trial seeds are derived from (seed, trial), so results do not
    depend on execution order.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    arrival = _arrival_or_identity(g, arrival)
    sizes = np.empty(trials, dtype=np.int64)
    for t in range(trials):
        rng = make_rng(derive_seed(seed, t))
        sigma = Permutation.random(g.n_offline, rng)
        sizes[t] = run_ranking(g, arrival, sigma).size
    return trial_stats(sizes, seed=seed)


def refine_sigma(sigma: Permutation, categories) -> Permutation:
    """Reorder sigma with categories as the primary key.

    The result ranks v1 before v2 iff categories[v1] < categories[v2], or
    the categories tie and sigma ranks v1 before v2.  Equivalent to a
    stable sort of the offline side by category.
    """
    cat = np.asarray(categories, dtype=np.int64)
    if cat.size != len(sigma):
        raise ValueError("categories must cover every offline vertex")
    order = np.lexsort((sigma.rank, cat))
    return Permutation(order)


def run_category_advice(g: BipartiteGraph, arrival: Permutation | None = None,
                        k: int = 1) -> tuple[Matching, list[int]]:
    """k-pass matching with category advice; returns (last pass, sizes).

    Pass i runs run_ranking with the current refined priority list, then
    marks every vertex matched for the first time with category -i.
    Unmatched vertices keep the sentinel and therefore outrank everything
    in later passes; among matched vertices, later first-match wins.
    The arrival order is identical in every pass.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    arrival = _arrival_or_identity(g, arrival)
    base = Permutation.identity(g.n_offline)
    cat = np.full(g.n_offline, CATEGORY_NEG_INF, dtype=np.int64)
    sizes: list[int] = []
    m = Matching(g.n_online, g.n_offline)
    for i in range(1, k + 1):
        sigma_c = refine_sigma(base, cat)
        m = run_ranking(g, arrival, sigma_c)
        sizes.append(m.size)
        newly = (cat == CATEGORY_NEG_INF) & m.matched_offline_mask()
        cat[newly] = -i
    return m, sizes
