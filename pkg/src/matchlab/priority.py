"""Offline algorithms driven by current vertex degrees.

The two main algorithms repeatedly select a uniformly random online vertex
of minimum current degree (degree among still-free offline neighbors) and
match it: one to a uniformly random free neighbor, the other to the free
neighbor ranked best by a priority list drawn once up front.  A right-hand
-side variant consumes the offline vertices of hub-pendant graphs in a
given order; it is the analysis-friendly twin of the priority-list variant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from matchlab.families import FamilyDescriptor
from matchlab.graphs import BipartiteGraph, Matching, Permutation
from matchlab.rng import make_rng

_DEAD = 1 << 40  # sentinel degree for processed online vertices


@dataclass
class LiveState:
    """Snapshot handed to on_step callbacks before each selection."""

    step: int
    curdeg: np.ndarray        # near-_DEAD values mark processed vertices
    alive_offline: np.ndarray

    def alive_online_mask(self) -> np.ndarray:
        # dead entries start at _DEAD and only lose one per later deletion,
        # so half the sentinel cleanly separates them from real degrees
        return self.curdeg < _DEAD // 2

    def verify(self, g: BipartiteGraph) -> bool:
        """Recompute every alive degree from the masks and compare."""
        for u in np.flatnonzero(self.alive_online_mask()):
            nb = g.neighbors(int(u))
            if int(self.alive_offline[nb].sum()) != int(self.curdeg[u]):
                return False
        return True


def _min_degree_loop(g: BipartiteGraph, rng: np.random.Generator | None,
                     pick, on_step=None) -> Matching:
    """Shared loop; pick(free_neighbors, rng) chooses the partner.

    rng=None selects the lowest-index minimum-degree vertex instead of a
    uniform one (the deterministic variant used by equivalence tests).
    Isolated vertices are deleted unmatched, consuming one iteration.
    """
    curdeg = g.online_degrees.astype(np.int64).copy()
    alive_v = np.ones(g.n_offline, dtype=bool)
    m = Matching(g.n_online, g.n_offline)
    for step in range(g.n_online):
        if on_step is not None:
            on_step(LiveState(step, curdeg, alive_v))
        d = curdeg.min()
        if rng is None:
            u = int(np.argmin(curdeg))
        else:
            cands = np.flatnonzero(curdeg == d)
            u = int(cands[rng.integers(cands.size)])
        if d == 0:
            curdeg[u] = _DEAD
            continue
        nb = g.neighbors(u)
        f = nb[alive_v[nb]]
        assert f.size == d
        v = int(pick(f, rng))
        m.match(u, v)
        alive_v[v] = False
        curdeg[u] = _DEAD
        curdeg[g.offline_neighbors(v)] -= 1
    return m


def run_min_greedy(g: BipartiteGraph, seed: int, on_step=None) -> Matching:
    """Min-degree selection, uniformly random free partner."""
    rng = make_rng(seed)
    return _min_degree_loop(g, rng, lambda f, r: f[r.integers(f.size)], on_step)


def run_min_ranking(g: BipartiteGraph, seed: int, on_step=None) -> Matching:
    """Min-degree selection, partner minimizing a random priority list.

    The offline priority list is drawn once before the loop; only the
    selection among tied minimum-degree vertices stays random afterwards.
    """
    rng = make_rng(seed)
    pi = Permutation.random(g.n_offline, rng)
    rank = pi.rank
    return _min_degree_loop(g, rng, lambda f, r: f[np.argmin(rank[f])], on_step)


def run_min_ranking_fixed(g: BipartiteGraph, pi: Permutation, on_step=None) -> Matching:
    """Deterministic variant: given priority list, lowest-index selection.

    Lets tests compare against the offline-order twin run for run; on
    graphs where tied vertices are interchangeable the tie rule is
    immaterial, which is exactly what the equivalence tests exercise.
    """
    if len(pi) != g.n_offline:
        raise ValueError("pi size must equal n_offline")
    rank = pi.rank
    return _min_degree_loop(g, None, lambda f, r: f[np.argmin(rank[f])], on_step)


def run_rhs_greedy(g: BipartiteGraph, desc: FamilyDescriptor,
                   offline_order: Permutation) -> tuple[Matching, int]:
    """Offline-side pass over a hub-pendant graph.

    Receives the offline vertices in the given order and matches each to
    the lowest-index free online vertex among its neighbors (hubs see all
    of U, pendants only their partner).  Returns the matching and the
    number of pendant edges used.
    """
    if desc.family != "hgraph":
        raise ValueError("run_rhs_greedy needs hub-pendant shape metadata")
    n = desc.params["n"]
    k = desc.params["k"]
    if g.n_online != n or g.n_offline != n + k:
        raise ValueError("graph does not match its descriptor")
    if len(offline_order) != n + k:
        raise ValueError("offline order size must equal n_offline")
    nxt = list(range(n + 1))  # nxt[i]: first maybe-alive index >= i

    def find(i: int) -> int:
        while nxt[i] != i:
            nxt[i] = nxt[nxt[i]]
            i = nxt[i]
        return i

    m = Matching(n, n + k)
    pendant_used = 0
    for v in offline_order.order:
        v = int(v)
        if v < k:
            u = find(0)
            if u < n:
                m.match(u, v)
                nxt[u] = u + 1
        else:
            u = v - k
            if find(u) == u:
                m.match(u, v)
                nxt[u] = u + 1
                pendant_used += 1
    return m, pendant_used
