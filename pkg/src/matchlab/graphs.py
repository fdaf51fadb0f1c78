"""Bipartite graph core.

Graphs are immutable once constructed: adjacency is stored as sorted,
read-only integer arrays (one per online vertex) plus CSR/CSC index arrays
shared by every algorithm in the package.  Online vertices are indexed
0..n_online-1 and offline vertices 0..n_offline-1.

Two maximum-matching routes are kept deliberately separate: a fast
Hopcroft-Karp oracle (scipy backend) used everywhere, and an independent
exhaustive-search oracle used to cross-check it on small instances.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

BRUTE_FORCE_MAX_ONLINE = 12


class BipartiteGraph:
    """Immutable bipartite graph given by online-side adjacency lists."""

    def __init__(self, n_online: int, n_offline: int, adj) -> None:
        if n_online < 0 or n_offline < 0:
            raise ValueError("vertex counts must be non-negative")
        if len(adj) != n_online:
            raise ValueError("adjacency must have one row per online vertex")
        self.n_online = int(n_online)
        self.n_offline = int(n_offline)
        rows = []
        for u, nbrs in enumerate(adj):
            a = np.asarray(nbrs, dtype=np.int64)
            if a.ndim != 1:
                raise ValueError(f"row {u} is not a flat list")
            a = np.sort(a)
            if a.size:
                if a[0] < 0 or a[-1] >= n_offline:
                    raise ValueError(f"row {u} has out-of-range neighbors")
                if np.any(a[1:] == a[:-1]):
                    raise ValueError(f"row {u} has duplicate neighbors")
            a.flags.writeable = False
            rows.append(a)
        self._adj = tuple(rows)
        self._build_index()

    def _build_index(self) -> None:
        degs = np.array([a.size for a in self._adj], dtype=np.int64)
        self.online_degrees = degs
        self.indptr = np.concatenate(([0], np.cumsum(degs)))
        if self.n_online:
            self.indices = np.concatenate(self._adj) if self.indptr[-1] else np.empty(0, np.int64)
        else:
            self.indices = np.empty(0, np.int64)
        self.n_edges = int(self.indptr[-1])
        self.offline_degrees = np.bincount(self.indices, minlength=self.n_offline)
        # CSC: offline -> sorted online neighbors, via counting sort
        order = np.argsort(self.indices, kind="stable")
        self.indptr_offline = np.concatenate(([0], np.cumsum(self.offline_degrees)))
        rows_of_edges = np.repeat(np.arange(self.n_online), degs)
        self.indices_offline = rows_of_edges[order]
        for a in (self.online_degrees, self.indptr, self.indices,
                  self.offline_degrees, self.indptr_offline, self.indices_offline):
            a.flags.writeable = False

    def neighbors(self, u: int) -> np.ndarray:
        """Sorted offline neighbors of online vertex u (read-only view)."""
        return self._adj[u]

    def offline_neighbors(self, v: int) -> np.ndarray:
        """Sorted online neighbors of offline vertex v (read-only view)."""
        return self.indices_offline[self.indptr_offline[v]:self.indptr_offline[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        a = self._adj[u]
        i = np.searchsorted(a, v)
        return i < a.size and a[i] == v

    def adjacency(self) -> list[list[int]]:
        """Plain-list copy of the adjacency, for serialization."""
        return [a.tolist() for a in self._adj]

    def to_csr(self) -> csr_matrix:
        data = np.ones(self.n_edges, dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr),
                          shape=(self.n_online, self.n_offline))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (self.n_online == other.n_online
                and self.n_offline == other.n_offline
                and all(np.array_equal(a, b) for a, b in zip(self._adj, other._adj)))

    def __repr__(self) -> str:
        return (f"BipartiteGraph(n_online={self.n_online}, "
                f"n_offline={self.n_offline}, n_edges={self.n_edges})")


class Matching:
    """Partial matching with mutual partner maps; -1 means unmatched."""

    def __init__(self, n_online: int, n_offline: int) -> None:
        self.n_online = n_online
        self.n_offline = n_offline
        self.partner_of_online = np.full(n_online, -1, dtype=np.int64)
        self.partner_of_offline = np.full(n_offline, -1, dtype=np.int64)
        self.size = 0

    def match(self, u: int, v: int) -> None:
        assert self.partner_of_online[u] == -1 and self.partner_of_offline[v] == -1
        self.partner_of_online[u] = v
        self.partner_of_offline[v] = u
        self.size += 1

    def pairs(self) -> list[tuple[int, int]]:
        us = np.flatnonzero(self.partner_of_online >= 0)
        return [(int(u), int(self.partner_of_online[u])) for u in us]

    def matched_offline_mask(self) -> np.ndarray:
        return self.partner_of_offline >= 0

    def matched_online_mask(self) -> np.ndarray:
        return self.partner_of_online >= 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return (np.array_equal(self.partner_of_online, other.partner_of_online)
                and np.array_equal(self.partner_of_offline, other.partner_of_offline))

    def __repr__(self) -> str:
        return f"Matching(size={self.size}, pairs={self.pairs()})"


class Permutation:
    """Permutation of n items with both directions precomputed.

    order[p] is the item at position p; rank[x] is the position of item x.
    Used both for arrival orders (online side) and priority lists
    (offline side).
    """

    def __init__(self, order) -> None:
        self.order = np.asarray(order, dtype=np.int64)
        n = self.order.size
        if n and (self.order.min() < 0 or self.order.max() >= n
                  or np.bincount(self.order, minlength=n).max() != 1):
            raise ValueError("not a permutation of 0..n-1")
        self.rank = np.empty(n, dtype=np.int64)
        self.rank[self.order] = np.arange(n)
        self.order.flags.writeable = False
        self.rank.flags.writeable = False

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Permutation":
        return cls(rng.permutation(n))

    def __len__(self) -> int:
        return self.order.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self.order, other.order)

    def __repr__(self) -> str:
        return f"Permutation({self.order.tolist()})"


def verify_matching(g: BipartiteGraph, m: Matching) -> bool:
    """True iff m is a valid (not necessarily maximal) matching of g."""
    if m.n_online != g.n_online or m.n_offline != g.n_offline:
        return False
    seen = 0
    for u in range(g.n_online):
        v = int(m.partner_of_online[u])
        if v == -1:
            continue
        if v < 0 or v >= g.n_offline or not g.has_edge(u, v):
            return False
        if int(m.partner_of_offline[v]) != u:
            return False
        seen += 1
    if seen != m.size:
        return False
    vs = np.flatnonzero(m.partner_of_offline >= 0)
    if vs.size != m.size:
        return False
    for v in vs:
        u = int(m.partner_of_offline[v])
        if int(m.partner_of_online[u]) != v:
            return False
    return True


def maximum_matching(g: BipartiteGraph) -> Matching:
    """Maximum-cardinality matching (Hopcroft-Karp, scipy backend).

    Deterministic for a fixed graph: adjacency rows are stored sorted, so
    the CSR handed to the solver is canonical.
    """
    m = Matching(g.n_online, g.n_offline)
    if g.n_online == 0 or g.n_offline == 0 or g.n_edges == 0:
        return m
    row_match = maximum_bipartite_matching(g.to_csr(), perm_type="column")
    for u in np.flatnonzero(row_match >= 0):
        m.match(int(u), int(row_match[u]))
    return m


def brute_force_maximum_matching(g: BipartiteGraph) -> Matching:
    """Exhaustive-search maximum matching, independent of the fast oracle.

    Recurses over online vertices trying every free neighbor plus the
    skip branch, memoized on (vertex, frozen set of used offline vertices).
    Exponential in the worst case; guarded to small instances.
    """
    if g.n_online > BRUTE_FORCE_MAX_ONLINE:
        raise ValueError(
            f"brute force limited to n_online <= {BRUTE_FORCE_MAX_ONLINE}")
    adj = [list(map(int, g.neighbors(u))) for u in range(g.n_online)]
    n = g.n_online
    memo: dict[tuple[int, int], int] = {}

    def best(u: int, used: int) -> int:
        if u == n:
            return 0
        key = (u, used)
        val = memo.get(key)
        if val is not None:
            return val
        r = best(u + 1, used)
        for v in adj[u]:
            if not used >> v & 1:
                r = max(r, 1 + best(u + 1, used | 1 << v))
        memo[key] = r
        return r

    m = Matching(g.n_online, g.n_offline)
    used = 0
    for u in range(n):
        target = best(u, used)
        if best(u + 1, used) == target:
            continue
        for v in adj[u]:
            if not used >> v & 1 and 1 + best(u + 1, used | 1 << v) == target:
                m.match(u, v)
                used |= 1 << v
                break
    return m


def random_bipartite(n_online: int, n_offline: int, p: float,
                     rng: np.random.Generator) -> BipartiteGraph:
    """Independent-edge random bipartite graph; test fuzzing utility."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    mask = rng.random((n_online, n_offline)) < p
    adj = [np.flatnonzero(mask[u]) for u in range(n_online)]
    return BipartiteGraph(n_online, n_offline, adj)


def graph_to_dict(g: BipartiteGraph) -> dict:
    return {"n_online": g.n_online, "n_offline": g.n_offline,
            "adj": g.adjacency()}


def graph_from_dict(d: dict) -> BipartiteGraph:
    try:
        return BipartiteGraph(d["n_online"], d["n_offline"], d["adj"])
    except KeyError as e:
        raise ValueError(f"graph dict missing key {e}") from e
