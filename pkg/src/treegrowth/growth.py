"""The two tree-growth processes and their exact small-graph law.

The discrete process repeatedly adds a uniformly random boundary edge
(exactly one endpoint inside the tree).  The continuous process assigns
independent unit-rate exponential weights to all edges and takes the
shortest-path tree; by memorylessness the two processes produce the same
tree law, which the law-equivalence machinery here verifies empirically
against an exact enumeration.
"""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.sparse.csgraph import dijkstra

from treegrowth.graphs import BudgetExceededError, Graph, GraphError
from treegrowth.randomness import sample_exponential

# Strategy/backend cutoffs.  Both sides of each cutoff implement the same
# law; the choice is deterministic in the graph so replays are stable.
_MULTISET_MAX_N = 2048
_MULTISET_MAX_M = 50_000
_PYTHON_DIJKSTRA_MAX_N = 128


class GrowthCertificateError(RuntimeError):
    """Raised when a grown tree fails its optimality certificate."""


@dataclass(frozen=True)
class RootedTree:
    root: int
    parent: np.ndarray  # parent[v], -1 at the root
    attach_order: np.ndarray  # vertices in the order they joined

    def depths(self) -> np.ndarray:
        n = len(self.parent)
        d = np.full(n, -1, dtype=np.int64)
        d[self.root] = 0
        for v in range(n):
            if d[v] >= 0:
                continue
            chain = [v]
            u = int(self.parent[v])
            while d[u] < 0:
                chain.append(u)
                u = int(self.parent[u])
            base = int(d[u])
            for i, w in enumerate(reversed(chain), 1):
                d[w] = base + i
        return d

    def height(self) -> int:
        return int(self.depths().max())

    def edge_key(self, g: Graph) -> tuple[int, ...]:
        """Sorted edge ids of the tree, a canonical identity for law tests."""
        ids = [
            g.edge_id(int(v), int(self.parent[v]))
            for v in range(g.n)
            if v != self.root
        ]
        return tuple(sorted(ids))


def sample_edge_weights(g: Graph, stream: np.random.Generator) -> np.ndarray:
    return sample_exponential(stream, g.m)


# -- discrete boundary-edge process ------------------------------------------


def _grow_discrete_multiset(g: Graph, s: int, stream) -> RootedTree:
    """Literal implementation: keep one entry per boundary edge, drop stale
    entries lazily.  Conditioned on hitting a live entry the draw is uniform
    over the boundary."""
    n = g.n
    parent = np.full(n, -1, dtype=np.int64)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[s] = True
    attach = [s]
    boundary = [(s, int(v)) for v in g.neighbors(s)]
    while len(attach) < n:
        i = int(stream.integers(len(boundary)))
        u, v = boundary[i]
        boundary[i] = boundary[-1]
        boundary.pop()
        if in_tree[v]:
            continue
        parent[v] = u
        in_tree[v] = True
        attach.append(v)
        for w in g.neighbors(v):
            if not in_tree[w]:
                boundary.append((v, int(w)))
    return RootedTree(s, parent, np.asarray(attach, dtype=np.int64))


def _grow_discrete_weighted(g: Graph, s: int, stream) -> RootedTree:
    """Vectorized equivalent: pick the inside endpoint with probability
    proportional to its boundary degree, then a uniform outside neighbor.
    Every boundary edge is chosen with probability 1/boundary size."""
    n = g.n
    indptr, indices = g.adj_indptr, g.adj_indices
    parent = np.full(n, -1, dtype=np.int64)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[s] = True
    bdeg = np.zeros(n, dtype=np.int64)
    bdeg[s] = g.degrees[s]
    attach = np.empty(n, dtype=np.int64)
    attach[0] = s
    for step in range(1, n):
        cw = np.cumsum(bdeg)
        r = int(stream.integers(int(cw[-1])))
        u = int(np.searchsorted(cw, r, side="right"))
        nb = indices[indptr[u] : indptr[u + 1]]
        outside = nb[~in_tree[nb]]
        v = int(outside[stream.integers(outside.size)])
        parent[v] = u
        in_tree[v] = True
        attach[step] = v
        nbv = indices[indptr[v] : indptr[v + 1]]
        inside = in_tree[nbv]
        bdeg[nbv[inside]] -= 1
        bdeg[v] = nbv.size - int(inside.sum())
    return RootedTree(s, parent, attach)


def grow_discrete(
    g: Graph, s: int, stream: np.random.Generator, strategy: str = "auto"
) -> RootedTree:
    if not 0 <= s < g.n:
        raise GraphError(f"start vertex {s} out of range")
    if strategy == "auto":
        strategy = (
            "multiset"
            if g.n <= _MULTISET_MAX_N and g.m <= _MULTISET_MAX_M
            else "weighted"
        )
    if strategy == "multiset":
        return _grow_discrete_multiset(g, s, stream)
    if strategy == "weighted":
        return _grow_discrete_weighted(g, s, stream)
    raise ValueError(f"unknown strategy {strategy!r}")


# -- first-passage percolation ---------------------------------------------------


@dataclass(frozen=True)
class FppResult:
    tree: RootedTree
    hitting: np.ndarray  # weighted distance from the root to each vertex
    cover_time: float  # max hitting time
    longest_weighted_path_edges: int  # tree depth of the last vertex reached


def _dijkstra_python(g: Graph, s: int, w: np.ndarray):
    n = g.n
    indptr, indices, eids = g.adj_indptr, g.adj_indices, g.adj_edge_ids
    dist = np.full(n, np.inf)
    parent = np.full(n, -1, dtype=np.int64)
    done = np.zeros(n, dtype=bool)
    dist[s] = 0.0
    heap = [(0.0, s, -1)]
    while heap:
        d, v, p = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        parent[v] = p
        for i in range(indptr[v], indptr[v + 1]):
            u = int(indices[i])
            nd = d + w[eids[i]]
            if not done[u] and nd < dist[u]:
                dist[u] = nd
                heapq.heappush(heap, (nd, u, v))
    return dist, parent


def grow_fpp(g: Graph, s: int, weights, check: bool = False) -> FppResult:
    if not 0 <= s < g.n:
        raise GraphError(f"start vertex {s} out of range")
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (g.m,):
        raise GraphError(f"need {g.m} edge weights, got shape {w.shape}")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise GraphError("edge weights must be finite and non-negative")
    if g.n <= _PYTHON_DIJKSTRA_MAX_N:
        dist, parent = _dijkstra_python(g, s, w)
    else:
        dist, pred = dijkstra(g.weight_csr(w), indices=s, return_predecessors=True)
        parent = pred.astype(np.int64)
        parent[parent == -9999] = -1
    order = np.argsort(dist, kind="stable")
    tree = RootedTree(s, parent, order)
    if check:
        _check_fpp_certificate(g, w, dist, tree)
    far = int(np.argmax(dist))
    return FppResult(tree, dist, float(dist[far]), int(tree.depths()[far]))


def _check_fpp_certificate(g: Graph, w, dist, tree) -> None:
    tol = 1e-9
    if dist[tree.root] != 0.0:
        raise GrowthCertificateError("root has nonzero hitting time")
    u, v = g.edges[:, 0], g.edges[:, 1]
    slack = np.abs(dist[u] - dist[v]) - w
    if np.any(slack > tol):
        e = int(np.argmax(slack))
        raise GrowthCertificateError(
            f"edge {tuple(g.edges[e])} violates the triangle inequality"
        )
    for x in range(g.n):
        p = int(tree.parent[x])
        if p < 0:
            continue
        expected = dist[p] + w[g.edge_id(x, p)]
        if abs(dist[x] - expected) > tol:
            raise GrowthCertificateError(f"vertex {x} is not tight through its parent")
    d_sorted = dist[tree.attach_order]
    if np.any(np.diff(d_sorted) < -tol):
        raise GrowthCertificateError("attach order is not monotone in hitting time")


def sample_height(
    g: Graph, s: int, stream: np.random.Generator, process: str = "fpp"
) -> int:
    if process == "fpp":
        return grow_fpp(g, s, sample_edge_weights(g, stream)).tree.height()
    if process == "discrete":
        return grow_discrete(g, s, stream).height()
    raise ValueError(f"unknown process {process!r}")


# -- exact law on small graphs ------------------------------------------------------


def exact_discrete_law(
    g: Graph, s: int, max_vertices: int = 9, max_states: int = 500_000
) -> dict[tuple[int, ...], Fraction]:
    """Distribution over final spanning trees (as sorted edge-id tuples).

    Exhaustive over growth histories, grouped by partial tree, so the cost
    is bounded by the number of distinct subtrees rather than histories.
    """
    if g.n > max_vertices:
        raise BudgetExceededError(f"exact law limited to {max_vertices} vertices")
    eu, ev = g.edges[:, 0], g.edges[:, 1]
    current: dict[frozenset, tuple[Fraction, frozenset]] = {
        frozenset(): (Fraction(1), frozenset({s}))
    }
    for _ in range(g.n - 1):
        nxt: dict[frozenset, tuple[Fraction, frozenset]] = {}
        for state, (p, verts) in current.items():
            boundary = [
                e
                for e in range(g.m)
                if (int(eu[e]) in verts) != (int(ev[e]) in verts)
            ]
            q = p * Fraction(1, len(boundary))
            for e in boundary:
                ns = state | {e}
                new_vert = int(eu[e]) if int(eu[e]) not in verts else int(ev[e])
                if ns in nxt:
                    nxt[ns] = (nxt[ns][0] + q, nxt[ns][1])
                else:
                    nxt[ns] = (q, verts | {new_vert})
            if len(nxt) > max_states:
                raise BudgetExceededError("exact law state budget exceeded")
        current = nxt
    law = {tuple(sorted(state)): p for state, (p, _) in current.items()}
    assert sum(law.values()) == 1
    return law


@dataclass(frozen=True)
class LawComparison:
    trials: int
    support: int
    tv_distance: float
    chi2_pvalue: float


def law_equivalence_test(
    g: Graph,
    s: int,
    trials: int,
    stream: np.random.Generator,
    process: str = "discrete",
) -> LawComparison:
    """Empirical tree distribution of a process vs the exact discrete law."""
    from scipy import stats

    law = exact_discrete_law(g, s)
    counts: Counter = Counter()
    for _ in range(trials):
        if process == "discrete":
            tree = grow_discrete(g, s, stream)
        elif process == "fpp":
            tree = grow_fpp(g, s, sample_edge_weights(g, stream)).tree
        else:
            raise ValueError(f"unknown process {process!r}")
        counts[tree.edge_key(g)] += 1
    unknown = set(counts) - set(law)
    if unknown:
        raise GrowthCertificateError(
            f"observed {len(unknown)} trees outside the exact support"
        )
    keys = sorted(law)
    obs = np.array([counts.get(k, 0) for k in keys], dtype=np.float64)
    exp = np.array([float(law[k]) * trials for k in keys])
    tv = 0.5 * float(np.abs(obs - exp).sum()) / trials
    chi2 = stats.chisquare(f_obs=obs, f_exp=exp)
    return LawComparison(trials, len(keys), tv, float(chi2.pvalue))
