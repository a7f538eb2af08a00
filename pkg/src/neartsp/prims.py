"""Spanning trees, matchings, Eulerian walks, and small exact TSP routines.

All routines take explicit vertex lists plus a weight oracle (or a
:class:`~neartsp.graph.WeightedGraph`), so they work both on instance
vertices and on contracted auxiliary graphs.  Ties are always broken
lexicographically so results are reproducible across runs and platforms.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Sequence

import networkx as nx

from .errors import (
    CapExceeded,
    Disconnected,
    InvalidEndpoints,
    InvalidT,
    NotEulerian,
    OddSet,
)
from .graph import WeightedGraph
from .structures import (
    EdgeSet,
    Forest,
    Matching,
    MultiEdgeSet,
    Tour,
    Tree,
    WalkWithRepeats,
    make_edge,
)


class _Forbidden:
    """Sentinel weight marking an edge that must never be used."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "FORBIDDEN"


FORBIDDEN = _Forbidden()

WeightFn = Callable[[int, int], "int | _Forbidden"]

HELD_KARP_CAP = 20
BRUTE_FORCE_CAP = 12
_MATCHING_DP_CAP = 16


class _UnionFind:
    def __init__(self, items: Iterable[int]):
        self.parent = {x: x for x in items}

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def mst(vertices: Iterable[int], weight: WeightFn) -> EdgeSet:
    """Minimum spanning tree by Kruskal over the allowed edges.

    Edges whose oracle value is :data:`FORBIDDEN` are excluded outright
    rather than given a large finite weight, so an infeasible instance
    raises :class:`Disconnected` instead of silently using a bogus edge.
    Ties are broken by (weight, endpoints).
    """
    vs = sorted(vertices)
    if len(vs) <= 1:
        return EdgeSet.of([])
    candidates: list[tuple[int, int, int]] = []
    for u, v in itertools.combinations(vs, 2):
        w = weight(u, v)
        if w is FORBIDDEN:
            continue
        candidates.append((w, u, v))
    candidates.sort()
    uf = _UnionFind(vs)
    chosen: list[tuple[int, int, int]] = []
    for w, u, v in candidates:
        if uf.union(u, v):
            chosen.append((u, v, w))
            if len(chosen) == len(vs) - 1:
                break
    if len(chosen) != len(vs) - 1:
        raise Disconnected("allowed edges do not span the vertex set")
    return EdgeSet.of(chosen)


def spanning_t_forest(vertices: Iterable[int], weight: WeightFn, t: int) -> Forest:
    """Minimum-weight spanning forest with exactly ``t`` trees.

    Equals the MST with its ``t - 1`` heaviest edges removed (heaviest by
    (weight, endpoints), so the result is unique and deterministic).
    """
    vs = sorted(vertices)
    if not 1 <= t <= max(len(vs), 1):
        raise InvalidT(f"t={t} outside 1..{len(vs)}")
    tree = mst(vs, weight)
    ranked = sorted(tree.edges, key=lambda e: (e[2], e[0], e[1]))
    keep = ranked[: len(ranked) - (t - 1)] if t > 1 else ranked
    uf = _UnionFind(vs)
    for u, v, _ in keep:
        uf.union(u, v)
    groups: dict[int, list[int]] = {}
    for v in vs:
        groups.setdefault(uf.find(v), []).append(v)
    edges_by_root: dict[int, list[tuple[int, int, int]]] = {r: [] for r in groups}
    for u, v, w in keep:
        edges_by_root[uf.find(u)].append((u, v, w))
    trees = [
        Tree(vertices=frozenset(groups[r]), edges=EdgeSet.of(edges_by_root[r]))
        for r in sorted(groups, key=lambda r: min(groups[r]))
    ]
    return Forest(trees=tuple(trees))


def min_weight_perfect_matching(vertices: Iterable[int], weight: WeightFn) -> Matching:
    """Minimum-weight perfect matching on an even vertex set.

    Sets of up to 16 vertices run through an exact bitmask DP whose
    reconstruction picks the lexicographically smallest optimal pair list.
    Larger sets fall back to the networkx blossom implementation, which is
    exact on weight but makes no promise about which optimal matching it
    returns when several tie.
    """
    vs = sorted(vertices)
    if len(vs) % 2 == 1:
        raise OddSet(f"cannot perfectly match {len(vs)} vertices")
    if not vs:
        return Matching(pairs=())
    if len(vs) <= _MATCHING_DP_CAP:
        return _matching_dp(vs, weight)
    return _matching_blossom(vs, weight)


def _matching_dp(vs: list[int], weight: WeightFn) -> Matching:
    m = len(vs)
    wm = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            w = weight(vs[i], vs[j])
            if w is FORBIDDEN:
                raise ValueError("matching oracle returned FORBIDDEN")
            wm[i][j] = wm[j][i] = w
    full = (1 << m) - 1
    inf = float("inf")
    dp = [inf] * (full + 1)
    dp[0] = 0
    for mask in range(1, full + 1):
        if bin(mask).count("1") % 2 == 1:
            continue
        i = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << i)
        best = inf
        sub = rest
        while sub:
            j = (sub & -sub).bit_length() - 1
            sub ^= 1 << j
            cand = dp[rest ^ (1 << j)] + wm[i][j]
            if cand < best:
                best = cand
        dp[mask] = best
    pairs: list[tuple[int, int, int]] = []
    mask = full
    while mask:
        i = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << i)
        sub = rest
        while sub:
            j = (sub & -sub).bit_length() - 1
            sub ^= 1 << j
            if dp[rest ^ (1 << j)] + wm[i][j] == dp[mask]:
                pairs.append(make_edge(vs[i], vs[j], wm[i][j]))
                mask = rest ^ (1 << j)
                break
        else:
            raise AssertionError("matching reconstruction failed")
    return Matching(pairs=tuple(sorted(pairs)))


def _matching_blossom(vs: list[int], weight: WeightFn) -> Matching:
    graph = nx.Graph()
    graph.add_nodes_from(vs)
    for u, v in itertools.combinations(vs, 2):
        w = weight(u, v)
        if w is FORBIDDEN:
            raise ValueError("matching oracle returned FORBIDDEN")
        graph.add_edge(u, v, weight=w)
    mate = nx.min_weight_matching(graph)
    if 2 * len(mate) != len(vs):
        raise OddSet("blossom matching is not perfect")
    pairs = [make_edge(u, v, graph[u][v]["weight"]) for u, v in mate]
    return Matching(pairs=tuple(sorted(pairs)))


def eulerian_tour(multigraph: MultiEdgeSet) -> WalkWithRepeats:
    """Closed walk using every edge of the multigraph exactly once.

    Requires all degrees even and the edge-carrying vertices connected.
    The walk starts at the smallest vertex and greedily takes the smallest
    available neighbour (Hierholzer), so it is deterministic.  The returned
    sequence omits the repeated start vertex; the closing edge is implied.
    """
    m = len(multigraph)
    if m == 0:
        raise NotEulerian("empty multigraph")
    if multigraph.odd_vertices():
        raise NotEulerian("odd-degree vertex present")
    if not multigraph.is_connected():
        raise NotEulerian("edge-carrying vertices are disconnected")
    adj: dict[int, dict[int, int]] = {}
    for u, v, _ in multigraph.edges():
        adj.setdefault(u, {})[v] = adj.setdefault(u, {}).get(v, 0) + 1
        adj.setdefault(v, {})[u] = adj.setdefault(v, {}).get(u, 0) + 1
    start = min(adj)
    stack = [start]
    out: list[int] = []
    while stack:
        v = stack[-1]
        nbrs = adj[v]
        if nbrs:
            u = min(nbrs)
            for a, b in ((v, u), (u, v)):
                if adj[a][b] == 1:
                    del adj[a][b]
                else:
                    adj[a][b] -= 1
            stack.append(u)
        else:
            out.append(stack.pop())
    if len(out) != m + 1:
        raise NotEulerian("edge-carrying vertices are disconnected")
    out.reverse()
    return WalkWithRepeats(order=tuple(out[:-1]), weight=multigraph.total_weight)


def _hk_tour(vs: list[int], weight: Callable[[int, int], int], cap: int) -> Tour:
    m = len(vs)
    if m > cap:
        raise CapExceeded(f"Held-Karp tour over {m} vertices exceeds cap {cap}")
    if m == 1:
        return Tour.canonical(vs, 0)
    if m == 2:
        return Tour.canonical(vs, 2 * weight(vs[0], vs[1]))
    wm = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            wm[i][j] = wm[j][i] = weight(vs[i], vs[j])
    size = 1 << m
    inf = float("inf")
    dp = [inf] * (size * m)
    for j in range(1, m):
        dp[((1 | (1 << j)) * m) + j] = wm[0][j]
    for mask in range(3, size):
        if not mask & 1:
            continue
        base = mask * m
        rest = mask & ~1
        sub = rest
        while sub:
            j = (sub & -sub).bit_length() - 1
            sub ^= 1 << j
            cur = dp[base + j]
            if cur == inf:
                continue
            wj = wm[j]
            free = (~mask) & (size - 1)
            nxt = free
            while nxt:
                k = (nxt & -nxt).bit_length() - 1
                nxt ^= 1 << k
                cand = cur + wj[k]
                idx = (mask | (1 << k)) * m + k
                if cand < dp[idx]:
                    dp[idx] = cand
    full = size - 1
    best_total, best_j = inf, -1
    for j in range(1, m):
        total = dp[full * m + j] + wm[j][0]
        if total < best_total:
            best_total, best_j = total, j
    rev = [best_j]
    mask, cur = full, best_j
    while mask != (1 | (1 << cur)):
        prev_mask = mask ^ (1 << cur)
        for k in range(1, m):
            if k != cur and (prev_mask >> k) & 1:
                if dp[prev_mask * m + k] + wm[k][cur] == dp[mask * m + cur]:
                    rev.append(k)
                    mask, cur = prev_mask, k
                    break
        else:
            raise AssertionError("Held-Karp reconstruction failed")
    rev.append(0)
    rev.reverse()
    order = [vs[i] for i in rev]
    return Tour.canonical(order, int(best_total))


def held_karp_tour(
    g: WeightedGraph, subset: Sequence[int] | None = None, cap: int = HELD_KARP_CAP
) -> Tour:
    """Exact minimum tour over ``subset`` (default: all vertices) by bitmask DP.

    Vertex counts above ``cap`` raise :class:`CapExceeded`; the default cap
    keeps the state table at a size a workstation can hold.  Subsets of one
    or two vertices degenerate to weights 0 and twice the joining edge.
    """
    vs = sorted(range(g.n) if subset is None else subset)
    if len(set(vs)) != len(vs):
        raise ValueError("subset repeats a vertex")
    return _hk_tour(vs, g.w, cap)


def _hk_path(
    vs: list[int], weight: Callable[[int, int], int], s: int, t: int, cap: int
) -> tuple[list[int], int]:
    m = len(vs)
    if m > cap:
        raise CapExceeded(f"Held-Karp path over {m} vertices exceeds cap {cap}")
    idx_of = {v: i for i, v in enumerate(vs)}
    si, ti = idx_of[s], idx_of[t]
    if m == 2:
        return [s, t], weight(s, t)
    wm = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            wm[i][j] = wm[j][i] = weight(vs[i], vs[j])
    size = 1 << m
    inf = float("inf")
    dp = [inf] * (size * m)
    sbit = 1 << si
    for j in range(m):
        if j != si:
            dp[((sbit | (1 << j)) * m) + j] = wm[si][j]
    for mask in range(size):
        if not mask & sbit:
            continue
        base = mask * m
        sub = mask ^ sbit
        while sub:
            j = (sub & -sub).bit_length() - 1
            sub ^= 1 << j
            cur = dp[base + j]
            if cur == inf:
                continue
            wj = wm[j]
            free = (~mask) & (size - 1)
            nxt = free
            while nxt:
                k = (nxt & -nxt).bit_length() - 1
                nxt ^= 1 << k
                cand = cur + wj[k]
                idx = (mask | (1 << k)) * m + k
                if cand < dp[idx]:
                    dp[idx] = cand
    full = size - 1
    total = dp[full * m + ti]
    rev = [ti]
    mask, cur = full, ti
    while mask != (sbit | (1 << cur)):
        prev_mask = mask ^ (1 << cur)
        for k in range(m):
            if k != si and k != cur and (prev_mask >> k) & 1:
                if dp[prev_mask * m + k] + wm[k][cur] == dp[mask * m + cur]:
                    rev.append(k)
                    mask, cur = prev_mask, k
                    break
        else:
            raise AssertionError("Held-Karp path reconstruction failed")
    rev.append(si)
    rev.reverse()
    return [vs[i] for i in rev], int(total)


def held_karp_path(
    g: WeightedGraph,
    subset: Sequence[int],
    s: int,
    t: int,
    cap: int = HELD_KARP_CAP,
) -> tuple[list[int], int]:
    """Exact minimum Hamiltonian s-t path over ``subset`` by bitmask DP."""
    vs = sorted(subset)
    if len(set(vs)) != len(vs):
        raise ValueError("subset repeats a vertex")
    if s == t or s not in vs or t not in vs:
        raise InvalidEndpoints(f"endpoints ({s}, {t}) unusable for subset of {len(vs)}")
    return _hk_path(vs, g.w, s, t, cap)


def brute_force_tour(g: WeightedGraph, cap: int = BRUTE_FORCE_CAP) -> Tour:
    """Exact minimum tour by exhaustive branch and bound.

    Independent of the Held-Karp code path on purpose: the two serve as
    mutual cross-checks.  Among all optimal tours the canonical one
    (lexicographically smallest, starting at vertex 0 with its smaller
    neighbour second) is returned.  The bound used for pruning is the sum
    of minimum incident weights over unvisited vertices, which never
    exceeds the true completion cost.
    """
    n = g.n
    if n > cap:
        raise CapExceeded(f"brute force over {n} vertices exceeds cap {cap}")
    if n == 1:
        return Tour.canonical([0], 0)
    if n == 2:
        return Tour.canonical([0, 1], 2 * g.w(0, 1))
    w = g.matrix
    min_inc = [min(w[v][u] for u in range(n) if u != v) for v in range(n)]
    by_weight = [
        sorted((u for u in range(n) if u != v), key=lambda u, v=v: (w[v][u], u))
        for v in range(n)
    ]
    best = g.tour_weight(range(n))
    visited = bytearray(n)
    visited[0] = 1

    def dfs_value(cur: int, count: int, partial: int, lb_rest: int, first: int) -> None:
        nonlocal best
        if count == n:
            total = partial + w[cur][0]
            if total < best:
                best = total
            return
        last_step = count == n - 1
        for u in by_weight[cur]:
            if visited[u] or (last_step and u < first):
                continue
            np = partial + w[cur][u]
            if np + lb_rest - min_inc[u] >= best:
                continue
            visited[u] = 1
            dfs_value(u, count + 1, np, lb_rest - min_inc[u], first)
            visited[u] = 0

    lb0 = sum(min_inc) - min_inc[0]
    for first in by_weight[0]:
        visited[first] = 1
        dfs_value(first, 2, w[0][first], lb0 - min_inc[first], first)
        visited[first] = 0

    order = [0]

    def dfs_lex(cur: int, count: int, partial: int, lb_rest: int) -> bool:
        if count == n:
            return partial + w[cur][0] == best
        last_step = count == n - 1
        for u in range(1, n):
            if visited[u] or (last_step and u < order[1]):
                continue
            np = partial + w[cur][u]
            if np + lb_rest - min_inc[u] > best:
                continue
            visited[u] = 1
            order.append(u)
            if dfs_lex(u, count + 1, np, lb_rest - min_inc[u]):
                return True
            visited[u] = 0
            order.pop()
        return False

    if not dfs_lex(0, 1, 0, lb0):
        raise AssertionError("branch and bound lost the optimal tour")
    return Tour.canonical(order, best)
