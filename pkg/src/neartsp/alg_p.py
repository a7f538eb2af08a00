"""Tour construction parameterized by the number of triangle-unsafe vertices.

Two solvers live here.  The splice solver combines an exact tour over the
bad vertices (plus one good gateway vertex) with an approximate tour over
the good vertices.  The chain-guessing solver enumerates how the bad
vertices could be grouped into paths of an optimal tour, builds a
constrained spanning tree per guess, fixes parity with a matching, and
shortcuts the resulting Eulerian walk; the best tour over all guesses is
returned.  With the bad/good split taken from the violating-triangle scan,
every triangle containing a good vertex is metric, which is what makes all
shortcuts here weight-safe.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterator, Sequence

from . import safety
from .errors import CapExceeded, InvariantViolation, StructureViolated
from .graph import WeightedGraph, VertexPartition, bad_vertices_p, min_violating_set
from .metric import christofides, shortcut_metric
from .prims import FORBIDDEN, held_karp_tour, eulerian_tour, min_weight_perfect_matching, mst
from .report import SolveReport
from .structures import EdgeSet, Matching, MultiEdgeSet, Tour

CHAIN_CAP = 7
"""Hard cap on the bad-vertex count for chain-set enumeration."""


@dataclass(frozen=True)
class ChainSet:
    """A partition of the bad vertices into vertex-disjoint paths.

    Each chain is stored endpoint-first with the smaller endpoint leading,
    and the chains are sorted, so equal groupings compare equal.
    """

    chains: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for chain in self.chains:
            if not chain:
                raise ValueError("empty chain")
            if len(chain) >= 2 and chain[0] > chain[-1]:
                raise ValueError("chain not in canonical orientation")
            for v in chain:
                if v in seen:
                    raise ValueError(f"vertex {v} in two chains")
                seen.add(v)
        if self.chains != tuple(sorted(self.chains)):
            raise ValueError("chains not sorted")

    @classmethod
    def of(cls, chains: Sequence[Sequence[int]]) -> "ChainSet":
        canon = []
        for chain in chains:
            seq = tuple(chain)
            if len(seq) >= 2 and seq[0] > seq[-1]:
                seq = seq[::-1]
            canon.append(seq)
        return cls(chains=tuple(sorted(canon)))

    def vertices(self) -> frozenset[int]:
        return frozenset(v for c in self.chains for v in c)

    def edges(self, g: WeightedGraph) -> list[tuple[int, int, int]]:
        out = []
        for chain in self.chains:
            for a, b in zip(chain, chain[1:]):
                out.append((min(a, b), max(a, b), g.w(a, b)))
        return out

    def weight(self, g: WeightedGraph) -> int:
        return sum(w for _, _, w in self.edges(g))


def _set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    """All partitions of ``items`` into non-empty blocks, deterministic order."""
    items = list(items)
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1 :]
        yield [[head]] + part


def _paths_of_block(block: list[int]) -> list[tuple[int, ...]]:
    """All distinct undirected vertex orderings of a block as paths."""
    vs = sorted(block)
    if len(vs) <= 2:
        return [tuple(vs)]
    return sorted(p for p in itertools.permutations(vs) if p[0] < p[-1])


def enumerate_bad_chains(bad: Sequence[int], cap: int = CHAIN_CAP) -> Iterator[ChainSet]:
    """All ways to group the bad vertices into vertex-disjoint paths.

    The count grows super-exponentially (1, 2, 7, 34, 206, ... by bad-set
    size), so inputs larger than ``cap`` raise :class:`CapExceeded`.
    """
    vs = sorted(bad)
    if len(vs) > cap:
        raise CapExceeded(f"{len(vs)} bad vertices exceed the chain cap {cap}")
    if not vs:
        yield ChainSet(chains=())
        return
    for part in _set_partitions(vs):
        per_block = [_paths_of_block(b) for b in part]
        for combo in itertools.product(*per_block):
            yield ChainSet.of(combo)


@dataclass(frozen=True)
class ConstrainedSpanningTree:
    """A spanning tree forced to contain every chain as a subpath.

    Besides containment, the structure guarantees that chain-interior
    vertices keep degree two and that a bad vertex's tree neighbours
    within the bad side are exactly its chain neighbours; everything else
    attaches through good vertices.
    """

    chains: ChainSet
    edges: EdgeSet

    @property
    def total_weight(self) -> int:
        return self.edges.total_weight

    def validate(self, g: WeightedGraph) -> None:
        n = g.n
        if len(self.edges) != n - 1:
            raise InvariantViolation("constrained tree has wrong edge count")
        adj: dict[int, list[int]] = {v: [] for v in range(n)}
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != n:
            raise InvariantViolation("constrained tree does not span")
        edge_keys = {(u, v) for u, v, _ in self.edges}
        bad = self.chains.vertices()
        chain_nbrs: dict[int, set[int]] = {v: set() for v in bad}
        for chain in self.chains.chains:
            for a, b in zip(chain, chain[1:]):
                if (min(a, b), max(a, b)) not in edge_keys:
                    raise InvariantViolation("chain edge missing from constrained tree")
                chain_nbrs[a].add(b)
                chain_nbrs[b].add(a)
        for v in bad:
            bad_nbrs = {u for u in adj[v] if u in bad}
            if bad_nbrs != chain_nbrs[v]:
                raise InvariantViolation("bad vertex has a non-chain bad neighbour")
            if len(chain_nbrs[v]) == 2 and len(adj[v]) != 2:
                raise InvariantViolation("chain-interior vertex grew extra edges")


def build_cst(g: WeightedGraph, chains: ChainSet) -> ConstrainedSpanningTree:
    """Minimum spanning tree constrained to contain the given chains.

    Each chain is contracted to a pseudo-vertex whose distance to a good
    vertex is the smaller of its two endpoint distances; pseudo-vertices
    are mutually unreachable.  The MST of the contracted graph, expanded
    back through the cheaper endpoint (lower id on ties) and joined with
    the chain edges, is a minimum-weight such tree.
    """
    w = g.matrix
    bad = chains.vertices()
    good = sorted(set(range(g.n)) - bad)
    chain_list = chains.chains
    nodes = [-(i + 1) for i in range(len(chain_list))] + good

    def contracted_weight(x: int, y: int):
        if x < 0 and y < 0:
            return FORBIDDEN
        if x >= 0 and y >= 0:
            return w[x][y]
        c = chain_list[-x - 1] if x < 0 else chain_list[-y - 1]
        v = y if x < 0 else x
        return min(w[c[0]][v], w[c[-1]][v])

    contracted = mst(nodes, contracted_weight)
    edges = chains.edges(g)
    for x, y, wt in contracted:
        if x >= 0 and y >= 0:
            edges.append((x, y, wt))
            continue
        c = chain_list[-x - 1] if x < 0 else chain_list[-y - 1]
        v = y if x < 0 else x
        a, b = c[0], c[-1]
        if w[a][v] < w[b][v] or (w[a][v] == w[b][v] and a < b):
            attach = a
        else:
            attach = b
        edges.append((min(attach, v), max(attach, v), wt))
    cst = ConstrainedSpanningTree(chains=chains, edges=EdgeSet.of(edges))
    cst.validate(g)
    return cst


@dataclass(frozen=True)
class ParityMatching:
    """Parity fix for a constrained spanning tree.

    ``aux`` is the matching in the auxiliary graph over the odd-degree
    tree vertices, where matching a chain's two endpoints to each other
    stands for walking the chain twice.  ``doubled_chains`` lists the
    chains realized that way; ``cross_edges`` are ordinary instance edges.
    """

    aux: Matching
    doubled_chains: tuple[int, ...]
    cross_edges: tuple[tuple[int, int, int], ...]
    weight: int


def parity_matching_alg2(
    g: WeightedGraph, chains: ChainSet, cst: ConstrainedSpanningTree
) -> ParityMatching:
    """Minimum matching on odd tree vertices, chain doublings allowed.

    Matching the two endpoints of one chain costs the chain weight (both
    endpoints gain parity by duplicating the chain edges); any other pair
    costs the direct edge.  The bad side never gains edges outside chains
    this way, which the shortcut step relies on.
    """
    degree: dict[int, int] = {}
    for u, v, _ in cst.edges:
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1
    odd = sorted(v for v in range(g.n) if degree.get(v, 0) % 2 == 1)
    endpoint_chain: dict[tuple[int, int], int] = {}
    chain_weights: list[int] = []
    for idx, chain in enumerate(chains.chains):
        chain_weights.append(g.path_weight(chain))
        if len(chain) >= 2:
            a, b = chain[0], chain[-1]
            endpoint_chain[(min(a, b), max(a, b))] = idx

    def aux_weight(u: int, v: int) -> int:
        idx = endpoint_chain.get((min(u, v), max(u, v)))
        if idx is not None:
            return chain_weights[idx]
        return g.w(u, v)

    aux = min_weight_perfect_matching(odd, aux_weight)
    doubled: list[int] = []
    cross: list[tuple[int, int, int]] = []
    for u, v, wt in aux:
        idx = endpoint_chain.get((u, v))
        if idx is not None and chain_weights[idx] == wt:
            doubled.append(idx)
        else:
            cross.append((u, v, g.w(u, v)))
    return ParityMatching(
        aux=aux,
        doubled_chains=tuple(sorted(doubled)),
        cross_edges=tuple(sorted(cross)),
        weight=sum(chain_weights[i] for i in doubled) + sum(w for _, _, w in cross),
    )


def _remove_walk_position(
    g: WeightedGraph, walk: list[int], pos: int, context: str
) -> list[int]:
    """Splice one position out of a closed walk with a weight-safety check."""
    n = len(walk)
    prev = walk[(pos - 1) % n]
    cur = walk[pos]
    nxt = walk[(pos + 1) % n]
    delta = g.w(prev, nxt) - g.w(prev, cur) - g.w(cur, nxt)
    safety.check_weight_nonincrease(delta, 0, context)
    out = walk[:pos] + walk[pos + 1 :]
    # splicing next to a parallel-edge traversal leaves ...x, x...; drop one
    m = len(out)
    if m >= 2:
        j = pos % m
        if out[j] == out[j - 1]:
            out = out[:j] + out[j + 1 :] if j > 0 else out[1:]
    return out


def shortcut_alg2(
    g: WeightedGraph,
    chains: ChainSet,
    cst: ConstrainedSpanningTree,
    matching: ParityMatching,
) -> Tour:
    """Collapse tree plus parity edges into a Hamiltonian tour.

    Doubled chains are first rewritten: one chain copy and one good edge
    at a well-connected endpoint are traded for a single edge from that
    good vertex to the far endpoint, which cannot raise the weight because
    every triangle along the chain contains a good vertex.  The Eulerian
    walk of the result is then deduplicated, removing repeated bad
    vertices at positions flanked by a good vertex and finally keeping
    first occurrences of good vertices.
    """
    bad = chains.vertices()
    multigraph = MultiEdgeSet()
    for u, v, wt in cst.edges:
        multigraph.add(u, v, wt)
    for idx in matching.doubled_chains:
        chain = chains.chains[idx]
        for a, b in zip(chain, chain[1:]):
            multigraph.add(a, b, g.w(a, b))
    for u, v, wt in matching.cross_edges:
        multigraph.add(u, v, wt)

    tree_good_nbrs: dict[int, set[int]] = {}
    for u, v, _ in cst.edges:
        if u in bad and v not in bad:
            tree_good_nbrs.setdefault(u, set()).add(v)
        elif v in bad and u not in bad:
            tree_good_nbrs.setdefault(v, set()).add(u)

    for idx in matching.doubled_chains:
        chain = chains.chains[idx]
        ends = sorted((chain[0], chain[-1]))
        candidates = [e for e in ends if len(tree_good_nbrs.get(e, ())) >= 2]
        if not candidates:
            raise StructureViolated("doubled chain lacks a well-connected endpoint")
        e = candidates[0]
        far = chain[-1] if e == chain[0] else chain[0]
        v = min(tree_good_nbrs[e])
        chain_weight = g.path_weight(chain)
        delta = g.w(v, far) - g.w(v, e) - chain_weight
        safety.check_weight_nonincrease(delta, 0, "shortcut_alg2 chain rewrite")
        for a, b in zip(chain, chain[1:]):
            multigraph.remove(a, b)
        multigraph.remove(e, v)
        multigraph.add(v, far, g.w(v, far))

    walk = list(eulerian_tour(multigraph).order)
    start_weight = multigraph.total_weight

    # repeated bad vertices: keep the occurrence with the most bad flanks
    changed = True
    while changed:
        changed = False
        for b in sorted(bad):
            positions = [i for i, x in enumerate(walk) if x == b]
            if len(positions) <= 1:
                continue

            def bad_flanks(pos: int) -> int:
                prev = walk[(pos - 1) % len(walk)]
                nxt = walk[(pos + 1) % len(walk)]
                return (prev in bad) + (nxt in bad)

            keep = max(positions, key=lambda pos: (bad_flanks(pos), -pos))
            drop = next(p for p in positions if p != keep)
            prev = walk[(drop - 1) % len(walk)]
            nxt = walk[(drop + 1) % len(walk)]
            if prev in bad and nxt in bad:
                raise StructureViolated("repeated bad vertex locked between bad flanks")
            walk = _remove_walk_position(g, walk, drop, "shortcut_alg2 bad dedup")
            changed = True
            break

    # repeated good vertices: keep first occurrences
    seen: set[int] = set()
    i = 0
    while i < len(walk):
        v = walk[i]
        if v in seen:
            walk = _remove_walk_position(g, walk, i, "shortcut_alg2 good dedup")
            continue
        seen.add(v)
        i += 1

    weight = g.tour_weight(walk)
    safety.check_weight_nonincrease(weight, start_weight, "shortcut_alg2 total")
    safety.check_hamiltonian(walk, g.n, "shortcut_alg2")
    return Tour.canonical(walk, weight)


def _cycle_edges(order: Sequence[int], g: WeightedGraph) -> list[tuple[int, int, int]]:
    out = []
    for i in range(len(order)):
        a, b = order[i - 1], order[i]
        out.append((min(a, b), max(a, b), g.w(a, b)))
    return out


def alg1(
    g: WeightedGraph,
    partition: VertexPartition | None = None,
    hk_cap: int = 20,
) -> SolveReport:
    """Splice an exact bad-side tour with an approximate good-side tour.

    The bad vertices plus the smallest good vertex get an exact tour; the
    good vertices get a 3/2-approximate tour; gluing the two closed walks
    at the shared vertex and shortcutting its second visit gives a tour
    within 5/2 of optimal.
    """
    t0 = time.perf_counter()
    if partition is None:
        partition = bad_vertices_p(g)
    if partition.kind != "byP":
        raise ValueError("alg1 expects a byP partition")
    p = partition.size
    q = min_violating_set(g).size
    if p == 0:
        tour = christofides(g)
    elif len(partition.good) < 3:
        tour = held_karp_tour(g, cap=hk_cap)
    else:
        bad = sorted(partition.bad)
        gateway = min(partition.good)
        exact_part = held_karp_tour(g, bad + [gateway], cap=hk_cap)
        good_part = christofides(g, sorted(partition.good))
        multigraph = MultiEdgeSet()
        for u, v, wt in _cycle_edges(exact_part.order, g) + _cycle_edges(good_part.order, g):
            multigraph.add(u, v, wt)
        walk = eulerian_tour(multigraph)
        tour = shortcut_metric(walk, g, range(g.n))
        safety.check_hamiltonian(list(tour.order), g.n, "alg1")
    wall_ms = int((time.perf_counter() - t0) * 1000)
    return SolveReport(
        algorithm="alg1",
        tour=list(tour.order),
        weight=tour.weight,
        opt=None,
        ratio=None,
        p=p,
        q=q,
        guesses_evaluated=1,
        guesses_skipped=0,
        wall_time_ms=wall_ms,
    )


def alg2(
    g: WeightedGraph,
    partition: VertexPartition | None = None,
    chain_cap: int = CHAIN_CAP,
    hk_cap: int = 20,
) -> SolveReport:
    """Best tour over all groupings of bad vertices into chains.

    Every grouping yields a constrained spanning tree, a parity matching,
    and a shortcut tour; the lightest result is kept (ties by tour order).
    The grouping matching an optimal tour is always in the enumeration,
    which bounds the result by 3/2 of optimal.
    """
    t0 = time.perf_counter()
    if partition is None:
        partition = bad_vertices_p(g)
    if partition.kind != "byP":
        raise ValueError("alg2 expects a byP partition")
    p = partition.size
    q = min_violating_set(g).size
    evaluated = 0
    skipped = 0
    if p == 0:
        best = christofides(g)
        evaluated = 1
    elif not partition.good:
        best = held_karp_tour(g, cap=hk_cap)
        evaluated = 1
    else:
        best: Tour | None = None
        for chains in enumerate_bad_chains(sorted(partition.bad), cap=chain_cap):
            try:
                cst = build_cst(g, chains)
                pm = parity_matching_alg2(g, chains, cst)
                tour = shortcut_alg2(g, chains, cst, pm)
            except StructureViolated:
                skipped += 1
                continue
            evaluated += 1
            if best is None or (tour.weight, tour.order) < (best.weight, best.order):
                best = tour
        if best is None:
            raise InvariantViolation("all chain guesses failed")
    wall_ms = int((time.perf_counter() - t0) * 1000)
    return SolveReport(
        algorithm="alg2",
        tour=list(best.order),
        weight=best.weight,
        opt=None,
        ratio=None,
        p=p,
        q=q,
        guesses_evaluated=evaluated,
        guesses_skipped=skipped,
        wall_time_ms=wall_ms,
    )
